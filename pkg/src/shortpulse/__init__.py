"""Wave breaking in the short-pulse equation: invariants, criteria,
characteristic comparison systems, exact pulses and a pseudospectral solver."""

__version__ = "0.1.0"

from .analysis import BlowupFit, fit_blowup, pulse_box_error, scan_cosine, scan_gaussian
from .characteristics import (
    CharacteristicTrace,
    CharState,
    PhaseState,
    blowup_time_bound,
    in_domain_D,
    integrate_full_system,
    integrate_lower_system,
    lyapunov,
    trace_characteristic,
    upper_blowup_time,
    upper_solution,
)
from .criteria import (
    BreakingBounds,
    CriterionReport,
    breaking_bounds_line,
    breaking_bounds_periodic,
    evaluate_breaking_criterion,
    threshold_scan,
    wellposedness_margin,
)
from .errors import *  # noqa: F401,F403
from .exact import (
    M_CR,
    FamilySpec,
    PulseParams,
    cosine_closed_invariants,
    gaussian_closed_invariants,
    gaussian_profile,
    cosine_profile,
    pulse_parametric,
    pulse_sample,
    pulse_x_jacobian,
)
from .fields import (
    LineField,
    PeriodicField,
    antiderivative_line,
    antiderivative_periodic,
    interpolate,
    quadrature,
    spectral_derivative,
)
from .invariants import InvariantSet, compute_invariants, scaling_transform
from .solver import SimConfig, Trajectory, rhs, simulate, sup_uux
