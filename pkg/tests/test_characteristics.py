import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from shortpulse.characteristics import (
    PhaseState,
    blowup_conditions,
    blowup_time_bound,
    homogeneous_blowup_time,
    homogeneous_solution,
    in_domain_D,
    integrate_full_system,
    integrate_lower_system,
    lyapunov,
    sigma,
    trace_characteristic,
    upper_blowup_time,
    upper_solution,
)
from shortpulse.criteria import BreakingBounds
from shortpulse.errors import BlowupPassedError, CriterionInapplicableError, InvalidArgumentError
from shortpulse.exact import FamilySpec
from shortpulse.fields import PeriodicField
from shortpulse.solver import SimConfig, simulate

UNIT = BreakingBounds(1.0, 1.0)


def test_lyapunov_and_sigma_examples():
    assert lyapunov(PhaseState(1.0, 0.0), UNIT) == pytest.approx(-0.75)
    assert sigma(1.0, UNIT) == pytest.approx(-math.sqrt(1.5))
    assert sigma(2.0, UNIT) == 0.0
    assert in_domain_D(PhaseState(1.0, -2.0), UNIT)
    assert not in_domain_D(PhaseState(1.0, -1.0), UNIT)
    assert not in_domain_D(PhaseState(-1.0, -5.0), UNIT)


@given(st.floats(0.1, 10), st.floats(-10, 10), st.floats(0.1, 3), st.floats(0.1, 3))
def test_phase_round_trip(v, w, f0, f1):
    b = BreakingBounds(f0, f1)
    c = PhaseState.from_char(v, w, b).to_char(b)
    assert c.v == pytest.approx(v, rel=1e-12)
    assert c.w == pytest.approx(w, rel=1e-9, abs=1e-9)


def test_sigma_vanishes_on_zero_level():
    x_star = 4 ** (1 / 3)
    assert lyapunov(PhaseState(x_star, 0.0), UNIT) == pytest.approx(0.0, abs=1e-12)
    for x in np.linspace(0.1, x_star * 0.999, 7):
        assert lyapunov(PhaseState(x, sigma(x, UNIT)), UNIT) == pytest.approx(0.0, abs=1e-12)


def test_blowup_bound_examples():
    assert blowup_time_bound(1.0, 2.0, BreakingBounds(1.0, 0.0)) == pytest.approx(1 / math.sqrt(2))
    assert blowup_time_bound(1.0, 3.0, UNIT) == pytest.approx(1 / math.sqrt(2.5))


def test_blowup_bound_inapplicable():
    assert not blowup_conditions(1.0, 0.5, UNIT)
    with pytest.raises(CriterionInapplicableError):
        blowup_time_bound(1.0, 0.5, UNIT)


def test_homogeneous_blowup_time():
    assert homogeneous_blowup_time(1.0, 2.0, 1.0) == pytest.approx(2 - math.sqrt(2))
    assert homogeneous_blowup_time(1.0, 1.0, 1.0) == math.inf


@given(st.floats(0.2, 3), st.floats(0.5, 4), st.floats(0.0, 1.0))
def test_homogeneous_run_matches_closed_form(v0, w0, f0):
    t_star = homogeneous_blowup_time(v0, w0, f0)
    run = integrate_lower_system(v0, w0, BreakingBounds(f0, 0.0), t_max=min(5.0, 2 * t_star))
    v_exact, _ = homogeneous_solution(v0, w0, f0, run.times)
    # compare 1/V: large V carries only the phase error of the blow-up time
    assert np.max(np.abs(1 / run.column("v") - 1 / v_exact)) < 1e-6
    if math.isfinite(t_star):
        assert run.blew_up
        assert run.t_star == pytest.approx(t_star, abs=1e-6)


def test_upper_solution():
    assert upper_blowup_time(0.0 + 1e-300, 1.0) == pytest.approx(math.pi / 2)
    assert upper_solution(1.0, 1.0, 0.0) == pytest.approx(1.0)
    with pytest.raises(BlowupPassedError):
        upper_solution(1.0, 1.0, 1.0)


def test_lower_run_that_does_not_blow_up():
    run = integrate_lower_system(1.0, 0.0, UNIT, t_max=10.0)
    assert not run.blew_up
    assert run.reason in ("diverged", "t_max")


def test_full_system_is_bracketed():
    b = BreakingBounds(1.0, 2.0)
    v0, w0 = 1.0, 2.0
    full = integrate_full_system(v0, w0, b)
    lower = integrate_lower_system(v0, w0, b)
    upper = upper_blowup_time(v0, b.f1)
    assert full.blew_up and lower.blew_up
    assert upper <= full.t_star <= lower.t_star
    u = full.column("u")
    assert np.max(np.abs(u)) <= b.f1


def test_full_system_validates_u0():
    with pytest.raises(InvalidArgumentError):
        integrate_full_system(1.0, 5.0, UNIT)


def test_trace_zero_solution():
    cfg = SimConfig(n=64, t_end=0.5, save_every=1)
    traj = simulate(PeriodicField(1.0, np.zeros(64)), cfg)
    tr = trace_characteristic(traj, 0.3)
    assert np.allclose(tr.positions, 0.3)
    assert np.allclose(tr.jacobian, 1.0)
    assert tr.reason == "completed"


def test_trace_dispersionless_advection():
    # u is constant along dX/dt = -u^2/2 without the nonlocal term
    a = 0.3
    cfg = SimConfig(n=512, t_end=0.5, save_every=1, dispersionless=True)
    traj = simulate(FamilySpec("cosine", a=a).periodic_field(512), cfg)
    xi = 0.1
    tr = trace_characteristic(traj, xi)
    u0 = a * math.cos(2 * math.pi * xi)
    assert np.allclose(tr.positions, xi - 0.5 * u0**2 * tr.times, atol=1e-6)
    assert np.allclose(tr.u, u0, atol=1e-6)
    assert tr.residual < 1e-4


def test_trace_jacobian_positive_before_breaking():
    cfg = SimConfig(n=1024, t_end=1.0, save_every=1)
    traj = simulate(FamilySpec("cosine", a=0.5).periodic_field(1024), cfg)
    tr = trace_characteristic(traj, 0.2)
    assert tr.reason == "completed"
    assert np.all(tr.jacobian > 0)
    assert tr.residual < 1e-2


def test_phase_plane_examples():
    assert lyapunov(PhaseState(0.0, 0.0), UNIT) == 0.0
    x_star = 4 ** (1 / 3)
    assert in_domain_D(PhaseState(x_star + 1, -1.0), UNIT)
    assert not in_domain_D(PhaseState(1.0, 0.0), UNIT)


def test_upper_blowup_time_examples():
    assert upper_blowup_time(1.0, 1.0) == pytest.approx(math.pi / 4)
    assert upper_blowup_time(1e-12, 1.0) == pytest.approx(math.pi / 2)


def test_lower_run_without_blowup_decreases_first():
    run = integrate_lower_system(1.0, 0.0, UNIT, t_max=5.0)
    assert not run.blew_up
    assert run.column("v")[1] < 1.0
