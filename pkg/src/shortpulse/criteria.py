"""Well-posedness margin and sufficient wave-breaking conditions."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import CriterionInapplicableError, DegenerateProfileError, NoCrossingError
from .exact import (
    PulseParams,
    cosine_closed_invariants,
    cosine_derivative,
    cosine_profile,
    gaussian_derivative,
    gaussian_line_field,
    gaussian_profile,
    pulse_line_integrals,
    pulse_partials,
    pulse_profile,
    pulse_sup_norms,
    pulse_x_derivatives,
    pulse_y_grid,
)
from .invariants import InvariantSet, compute_invariants


@dataclass(frozen=True)
class BreakingBounds:
    f0: float  # bound on sup |d_x^{-1} u|
    f1: float  # bound on sup |u|

    @property
    def degenerate(self) -> bool:
        return self.f0 == 0 or self.f1 == 0

    def threshold(self) -> float:
        """Slope level (F1^2 / 4 F0)^(1/3) splitting I1 from I2."""
        return (self.f1**2 / (4 * self.f0)) ** (1 / 3)


@dataclass(frozen=True)
class CriterionReport:
    f1_score: float
    f2_score: float
    i1_empty: bool
    i2_empty: bool
    breaking_predicted: bool
    argmax_x: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def breaking_bounds_line(inv: InvariantSet) -> BreakingBounds:
    if inv.domain != "line":
        raise CriterionInapplicableError("line bounds need line invariants")
    e0, e1 = inv.e0, inv.e1
    f1 = math.sqrt((e1**2 + math.sqrt(8 * e0 * e1 + e1**4)) / 2)
    radicand = (e0 + inv.e_minus1 + e0 * f1**2 / 12) / 2
    if radicand < 0:
        raise CriterionInapplicableError(f"negative radicand {radicand:.3e} in F0")
    return BreakingBounds(math.sqrt(radicand), f1)


def breaking_bounds_periodic(inv: InvariantSet) -> BreakingBounds:
    if inv.domain != "circle":
        raise CriterionInapplicableError("periodic bounds need circle invariants")
    return BreakingBounds(math.sqrt(inv.e0), inv.e1)


def wellposedness_margin(inv: InvariantSet) -> float:
    """2 sqrt(2 E1 E2); below 1 certifies global well-posedness."""
    if inv.domain != "line":
        raise CriterionInapplicableError("the margin is defined on the line")
    return 2 * math.sqrt(2 * inv.e1 * inv.e2)


def _scores(u, du, bounds: BreakingBounds):
    """Pointwise (f1, f2) integrands, -inf outside I1 / I2."""
    u, du = np.asarray(u, dtype=float), np.asarray(du, dtype=float)
    gain = np.abs(u) * du**2 - bounds.f1
    candidate = u * du > 0
    steep = np.abs(du) > bounds.threshold()
    in1, in2 = candidate & ~steep, candidate & steep
    radicand = np.maximum(2 * bounds.f0 * np.abs(du) ** 3 - bounds.f1**2 / 2, 0.0)
    s1 = np.where(in1, gain, -np.inf)
    s2 = np.where(in2, gain - np.sqrt(radicand), -np.inf)
    return s1, s2, in1, in2


def _polish(score_at, x, i, which, node_score):
    """Bounded scalar maximisation of one score between the neighbours of node i."""
    lo, hi = x[max(i - 1, 0)], x[min(i + 1, x.size - 1)]
    best_x, best = x[i], node_score
    if hi <= lo:
        return best_x, best
    # -inf outside the set would confuse the parabolic steps
    objective = lambda s: -max(score_at(s)[which], best - 1.0)
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, abs(x[i]))})
    val = score_at(res.x)[which]
    # the refined point may fall outside the set; then keep the node
    if np.isfinite(val) and val > best:
        return float(res.x), float(val)
    return float(best_x), float(best)


def evaluate_breaking_criterion(x, u, du, bounds: BreakingBounds, refine=None) -> CriterionReport:
    """Sufficient breaking test on a sampled profile.

    ``refine``, if given, maps a scalar x to ``(u, u_x)`` and is used to
    polish each supremum around its best node.
    """
    x, u, du = (np.asarray(a, dtype=float) for a in (x, u, du))
    if not np.any(u) and not np.any(du):
        raise DegenerateProfileError("profile is identically zero")
    if bounds.f0 == 0:
        return CriterionReport(-math.inf, -math.inf, True, True, False, math.nan)
    s1, s2, in1, in2 = _scores(u, du, bounds)
    best = []
    for which, s in enumerate((s1, s2)):
        if not np.any(np.isfinite(s)):
            best.append((math.nan, -math.inf))
            continue
        i = int(np.argmax(s))
        if refine is None:
            best.append((float(x[i]), float(s[i])))
        else:
            def score_at(xi):
                ui, dui = refine(xi)
                a, b, _, _ = _scores(np.atleast_1d(ui), np.atleast_1d(dui), bounds)
                return float(a[0]), float(b[0])
            best.append(_polish(score_at, x, i, which, float(s[i])))
    (x1, f1), (x2, f2) = best
    return CriterionReport(
        f1_score=f1,
        f2_score=f2,
        i1_empty=not bool(np.any(in1)),
        i2_empty=not bool(np.any(in2)),
        breaking_predicted=bool(f1 > 0 or f2 > 0),
        argmax_x=x1 if f1 >= f2 else x2,
    )


def threshold_scan(predicate, lo: float, hi: float, tol: float = 1e-3) -> float:
    """Bisect for the parameter where a boolean ``predicate`` changes value."""
    p_lo, p_hi = bool(predicate(lo)), bool(predicate(hi))
    if p_lo == p_hi:
        raise NoCrossingError(f"predicate is {p_lo} at both ends of [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if bool(predicate(mid)) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------- family verdicts


def cosine_invariants(a: float) -> InvariantSet:
    e0, e1 = cosine_closed_invariants(a)
    # E_{-1} in closed form, E_2 by periodic trapezoid
    e_minus1 = a**2 / (8 * math.pi**2) - 3 * a**4 / 96
    e2 = float(np.mean((4 * math.pi**2 * a * np.cos(2 * math.pi * np.arange(4096) / 4096)) ** 2
                       / (1 + cosine_derivative(a, np.arange(4096) / 4096) ** 2) ** 2.5))
    return InvariantSet(e_minus1, e0, e1, e2, "circle")


def cosine_criterion(a: float, n: int = 4096) -> tuple[BreakingBounds, CriterionReport]:
    bounds = breaking_bounds_periodic(cosine_invariants(a))
    x = np.arange(n) / n
    report = evaluate_breaking_criterion(
        x, cosine_profile(a, x), cosine_derivative(a, x), bounds,
        refine=lambda s: (cosine_profile(a, s), cosine_derivative(a, s)),
    )
    return bounds, report


def gaussian_criterion(a: float, b: float, n: int = 4001):
    """(invariants, bounds, report, margin) for the Gaussian family with line bounds."""
    field = gaussian_line_field(a, b, n)
    inv = compute_invariants(field)
    bounds = breaking_bounds_line(inv)
    report = evaluate_breaking_criterion(
        field.x, field.samples, field.ux, bounds,
        refine=lambda s: (gaussian_profile(a, b, s), gaussian_derivative(a, b, s)),
    )
    return inv, bounds, report, wellposedness_margin(inv)


def pulse_invariants(m: float, t: float = 0.0) -> InvariantSet:
    return InvariantSet(domain="line", **pulse_line_integrals(PulseParams(m), t))


def pulse_sup_bounds(m: float) -> BreakingBounds:
    """Space-time suprema of |d_x^{-1} u| and |u| for the exact pulse."""
    f0, f1 = pulse_sup_norms(PulseParams(m))
    return BreakingBounds(f0, f1)


def pulse_criterion(m: float, bounds: BreakingBounds | None = None, dy: float = 0.01):
    """Criterion on the pulse at t = 0, sampled along the parameter y.

    Defaults to the space-time supremum bounds, which make the verdict
    invariant under rescaling.
    """
    p = PulseParams(m)
    bounds = pulse_sup_bounds(m) if bounds is None else bounds
    y = pulse_y_grid(p, 0.0, dy)
    parts = pulse_partials(p, y, 0.0)
    ux, _ = pulse_x_derivatives(parts)

    def refine(s):
        prof = pulse_profile(p, 0.0, np.atleast_1d(s))
        return prof["u"], prof["ux"]

    report = evaluate_breaking_criterion(parts["X"], parts["U"], ux, bounds, refine=refine)
    return bounds, report
