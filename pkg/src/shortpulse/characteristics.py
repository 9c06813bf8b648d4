"""Characteristic slope systems, phase-plane geometry and blow-up times.

Along a characteristic ``X(xi, t)`` with ``dX/dt = -u^2 / 2`` the slope
``V = u_x`` and ``W = u u_x`` obey comparison systems whose blow-up brackets
the true breaking time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .criteria import BreakingBounds
from .errors import BlowupPassedError, CriterionInapplicableError, InvalidArgumentError
from .fields import antiderivative_periodic, interpolate, spectral_derivative


@dataclass(frozen=True)
class CharState:
    v: float
    w: float
    u: float = math.nan
    g: float = math.nan


@dataclass(frozen=True)
class PhaseState:
    x: float
    xdot: float

    @classmethod
    def from_char(cls, v: float, w: float, bounds: BreakingBounds) -> "PhaseState":
        x = 1.0 / v
        return cls(x, bounds.f1 * x**2 - w * x)

    def to_char(self, bounds: BreakingBounds) -> CharState:
        y = bounds.f1 * self.x**2 - self.xdot
        return CharState(1.0 / self.x, y / self.x)


def _crit_points(bounds: BreakingBounds) -> tuple[float, float]:
    """(x0, x_*): minimum of the Lyapunov function and end of its zero level."""
    if bounds.f1 == 0:
        return math.inf, math.inf
    x0 = (bounds.f0 / bounds.f1**2) ** (1 / 3)
    return x0, 4 ** (1 / 3) * x0


def lyapunov(p: PhaseState, bounds: BreakingBounds) -> float:
    return 0.5 * p.xdot**2 - bounds.f0 * p.x + 0.25 * bounds.f1**2 * p.x**4


def sigma(x: float, bounds: BreakingBounds) -> float:
    """Upper edge of the trapping domain D at abscissa x > 0."""
    _, x_star = _crit_points(bounds)
    if x >= x_star:
        return 0.0
    return -math.sqrt(max(2 * bounds.f0 * x - 0.5 * bounds.f1**2 * x**4, 0.0))


def in_domain_D(p: PhaseState, bounds: BreakingBounds) -> bool:
    return p.x > 0 and p.xdot < sigma(p.x, bounds)


def blowup_conditions(v0: float, w0: float, bounds: BreakingBounds) -> bool:
    """Sufficient conditions on (V0, W0) for blow-up of the lower system."""
    if v0 <= 0:
        return False
    f0, f1 = bounds.f0, bounds.f1
    thr = math.inf if f0 == 0 else bounds.threshold()
    if v0 > thr:
        return v0 * w0 > f1 + math.sqrt(2 * f0 * v0**3 - 0.5 * f1**2)
    return v0 * w0 > f1


def blowup_time_bound(v0: float, w0: float, bounds: BreakingBounds) -> float:
    if not blowup_conditions(v0, w0, bounds):
        raise CriterionInapplicableError(f"(V0, W0) = ({v0}, {w0}) fails the blow-up conditions")
    vdot = v0 * w0 - bounds.f1
    radicand = vdot**2 - 2 * bounds.f0 * v0**3 + 0.5 * bounds.f1**2
    # for V0 below the threshold the radicand may be negative; then V0 / Vdot is the bound
    denom = vdot if radicand < 0 else min(vdot, math.sqrt(radicand))
    return v0 / denom


def homogeneous_solution(v0: float, w0: float, f0: float, t):
    """Explicit (V, W) of the lower system with F1 = 0."""
    t = np.asarray(t, dtype=float)
    c = w0 / v0
    v = v0 / (1 - c * v0 * t + 0.5 * f0 * v0 * t**2)
    return v, (c - f0 * t) * v


def homogeneous_blowup_time(v0: float, w0: float, f0: float) -> float:
    disc = w0**2 - 2 * f0 * v0
    if v0 <= 0 or disc <= 0 or w0 <= 0:
        return math.inf
    # smaller root of 1 - w0 t + f0 v0 t^2 / 2, written without cancellation
    return 2.0 / (w0 + math.sqrt(disc))


# ---------------------------------------------------------------- ODE runs


@dataclass
class OdeRun:
    times: np.ndarray
    states: np.ndarray  # one row per time; columns depend on the system
    blew_up: bool
    t_star: float
    reason: str
    columns: tuple = field(default=("v", "w"))

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.columns.index(name)]


def _rk4_step(f, t, y, dt):
    k1 = f(t, y)
    k2 = f(t + dt / 2, y + dt / 2 * k1)
    k3 = f(t + dt / 2, y + dt / 2 * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _extrapolate_zero(t: np.ndarray, r: np.ndarray) -> float:
    """Time where 1/V reaches zero, from a quadratic through the last three samples."""
    tt, rr = t[-3:], r[-3:]
    # rescale time so the fit stays well conditioned when steps are tiny
    scale = tt[-1] - tt[0]
    s = (tt - tt[-1]) / scale
    roots = np.roots(np.polyfit(s, rr, min(2, s.size - 1)))
    roots = roots[np.isreal(roots)].real
    ahead = roots[roots >= -1e-12]
    if ahead.size:
        return float(tt[-1] + scale * ahead.min())
    slope = (r[-1] - r[-2]) / (t[-1] - t[-2])
    return float(t[-1] - r[-1] / slope)


def _integrate_blowup(rhs, y0, dt: float, t_max: float, v_cap: float, dt_min: float = 1e-15,
                      columns=("v", "w")) -> OdeRun:
    if dt <= 0 or t_max <= 0:
        raise InvalidArgumentError("dt and t_max must be positive")
    t, y = 0.0, np.asarray(y0, dtype=float)
    times, states = [t], [y]
    reason, blew_up = "t_max", False
    while t < t_max:
        h = min(dt, t_max - t)
        # halve while V would move by more than 10% in one step
        vdot = rhs(t, y)[0]
        while abs(vdot) * h > 0.1 * max(abs(y[0]), 1.0) and h > dt_min:
            h *= 0.5
        if h <= dt_min:
            reason = "dt_underflow"
            break
        y = _rk4_step(rhs, t, y, h)
        t += h
        if not np.all(np.isfinite(y)):
            reason = "diverged"
            break
        times.append(t)
        states.append(y)
        if y[0] > v_cap:
            reason, blew_up = "blowup", True
            break
        if abs(y[0]) > v_cap or np.max(np.abs(y[1:])) > v_cap**2:
            reason = "diverged"
            break
    times_a, states_a = np.array(times), np.array(states)
    t_star = _extrapolate_zero(times_a, 1.0 / states_a[:, 0]) if blew_up else math.inf
    return OdeRun(times_a, states_a, blew_up, t_star, reason, tuple(columns))


def integrate_lower_system(v0: float, w0: float, bounds: BreakingBounds, dt: float = 1e-3,
                           t_max: float = 10.0, v_cap: float = 1e6) -> OdeRun:
    if v0 <= 0:
        raise InvalidArgumentError("V0 must be positive")
    f0, f1 = bounds.f0, bounds.f1

    def rhs(_t, s):
        v, w = s
        return np.array([v * w - f1, w * w - v * f0])

    return _integrate_blowup(rhs, [v0, w0], dt, t_max, v_cap)


def upper_blowup_time(v0: float, f1: float) -> float:
    if v0 <= 0 or f1 <= 0:
        raise InvalidArgumentError("V0 and F1 must be positive")
    return (math.pi / 2 - math.atan(v0)) / f1


def upper_solution(v0: float, f1: float, t):
    """Supersolution tan(arctan V0 + F1 t) of dV/dt = F1 (V^2 + 1)."""
    t_star = upper_blowup_time(v0, f1)
    t = np.asarray(t, dtype=float)
    if np.any(t >= t_star):
        raise BlowupPassedError(f"t reaches the blow-up time {t_star:.6g}")
    out = np.tan(math.atan(v0) + f1 * t)
    return float(out) if out.ndim == 0 else out


def bounded_forcing(bounds: BreakingBounds, omega: float = 3.0):
    """A closure G(t, U) with |G| <= F0 that keeps |U| <= F1 along the flow."""
    f0, f1 = bounds.f0, bounds.f1

    def g(t, u):
        return f0 * math.cos(omega * t) * max(1.0 - (u / f1) ** 2, 0.0)

    return g


def integrate_full_system(v0: float, w0: float, bounds: BreakingBounds, g=None, dt: float = 1e-3,
                          t_max: float = 10.0, v_cap: float = 1e6) -> OdeRun:
    """Full slope system with U = W / V driven by dU/dt = G(t, U)."""
    if v0 <= 0:
        raise InvalidArgumentError("V0 must be positive")
    u0 = w0 / v0
    if abs(u0) > bounds.f1:
        raise InvalidArgumentError(f"|U0| = {abs(u0):.4g} exceeds F1 = {bounds.f1:.4g}")
    g = bounded_forcing(bounds) if g is None else g

    def rhs(t, s):
        v, w, u = s
        gu = g(t, u)
        return np.array([v * w + u, w * w + v * gu + u * u, gu])

    return _integrate_blowup(rhs, [v0, w0, u0], dt, t_max, v_cap, columns=("v", "w", "u"))


# ------------------------------------------------- tracing through a PDE run


@dataclass(frozen=True)
class CharacteristicTrace:
    xi: float
    times: np.ndarray
    positions: np.ndarray
    jacobian: np.ndarray
    u: np.ndarray
    w: np.ndarray
    residual: float  # max |dU/dt - G| along the trace
    reason: str


def trace_characteristic(traj, xi: float) -> CharacteristicTrace:
    """Follow dX/dt = -u^2/2 through the saved fields of a solver trajectory.

    Heun steps between consecutive saves; u is spectrally interpolated.
    """
    fields = list(traj.fields)
    times = np.asarray(traj.times, dtype=float)
    dispersionless = bool(traj.config.dispersionless)

    def sample(k, x):
        f = fields[k]
        u = interpolate(f, x)
        ux = interpolate(spectral_derivative(f, 1), x)
        g = 0.0 if dispersionless else interpolate(antiderivative_periodic(f, 1e-9), x)
        return u, ux, g

    pos, us, ws, gs = [xi], [], [], []
    u, ux, g = sample(0, xi)
    us.append(u), ws.append(u * ux), gs.append(g)
    reason = "completed"
    for k in range(1, len(fields)):
        h = times[k] - times[k - 1]
        x_pred = pos[-1] - 0.5 * h * us[-1] ** 2
        u_pred = sample(k, x_pred)[0]
        x_new = pos[-1] - 0.25 * h * (us[-1] ** 2 + u_pred**2)
        u, ux, g = sample(k, x_new)
        if not all(map(math.isfinite, (x_new, u, ux))):
            reason = "nonfinite"
            break
        pos.append(x_new), us.append(u), ws.append(u * ux), gs.append(g)
    n = len(pos)
    t = times[:n]
    w = np.array(ws)
    integral = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(t) * (w[1:] + w[:-1]))])
    jac = np.exp(-integral)
    u_arr, g_arr = np.array(us), np.array(gs)
    if n > 1:
        dudt = np.diff(u_arr) / np.diff(t)
        residual = float(np.max(np.abs(dudt - 0.5 * (g_arr[1:] + g_arr[:-1]))))
    else:
        residual = 0.0
    bad = np.nonzero(~(jac > 0))[0]
    if bad.size:
        n = int(bad[0])
        reason = "jacobian_nonpositive"
    return CharacteristicTrace(xi, t[:n], np.array(pos[:n]), jac[:n], u_arr[:n], w[:n], residual, reason)
