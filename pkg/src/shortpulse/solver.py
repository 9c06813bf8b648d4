"""Pseudospectral RK4 evolution of u_t = u^2 u_x / 2 + d_x^{-1} u on a circle."""

from __future__ import annotations

from dataclasses import asdict, dataclass
import csv
import math

import numpy as np

from .errors import InvalidArgumentError, ZeroMassError
from .fields import PeriodicField, antiderivative_multiplier, spectral_multiplier

STOP_REASONS = ("completed", "blowup_cap", "drift_exceeded", "dt_underflow", "resolution_lost")


@dataclass(frozen=True)
class SimConfig:
    n: int = 1024
    L: float = 1.0
    cfl: float = 0.25
    t_end: float = 1.0
    save_every: int = 10
    dealias: bool = True
    w_max: float = 1e3
    drift_tol: float = 1e-6
    dispersionless: bool = False
    # stop once the upper third of the retained spectrum holds this fraction of the peak
    tail_tol: float = 1e-6
    w_dt: float = 0.05  # dt <= w_dt / W keeps the steepening front resolved in time
    dt_max: float = 0.01
    dt_min: float = 1e-12

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise InvalidArgumentError("cfl must lie in (0, 1]")
        if not self.w_max > 0:
            raise InvalidArgumentError("w_max must be positive")
        if self.n < 8 or self.n % 2:
            raise InvalidArgumentError("n must be even and >= 8")
        if not self.L > 0 or not self.t_end >= 0 or self.save_every < 1:
            raise InvalidArgumentError("need L > 0, t_end >= 0 and save_every >= 1")


class _Operators:
    """Spectral multipliers for one (n, L) grid."""

    def __init__(self, cfg: SimConfig):
        n, L = cfg.n, cfg.L
        self.n = n
        self.dx = L / n
        self.d1 = spectral_multiplier(n, L, 1)
        self.inv = antiderivative_multiplier(n, L)
        index = np.fft.rfftfreq(n, 1.0 / n)
        self.mask = (index <= n / 3).astype(float) if cfg.dealias else np.ones(index.size)
        self.tail = (index > n / 6) & (index <= n / 3)
        self.dispersionless = cfg.dispersionless

    def rhs(self, u: np.ndarray) -> np.ndarray:
        # u^2 u_x / 2 in conservative form (u^3)_x / 6
        spec = self.d1 * self.mask * np.fft.rfft(u**3) / 6
        if not self.dispersionless:
            spec = spec + self.inv * np.fft.rfft(u)
        return np.fft.irfft(spec, self.n)

    def ux(self, u: np.ndarray) -> np.ndarray:
        return np.fft.irfft(self.d1 * np.fft.rfft(u), self.n)

    def tail_ratio(self, u: np.ndarray) -> float:
        mag = np.abs(np.fft.rfft(u))
        peak = mag.max()
        return float(mag[self.tail].max() / peak) if peak > 0 else 0.0

    def invariants(self, u: np.ndarray, ux: np.ndarray) -> tuple[float, float]:
        return float(np.sum(u**2) * self.dx), float(np.sum(np.sqrt(1 + ux**2)) * self.dx)


def _refined_max(p: np.ndarray) -> float:
    """Maximum of periodic samples, refined by a parabola through the best node."""
    i = int(np.argmax(p))
    a, b, c = p[i - 1], p[i], p[(i + 1) % p.size]
    curv = a - 2 * b + c
    if curv >= 0:
        return float(b)
    return float(b - 0.125 * (c - a) ** 2 / curv)


def sup_uux(f: PeriodicField) -> float:
    """sup over x of u u_x with a spectral derivative."""
    ux = np.fft.irfft(spectral_multiplier(f.n, f.length, 1) * np.fft.rfft(f.samples), f.n)
    return _refined_max(f.samples * ux)


def rhs(f: PeriodicField, cfg: SimConfig) -> PeriodicField:
    if not f.is_mean_zero():
        raise ZeroMassError(f"field mean {f.mean():.3e} is not zero")
    ops = _Operators(SimConfig(**{**asdict(cfg), "n": f.n, "L": f.length}))
    out = ops.rhs(np.asarray(f.samples))
    return f.with_samples(out - out.mean())


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray  # save times
    fields: tuple  # PeriodicField per save
    step_times: np.ndarray
    w_series: np.ndarray  # W at every step_times entry
    invariant_series: np.ndarray  # (E0, E1) per save
    max_u: np.ndarray  # per save
    stop_reason: str
    config: SimConfig

    @property
    def final(self) -> PeriodicField:
        return self.fields[-1]

    def saved_w(self) -> np.ndarray:
        return np.array([sup_uux(f) for f in self.fields])

    def drift(self) -> dict[str, float]:
        e0, e1 = self.invariant_series[:, 0], self.invariant_series[:, 1]
        rel = lambda e: float(np.max(np.abs(e - e[0])) / abs(e[0])) if e[0] else 0.0
        return {"E0": rel(e0), "E1": rel(e1)}

    def to_csv(self, path) -> None:
        w = self.saved_w()
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["t", "W", "E0", "E1", "max_u"])
            for row in zip(self.times, w, self.invariant_series[:, 0], self.invariant_series[:, 1], self.max_u):
                out.writerow([f"{v:.17g}" for v in row])

    def snapshot_csv(self, path, index: int = -1) -> None:
        f = self.fields[index]
        with open(path, "w", newline="") as fh:
            out = csv.writer(fh, lineterminator="\n")
            out.writerow(["x", "u"])
            for x, u in zip(f.x, f.samples):
                out.writerow([f"{x:.17g}", f"{u:.17g}"])


def simulate(u0: PeriodicField, cfg: SimConfig) -> Trajectory:
    if u0.n != cfg.n or not math.isclose(u0.length, cfg.L):
        raise InvalidArgumentError(f"field grid ({u0.n}, {u0.length}) does not match config ({cfg.n}, {cfg.L})")
    if not u0.is_mean_zero():
        raise ZeroMassError(f"initial mean {u0.mean():.3e} is not zero")
    ops = _Operators(cfg)
    u = np.array(u0.samples)
    ux = ops.ux(u)
    e_ref = ops.invariants(u, ux)
    t = 0.0
    w = _refined_max(u * ux)
    step_times, w_series = [0.0], [w]
    saves = [(0.0, u.copy(), e_ref)]
    reason = "completed"
    steps = 0
    while t < cfg.t_end:
        speed = 0.5 * float(np.max(u**2))
        dt = min(cfg.cfl * ops.dx / max(speed, 1e-12), cfg.dt_max, cfg.t_end - t)
        if w > 0:
            dt = min(dt, cfg.w_dt / w)
        if dt < cfg.dt_min and t + dt < cfg.t_end:
            reason = "dt_underflow"
            break
        k1 = ops.rhs(u)
        k2 = ops.rhs(u + 0.5 * dt * k1)
        k3 = ops.rhs(u + 0.5 * dt * k2)
        k4 = ops.rhs(u + dt * k3)
        u_new = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        u_new -= u_new.mean()
        ux_new = ops.ux(u_new)
        e_new = ops.invariants(u_new, ux_new)
        watched = (0,) if cfg.dispersionless else (0, 1)
        drift = max(abs(e_new[i] - e_ref[i]) / abs(e_ref[i]) if e_ref[i] else abs(e_new[i]) for i in watched)
        # rejected steps are discarded so the trajectory ends on a trusted state
        if drift > cfg.drift_tol:
            reason = "drift_exceeded"
            break
        if ops.tail_ratio(u_new) > cfg.tail_tol:
            reason = "resolution_lost"
            break
        u, ux, t = u_new, ux_new, t + dt
        steps += 1
        w = _refined_max(u * ux)
        step_times.append(t)
        w_series.append(w)
        if steps % cfg.save_every == 0:
            saves.append((t, u.copy(), e_new))
        if w > cfg.w_max:
            reason = "blowup_cap"
            break
    if saves[-1][0] != t:
        saves.append((t, u.copy(), ops.invariants(u, ux)))
    return Trajectory(
        times=np.array([s[0] for s in saves]),
        fields=tuple(u0.with_samples(s[1]) for s in saves),
        step_times=np.array(step_times),
        w_series=np.array(w_series),
        invariant_series=np.array([s[2] for s in saves]),
        max_u=np.array([float(np.max(np.abs(s[1]))) for s in saves]),
        stop_reason=reason,
        config=cfg,
    )
