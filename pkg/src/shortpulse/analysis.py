"""Blow-up regression and parameter scans."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
import csv
import math

import numpy as np

from .criteria import cosine_criterion, gaussian_criterion
from .errors import InvalidArgumentError, NotBreakingError, ShortPulseError
from .exact import FamilySpec
from .solver import SimConfig, simulate


@dataclass(frozen=True)
class BlowupFit:
    a: float
    b: float
    c: float
    t_break: float
    window: tuple[float, float]
    rms_residual: float
    samples: int


def fit_blowup(times, w, window=None, w_floor: float = 10.0, frac: float = 0.05,
               min_samples: int = 20) -> BlowupFit:
    """Least squares of 1/W against t over the tail where W is large.

    With ``window=(t0, t1)`` the tail is given explicitly; otherwise it is
    the last unbroken run of samples with W > max(w_floor, frac * W_last).
    """
    times, w = np.asarray(times, dtype=float), np.asarray(w, dtype=float)
    if times.shape != w.shape or times.size == 0:
        raise InvalidArgumentError("times and W must be non-empty and of equal length")
    if window is not None:
        sel = (times >= window[0]) & (times <= window[1]) & (w > 0)
        idx = np.nonzero(sel)[0]
    else:
        level = max(w_floor, frac * w[-1])
        above = w > level
        if not above[-1]:
            raise NotBreakingError(f"final W = {w[-1]:.4g} is not above the tail level {level:.4g}")
        start = w.size - 1
        while start > 0 and above[start - 1]:
            start -= 1
        idx = np.arange(start, w.size)
    if idx.size < min_samples:
        raise NotBreakingError(f"only {idx.size} samples in the tail, need {min_samples}")
    t_sel, w_sel = times[idx], w[idx]
    if window is None and not w_sel[-1] > w_sel[0]:
        raise NotBreakingError("W is not growing over the tail")
    b, a = np.polyfit(t_sel, 1.0 / w_sel, 1)
    if not b < 0:
        raise NotBreakingError(f"1/W does not decrease over the tail (slope {b:.3g})")
    resid = 1.0 / w_sel - (a + b * t_sel)
    return BlowupFit(
        a=float(a),
        b=float(b),
        c=float(-1.0 / b),
        t_break=float(-a / b),
        window=(float(t_sel[0]), float(t_sel[-1])),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        samples=int(idx.size),
    )


def dispersionless_breaking_time(a: float) -> float:
    """1 / sup(u0 u0') for u0 = a cos(2 pi x)."""
    return 1.0 / (math.pi * a**2)


def _cosine_row(a: float, cfg: SimConfig, fit_kwargs: dict) -> dict:
    row = {"a": a, "T": math.nan, "C": math.nan, "T0": dispersionless_breaking_time(a),
           "breaking": cosine_criterion(a)[1].breaking_predicted, "error": ""}
    try:
        traj = simulate(FamilySpec("cosine", a=a).periodic_field(cfg.n, cfg.L), cfg)
        fit = fit_blowup(traj.step_times, traj.w_series, **fit_kwargs)
        row.update(T=fit.t_break, C=fit.c)
    except (ShortPulseError, ArithmeticError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def scan_cosine(a_values, cfg: SimConfig, workers: int = 1, **fit_kwargs) -> list[dict]:
    """One simulation and blow-up fit per amplitude; failures stay in their row."""
    a_values = [float(a) for a in a_values]
    if any(a <= 0 for a in a_values):
        raise InvalidArgumentError("amplitudes must be positive")
    if cfg.L != 1.0:
        cfg = replace(cfg, L=1.0)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_cosine_row, a_values, [cfg] * len(a_values),
                                 [fit_kwargs] * len(a_values)))
    return [_cosine_row(a, cfg, fit_kwargs) for a in a_values]


def scan_gaussian(a_grid, b_grid, n: int = 4001) -> list[dict]:
    rows = []
    for b in b_grid:
        for a in a_grid:
            if a <= 0 or b <= 0:
                raise InvalidArgumentError("grid values must be positive")
            _, _, report, margin = gaussian_criterion(float(a), float(b), n)
            rows.append({"a": float(a), "b": float(b), "wellposed": margin < 1,
                         "breaking": report.breaking_predicted, "margin": margin})
    return rows


SCAN_COLUMNS = ("a", "b", "T", "C", "T0", "wellposed", "breaking")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return f"{float(value):.17g}"


def write_scan_csv(rows: list[dict], path) -> None:
    """Rows to CSV with the fixed column order, dropping columns the scan lacks."""
    cols = [c for c in SCAN_COLUMNS if rows and c in rows[0]]
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(cols)
        for row in rows:
            out.writerow([_fmt(row[c]) for c in cols])


def pulse_box_error(m: float, L: float = 40.0, n: int = 2048, t_end: float = 1.0,
                    core: float = 10.0, tail_tol: float = math.inf) -> dict:
    """Evolve the sampled pulse in a periodic box and compare with the exact pulse.

    The box truncates exponentially small tails, so the error is reported
    both over the whole box and over |x| < core. The spectral-tail stop is
    off by default: the pulse does not steepen, and the kink where the
    truncated tails meet at the box edge would trip it.
    """
    from .exact import PulseParams, pulse_sample

    spec = FamilySpec("pulse", m=m)
    u0 = spec.periodic_field(n, L)
    cfg = SimConfig(n=n, L=L, t_end=t_end, save_every=10**9, tail_tol=tail_tol)
    traj = simulate(u0, cfg)
    x = u0.x
    err = np.abs(traj.final.samples - pulse_sample(PulseParams(m), traj.times[-1], x))
    inner = np.abs(x) < core
    return {
        "max_error": float(err.max()),
        "core_error": float(err[inner].max()),
        "argmax_x": float(x[np.argmax(err)]),
        "edge_value": float(max(abs(u0.samples[0]), abs(u0.samples[-1]))),
        "t": float(traj.times[-1]),
        "stop_reason": traj.stop_reason,
    }
