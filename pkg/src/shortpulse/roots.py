"""Vectorized safeguarded Newton iteration for monotone increasing maps."""

from __future__ import annotations

import numpy as np


def bracketed_newton(fun, dfun, target, lo, hi, tol: float = 1e-12, maxiter: int = 200):
    """Solve ``fun(y) = target`` elementwise, given ``fun`` increasing on [lo, hi].

    Newton steps that leave the current bracket fall back to bisection, so
    convergence only needs monotonicity and a sign change across the bracket.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    if np.any(fun(lo) > target) or np.any(fun(hi) < target):
        raise ValueError("target not bracketed")
    y = 0.5 * (lo + hi)
    for _ in range(maxiter):
        r = fun(y) - target
        below = r < 0
        lo = np.where(below, y, lo)
        hi = np.where(below, hi, y)
        d = dfun(y)
        with np.errstate(divide="ignore", invalid="ignore"):
            y_new = y - r / d
        bad = ~np.isfinite(y_new) | (y_new <= lo) | (y_new >= hi)
        y_new = np.where(bad, 0.5 * (lo + hi), y_new)
        y_new = np.where(r == 0, y, y_new)  # an exact root also closes the bracket
        step = np.abs(y_new - y)
        y = y_new
        if np.all((step <= tol * np.maximum(1.0, np.abs(y))) | (r == 0)):
            break
    return y
