"""Sampled fields on the circle and on a truncated line, plus the spectral
and quadrature operators shared by the rest of the package."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .errors import InvalidArgumentError, ZeroMassError

MEAN_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PeriodicField:
    """Uniform samples on [origin, origin + length) with periodic wrap."""

    length: float
    samples: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen(self.samples))
        n = self.samples.size
        if self.samples.ndim != 1 or n < 8 or n % 2:
            raise InvalidArgumentError(f"need an even number of samples >= 8, got {n}")
        if not self.length > 0:
            raise InvalidArgumentError("length must be positive")

    @classmethod
    def from_function(cls, fn, n: int, length: float = 1.0, origin: float = 0.0):
        x = origin + np.arange(n) * (length / n)
        return cls(length, fn(x), origin)

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return self.origin + np.arange(self.n) * self.dx

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def is_mean_zero(self, tol: float = MEAN_TOL) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.samples))))
        return abs(self.mean()) <= tol * scale

    def with_samples(self, samples) -> "PeriodicField":
        return PeriodicField(self.length, samples, self.origin)


@dataclass(frozen=True)
class LineField:
    """Uniform samples on [-half_width, half_width], endpoints included.

    ``ux`` and ``uxx`` hold exact derivatives when the profile is known in
    closed form; otherwise derivatives are taken by finite differences.
    """

    half_width: float
    samples: np.ndarray
    decay_tol: float = 1e-8
    ux: np.ndarray | None = None
    uxx: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen(self.samples))
        for name in ("ux", "uxx"):
            val = getattr(self, name)
            if val is not None:
                val = _frozen(val)
                if val.shape != self.samples.shape:
                    raise InvalidArgumentError(f"{name} shape mismatch")
                object.__setattr__(self, name, val)
        if self.samples.ndim != 1 or self.samples.size < 5:
            raise InvalidArgumentError("need at least 5 samples")
        if not self.half_width > 0:
            raise InvalidArgumentError("half_width must be positive")
        edge = max(abs(self.samples[0]), abs(self.samples[-1]))
        if edge > self.decay_tol:
            raise InvalidArgumentError(
                f"boundary value {edge:.3e} exceeds decay_tol {self.decay_tol:.1e}; widen the window"
            )

    @classmethod
    def from_function(cls, fn, n: int, half_width: float, decay_tol: float = 1e-8,
                      dfn=None, d2fn=None):
        x = np.linspace(-half_width, half_width, n)
        return cls(
            half_width,
            fn(x),
            decay_tol,
            None if dfn is None else dfn(x),
            None if d2fn is None else d2fn(x),
        )

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def dx(self) -> float:
        return 2 * self.half_width / (self.n - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)


# ---------------------------------------------------------------- spectral


def wavenumbers(n: int, length: float) -> np.ndarray:
    """Angular wavenumbers 2*pi*k/L for the rfft layout."""
    return 2 * np.pi * np.fft.rfftfreq(n, d=length / n)


def spectral_multiplier(n: int, length: float, order: int) -> np.ndarray:
    mult = (1j * wavenumbers(n, length)) ** order
    if order % 2:
        mult[-1] = 0.0  # Nyquist mode of odd derivatives
    return mult


def spectral_derivative(f: PeriodicField, order: int = 1) -> PeriodicField:
    if int(order) != order or order <= 0:
        raise InvalidArgumentError("order must be a positive integer")
    mult = spectral_multiplier(f.n, f.length, int(order))
    return f.with_samples(np.fft.irfft(mult * np.fft.rfft(f.samples), f.n))


def antiderivative_multiplier(n: int, length: float) -> np.ndarray:
    k = wavenumbers(n, length)
    mult = np.zeros(k.size, dtype=complex)
    mult[1:-1] = 1.0 / (1j * k[1:-1])
    return mult


def antiderivative_periodic(f: PeriodicField, tol: float = MEAN_TOL) -> PeriodicField:
    """Mean-zero antiderivative on the circle."""
    if not f.is_mean_zero(tol):
        raise ZeroMassError(f"field mean {f.mean():.3e} is not zero")
    mult = antiderivative_multiplier(f.n, f.length)
    return f.with_samples(np.fft.irfft(mult * np.fft.rfft(f.samples), f.n))


def antiderivative_line(f: LineField, tol: float = 1e-8) -> LineField:
    """Cumulative integral from the left edge of the window."""
    g = cumulative_simpson(f.samples, dx=f.dx, initial=0.0)
    mass = g[-1]
    if abs(mass) > tol:
        raise ZeroMassError(f"line mass {mass:.3e} exceeds tolerance {tol:.1e}")
    return LineField(f.half_width, g, max(f.decay_tol, tol), ux=f.samples)


def quadrature(f: PeriodicField | LineField) -> float:
    if isinstance(f, PeriodicField):
        return float(np.sum(f.samples) * f.dx)
    return float(simpson(f.samples, dx=f.dx))


def interpolate(f: PeriodicField, x):
    """Trigonometric interpolant of ``f`` evaluated at arbitrary ``x``."""
    xs = np.asarray(x, dtype=float)
    n = f.n
    coef = np.fft.rfft(f.samples) / n
    k = wavenumbers(n, f.length)
    weights = np.full(k.size, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    theta = np.multiply.outer(xs.ravel() - f.origin, k)
    vals = np.cos(theta) @ (weights * coef.real) - np.sin(theta[:, :-1]) @ (weights[:-1] * coef.imag[:-1])
    vals = vals.reshape(xs.shape)
    return float(vals) if vals.ndim == 0 else vals


# ------------------------------------------------------- line derivatives


def central_difference(y: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order central first derivative, second order at the edges."""
    d = np.empty_like(y)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * dx)
    d[1] = (y[2] - y[0]) / (2 * dx)
    d[-2] = (y[-1] - y[-3]) / (2 * dx)
    d[0] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * dx)
    d[-1] = (3 * y[-1] - 4 * y[-2] + y[-3]) / (2 * dx)
    return d


def line_derivatives(f: LineField) -> tuple[np.ndarray, np.ndarray]:
    ux = f.ux if f.ux is not None else central_difference(f.samples, f.dx)
    uxx = f.uxx if f.uxx is not None else central_difference(ux, f.dx)
    return ux, uxx
