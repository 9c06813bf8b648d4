"""Closed-form initial data and the exact one-pulse solution.

The pulse is given parametrically: ``u(x, t) = U(y, t)`` on the curve
``x = X(y, t)``, with phases ``phi = m (y + t)`` and ``psi = n (y - t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.integrate import simpson
import sympy as sp

from .errors import InvalidArgumentError, NotInvertibleError
from .fields import LineField, PeriodicField
from .roots import bracketed_newton

M_CR = math.sin(math.pi / 8)


@dataclass(frozen=True)
class PulseParams:
    m: float

    def __post_init__(self):
        if not 0.0 < self.m < 1.0:
            raise InvalidArgumentError("pulse modulus m must lie in (0, 1)")

    @property
    def n(self) -> float:
        return math.sqrt(1.0 - self.m**2)

    @property
    def invertible(self) -> bool:
        return self.m < M_CR

    @property
    def period(self) -> float:
        return math.pi / self.m


@lru_cache(maxsize=None)
def _pulse_functions():
    y, t, m = sp.symbols("y t m", real=True)
    n = sp.sqrt(1 - m**2)
    phi, psi = m * (y + t), n * (y - t)
    den = m**2 * sp.sin(psi) ** 2 + n**2 * sp.cosh(phi) ** 2
    U = 4 * m * n * (m * sp.sin(psi) * sp.sinh(phi) + n * sp.cos(psi) * sp.cosh(phi)) / den
    X = y + 2 * m * n * (m * sp.sin(2 * psi) - n * sp.sinh(2 * phi)) / den
    exprs = {
        "U": U,
        "X": X,
        "U_y": sp.diff(U, y),
        "U_yy": sp.diff(U, y, 2),
        "X_y": sp.diff(X, y),
        "X_yy": sp.diff(X, y, 2),
        "U_t": sp.diff(U, t),
    }
    return {k: sp.lambdify((y, t, m), v, "numpy") for k, v in exprs.items()}


def _eval(name, p: PulseParams, y, t):
    y, t = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(t, dtype=float))
    return np.broadcast_to(_pulse_functions()[name](y, t, p.m), y.shape) * 1.0


def pulse_parametric(p: PulseParams, y, t):
    """Return ``(U, X)`` evaluated directly from the closed form."""
    m, n = p.m, p.n
    y, t = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(t, dtype=float))
    phi, psi = m * (y + t), n * (y - t)
    s = np.sin(psi)
    den = m**2 * s**2 + n**2 * np.cosh(phi) ** 2
    U = 4 * m * n * (m * s * np.sinh(phi) + n * np.cos(psi) * np.cosh(phi)) / den
    X = y + 2 * m * n * (m * np.sin(2 * psi) - n * np.sinh(2 * phi)) / den
    return U, X


def pulse_x_jacobian(p: PulseParams, y, t):
    """dX/dy in rational form."""
    m, n = p.m, p.n
    phi, psi = m * (np.asarray(y) + t), n * (np.asarray(y) - t)
    s2 = np.sin(psi) ** 2
    c2 = np.cosh(phi) ** 2
    return 1.0 - 8 * m**2 * n**2 * s2 * c2 / (m**2 * s2 + n**2 * c2) ** 2


def pulse_x_jacobian_trig(p: PulseParams, y, t):
    """dX/dy as cos(4 arctan(m sin(psi) / (n cosh(phi))))."""
    m, n = p.m, p.n
    phi, psi = m * (np.asarray(y) + t), n * (np.asarray(y) - t)
    return np.cos(4 * np.arctan(m * np.sin(psi) / (n * np.cosh(phi))))


def pulse_partials(p: PulseParams, y, t) -> dict[str, np.ndarray]:
    """Analytic partials U_y, U_yy, X_y, X_yy, U_t alongside U and X."""
    return {k: _eval(k, p, y, t) for k in ("U", "X", "U_y", "U_yy", "X_y", "X_yy", "U_t")}


def pulse_x_derivatives(parts: dict) -> tuple[np.ndarray, np.ndarray]:
    """u_x and u_xx from parametric partials by the chain rule."""
    xy = parts["X_y"]
    ux = parts["U_y"] / xy
    uxx = (parts["U_yy"] * xy - parts["U_y"] * parts["X_yy"]) / xy**3
    return ux, uxx


def _require_invertible(p: PulseParams):
    if not p.invertible:
        raise NotInvertibleError(f"m = {p.m} >= m_cr = {M_CR:.6f}: X(., t) is not monotone")


def pulse_invert(p: PulseParams, t: float, xs) -> np.ndarray:
    """Parameter y with X(y, t) = x for each x."""
    _require_invertible(p)
    xs = np.asarray(xs, dtype=float)
    # |X - y| <= 4m^2/n + 4m < 10 for every m in (0, 1)
    return bracketed_newton(
        lambda y: pulse_parametric(p, y, t)[1],
        lambda y: pulse_x_jacobian(p, y, t),
        xs,
        xs - 10.0,
        xs + 10.0,
    )


def pulse_sample(p: PulseParams, t: float, xs) -> np.ndarray:
    y = pulse_invert(p, t, xs)
    return pulse_parametric(p, y, t)[0]


def pulse_profile(p: PulseParams, t: float, xs) -> dict[str, np.ndarray]:
    """u, u_x, u_xx and the antiderivative value g at the points ``xs``."""
    y = pulse_invert(p, t, xs)
    parts = pulse_partials(p, y, t)
    ux, uxx = pulse_x_derivatives(parts)
    return {"y": y, "u": parts["U"], "ux": ux, "uxx": uxx, "g": parts["U_t"]}


def pulse_window(p: PulseParams, t: float = 0.0, tol: float = 1e-10) -> float:
    """Half-width in y, centred on y = -t, beyond which |U| < tol."""
    m, n = p.m, p.n
    y_max = math.log(8 * m * (1 + m / n) / tol) / m + 1.0
    probe = np.linspace(0.0, 2 * math.pi / n, 65)
    while True:
        edge = np.concatenate([-t + y_max + probe, -t - y_max - probe])
        if np.max(np.abs(pulse_parametric(p, edge, t)[0])) < tol:
            return y_max
        y_max *= 1.2


def pulse_y_grid(p: PulseParams, t: float = 0.0, dy: float = 0.01, tol: float = 1e-10):
    y_max = pulse_window(p, t, tol)
    count = 2 * int(math.ceil(y_max / dy)) + 1
    return np.linspace(-t - y_max, -t + y_max, count)


def pulse_line_integrals(p: PulseParams, t: float = 0.0, dy: float = 0.01) -> dict[str, float]:
    """E_{-1}, E_0, E_1, E_2 of the pulse at time t, integrated in the parameter y.

    Uses dx = X_y dy, which is exact for m < m_cr where X_y > 0.
    """
    _require_invertible(p)
    y = pulse_y_grid(p, t, dy)
    parts = pulse_partials(p, y, t)
    ux, uxx = pulse_x_derivatives(parts)
    U, G, xy = parts["U"], parts["U_t"], parts["X_y"]
    step = y[1] - y[0]
    integrate = lambda f: float(simpson(f * xy, dx=step))
    return {
        "e_minus1": integrate(G**2 - U**4 / 12),
        "e0": integrate(U**2),
        "e1": integrate(ux**2 / (1 + np.sqrt(1 + ux**2))),
        "e2": integrate(uxx**2 / (1 + ux**2) ** 2.5),
    }


def pulse_sup_norms(p: PulseParams, n_phi: int = 801, n_psi: int = 401) -> tuple[float, float]:
    """(sup |d_x^{-1} u|, sup |u|) over all of space-time.

    The solution depends on (y, t) only through (phi, psi), and |U| and |G|
    are pi-periodic in psi, so the suprema are taken over phi in R and
    psi in [0, pi], followed by a local polish of the best grid point.
    """
    from scipy.optimize import minimize

    m, n = p.m, p.n
    phi = np.linspace(-12.0, 12.0, n_phi)
    psi = np.linspace(0.0, math.pi, n_psi)
    PH, PS = np.meshgrid(phi, psi, indexing="ij")

    def to_yt(ph, ps):
        return 0.5 * (ph / m + ps / n), 0.5 * (ph / m - ps / n)

    out = []
    for name in ("U_t", "U"):
        fn = lambda ph, ps, name=name: np.abs(_eval(name, p, *to_yt(ph, ps)))
        vals = fn(PH, PS)
        i, j = np.unravel_index(np.argmax(vals), vals.shape)
        res = minimize(lambda z: -fn(z[0], z[1]), x0=[PH[i, j], PS[i, j]],
                       method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15})
        out.append(max(float(vals[i, j]), float(-res.fun)))
    return out[0], out[1]


# ---------------------------------------------------------------- Gaussian


def gaussian_profile(a: float, b: float, x):
    x = np.asarray(x, dtype=float)
    return a * (1 - 2 * b * x**2) * np.exp(-b * x**2)


def gaussian_derivative(a: float, b: float, x):
    x = np.asarray(x, dtype=float)
    return 2 * a * b * x * (2 * b * x**2 - 3) * np.exp(-b * x**2)


def gaussian_second_derivative(a: float, b: float, x):
    x = np.asarray(x, dtype=float)
    return a * (-8 * b**3 * x**4 + 24 * b**2 * x**2 - 6 * b) * np.exp(-b * x**2)


def gaussian_antiderivative(a: float, b: float, x):
    x = np.asarray(x, dtype=float)
    return a * x * np.exp(-b * x**2)


def gaussian_closed_invariants(a: float, b: float) -> tuple[float, float]:
    """Closed-form (E_{-1}, E_0)."""
    if a <= 0 or b <= 0:
        raise InvalidArgumentError("a and b must be positive")
    e_m1 = a**2 * math.sqrt(math.pi) * (256 * math.sqrt(2) - 51 * a**2 * b) / (2048 * math.sqrt(b**3))
    e0 = 3 * a**2 * math.sqrt(2 * math.pi) / (8 * math.sqrt(b))
    return e_m1, e0


def gaussian_half_width(a: float, b: float, tol: float = 1e-10) -> float:
    """Smallest symmetric window with |u|, |u'|, |u''| below tol at the edge."""
    x = 1.0 / math.sqrt(b)
    while True:
        edge = max(abs(float(f(a, b, x))) for f in
                   (gaussian_profile, gaussian_derivative, gaussian_second_derivative, gaussian_antiderivative))
        if edge < tol:
            return x
        x *= 1.05


def gaussian_line_field(a: float, b: float, n: int = 4001, half_width: float | None = None,
                        tol: float = 1e-10) -> LineField:
    X = gaussian_half_width(a, b, tol) if half_width is None else half_width
    return LineField.from_function(
        lambda x: gaussian_profile(a, b, x), n, X, decay_tol=max(tol, 1e-8),
        dfn=lambda x: gaussian_derivative(a, b, x),
        d2fn=lambda x: gaussian_second_derivative(a, b, x),
    )


# ------------------------------------------------------------------ cosine


def cosine_profile(a: float, x):
    return a * np.cos(2 * np.pi * np.asarray(x, dtype=float))


def cosine_derivative(a: float, x):
    return -2 * np.pi * a * np.sin(2 * np.pi * np.asarray(x, dtype=float))


def cosine_e1_quadrature(a: float, n: int = 4096) -> float:
    # periodic trapezoid: exponentially convergent for this analytic integrand
    x = np.arange(n) / n
    return float(np.mean(np.sqrt(1 + (2 * np.pi * a * np.sin(2 * np.pi * x)) ** 2)))


def cosine_closed_invariants(a: float) -> tuple[float, float]:
    """(E_0, E_1) on the unit circle for u0 = a cos(2 pi x)."""
    if a <= 0:
        raise InvalidArgumentError("a must be positive")
    return 0.5 * a**2, cosine_e1_quadrature(a)


def ellipe_agm(m: float, tol: float = 1e-15) -> float:
    """Complete elliptic integral of the second kind E(m), parameter m = k^2 < 1.

    Negative m (imaginary modulus) is mapped to (0, 1) with
    E(m) = sqrt(1 - m) E(-m / (1 - m)).
    """
    if m >= 1:
        raise InvalidArgumentError("ellipe_agm needs m < 1")
    if m < 0:
        return math.sqrt(1 - m) * ellipe_agm(-m / (1 - m), tol)
    a, b = 1.0, math.sqrt(1 - m)
    c2_sum = 0.5 * m
    power = 0.5
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2
        c2_sum += power * c * c
    K = math.pi / (2 * a)
    return K * (1 - c2_sum)


def cosine_e1_elliptic(a: float) -> float:
    """E_1 = (2/pi) E(m) with parameter m = -(2 pi a)^2."""
    return 2 / math.pi * ellipe_agm(-((2 * math.pi * a) ** 2))


# -------------------------------------------------------------- families


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    a: float | None = None
    b: float | None = None
    m: float | None = None

    def __post_init__(self):
        needed = {"gaussian": ("a", "b"), "cosine": ("a",), "pulse": ("m",)}
        if self.kind not in needed:
            raise InvalidArgumentError(f"unknown family {self.kind!r}")
        for name in needed[self.kind]:
            val = getattr(self, name)
            if val is None or not val > 0:
                raise InvalidArgumentError(f"{self.kind} family needs positive {name}")

    @property
    def domain(self) -> str:
        return "circle" if self.kind == "cosine" else "line"

    def profile(self, x, t: float = 0.0):
        """(u, u_x) of the initial profile at points x."""
        if self.kind == "cosine":
            return cosine_profile(self.a, x), cosine_derivative(self.a, x)
        if self.kind == "gaussian":
            return gaussian_profile(self.a, self.b, x), gaussian_derivative(self.a, self.b, x)
        prof = pulse_profile(PulseParams(self.m), t, x)
        return prof["u"], prof["ux"]

    def periodic_field(self, n: int, length: float | None = None) -> PeriodicField:
        """Sample onto a periodic grid; line data is centred in a box [-L/2, L/2)."""
        if self.kind == "cosine":
            return PeriodicField.from_function(lambda x: cosine_profile(self.a, x), n, length or 1.0)
        if length is None:
            raise InvalidArgumentError("line-type family needs a box length")
        field = PeriodicField.from_function(lambda x: self.profile(x)[0], n, length, origin=-length / 2)
        return field.with_samples(field.samples - field.mean())
