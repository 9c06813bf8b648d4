"""Acceptance criteria, one marked test (or group) per criterion.

The terminal summary prints a PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import cumulative_simpson, simpson, solve_ivp

from shortpulse.analysis import dispersionless_breaking_time, fit_blowup, pulse_box_error
from shortpulse.characteristics import (
    PhaseState,
    blowup_time_bound,
    homogeneous_solution,
    in_domain_D,
    integrate_lower_system,
    lyapunov,
    sigma,
    upper_solution,
)
from shortpulse.criteria import (
    BreakingBounds,
    cosine_criterion,
    pulse_criterion,
    pulse_invariants,
    threshold_scan,
    wellposedness_margin,
)
from shortpulse.exact import (
    M_CR,
    FamilySpec,
    PulseParams,
    cosine_e1_elliptic,
    cosine_e1_quadrature,
    gaussian_closed_invariants,
    gaussian_line_field,
    gaussian_profile,
    pulse_x_jacobian,
)
from shortpulse.fields import PeriodicField
from shortpulse.invariants import compute_invariants, scaling_transform
from shortpulse.solver import SimConfig, simulate

criterion = pytest.mark.criterion


def _cosine_run(a, n=4096, **kw):
    cfg = SimConfig(n=n, t_end=2.0, **kw)
    return simulate(FamilySpec("cosine", a=a).periodic_field(n), cfg)


@criterion(1, "blow-up fit for cosine a=0.5: C = 1.072 +- 0.08, T = 1.356 +- 0.05, < 1 min")
def test_blowup_fit_reproduction():
    start = time.perf_counter()
    traj = _cosine_run(0.5)
    fit = fit_blowup(traj.step_times, traj.w_series)
    elapsed = time.perf_counter() - start
    print(f"C = {fit.c:.4f}, T = {fit.t_break:.4f}, {fit.samples} samples, {elapsed:.1f} s")
    assert abs(fit.c - 1.072) <= 0.08
    assert abs(fit.t_break - 1.356) <= 0.05
    assert elapsed < 60


@criterion(2, "cosine criterion threshold a* = 1.053 +- 0.005")
def test_cosine_threshold():
    a_star = threshold_scan(lambda a: cosine_criterion(a)[1].breaking_predicted, 0.5, 2.0, 1e-3)
    print(f"a* = {a_star:.5f}")
    assert abs(a_star - 1.053) <= 0.005


@criterion(3, "pulse well-posedness margin 2 sqrt(2 E1 E2) = 32 m within 1e-3")
@pytest.mark.parametrize("m", [0.02, 0.1, 0.3])
def test_pulse_margin_identity(m):
    margin = wellposedness_margin(pulse_invariants(m))
    assert abs(margin / (32 * m) - 1) <= 1e-3


PULSE_MS = [M_CR * k / 21 for k in range(1, 21)]


@criterion(4, "pulse: I2 empty and f1 < 0 for 20 m in (0, m_cr); m = 0.40 non-invertible")
@pytest.mark.parametrize("m", PULSE_MS, ids=[f"m={m:.4f}" for m in PULSE_MS])
def test_pulse_not_breaking(m):
    _, report = pulse_criterion(m)
    assert report.f1_score < 0
    assert report.i2_empty, f"I2 non-empty at m = {m:.4f} (f2 = {report.f2_score:.4f})"


@criterion(4, "pulse: I2 empty and f1 < 0 for 20 m in (0, m_cr); m = 0.40 non-invertible")
def test_pulse_jacobian_negative_above_critical():
    p = PulseParams(0.40)
    y, t = np.meshgrid(np.linspace(-20, 20, 801), np.linspace(0, 2 * math.pi, 201))
    assert pulse_x_jacobian(p, y, t).min() < 0


@criterion(5, "cosine a=0.2 to t=10: E0, E1 drift <= 1e-6, |mean| < 1e-12, W <= 10")
def test_conservation_suite():
    traj = simulate(FamilySpec("cosine", a=0.2).periodic_field(1024), SimConfig(n=1024, t_end=10.0))
    assert traj.stop_reason == "completed"
    assert math.isclose(traj.times[-1], 10.0)
    drift = traj.drift()
    assert drift["E0"] <= 1e-6 and drift["E1"] <= 1e-6
    assert max(abs(f.mean()) for f in traj.fields) < 1e-12
    assert traj.w_series.max() <= 10


@criterion(6, "Gaussian E0, E-1 closed forms vs 1e6-point quadrature; cosine E1 vs AGM")
@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 4)])
def test_gaussian_closed_forms(a, b):
    x = np.linspace(-12 / math.sqrt(b), 12 / math.sqrt(b), 1_000_001)
    u = gaussian_profile(a, b, x)
    g = cumulative_simpson(u, x=x, initial=0.0)
    e0 = simpson(u**2, x=x)
    em1 = simpson(g**2 - u**4 / 12, x=x)
    closed_em1, closed_e0 = gaussian_closed_invariants(a, b)
    assert abs(closed_e0 / e0 - 1) <= 1e-6
    assert abs(closed_em1 / em1 - 1) <= 1e-6


@criterion(6, "Gaussian E0, E-1 closed forms vs 1e6-point quadrature; cosine E1 vs AGM")
@pytest.mark.parametrize("a", [0.05, 0.5, 1.0, 1.053, 2.0])
def test_cosine_e1_agm(a):
    assert abs(cosine_e1_quadrature(a) - cosine_e1_elliptic(a)) <= 1e-8


@criterion(7, "upper tan solution, homogeneous lower solution, blow-up time bound")
def test_upper_solution_matches_ode():
    sol = solve_ivp(lambda t, v: (v**2 + 1), (0, 0.7), [1.0], method="DOP853",
                    rtol=1e-13, atol=1e-13, dense_output=True)
    t = np.linspace(0, 0.7, 71)
    assert np.max(np.abs(sol.sol(t)[0] / upper_solution(1.0, 1.0, t) - 1)) <= 1e-8


@criterion(7, "upper tan solution, homogeneous lower solution, blow-up time bound")
def test_homogeneous_lower_system():
    run = integrate_lower_system(1.0, 2.0, BreakingBounds(1.0, 0.0))
    assert run.blew_up
    assert abs(run.t_star - (2 - math.sqrt(2))) <= 1e-6
    v_exact, _ = homogeneous_solution(1.0, 2.0, 1.0, run.times)
    assert np.max(np.abs(1 / run.column("v") - 1 / v_exact)) <= 1e-6


@criterion(7, "upper tan solution, homogeneous lower solution, blow-up time bound")
def test_blowup_runs_respect_bound():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 40:
        bounds = BreakingBounds(rng.uniform(0.2, 3), rng.uniform(0.2, 3))
        v0, w0 = rng.uniform(0.1, 5), rng.uniform(0.1, 10)
        try:
            bound = blowup_time_bound(v0, w0, bounds)
        except ValueError:
            continue
        run = integrate_lower_system(v0, w0, bounds, t_max=2 * bound)
        assert run.blew_up
        assert run.t_star <= bound + 1e-6
        checked += 1


def _random_starts(count, seed=3):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        bounds = BreakingBounds(rng.uniform(0.5, 2), rng.uniform(0.5, 2))
        x_star = (4 * bounds.f0 / bounds.f1**2) ** (1 / 3)
        x = rng.uniform(0.05, 2 * x_star)
        yield bounds, PhaseState(x, sigma(x, bounds) - rng.uniform(0.01, 2))


@criterion(8, "100 starts in D: trapping, Lyapunov growth, monotone V and W, (t*-t)V settles")
def test_lyapunov_trapping_suite():
    for bounds, start in _random_starts(100):
        assert in_domain_D(start, bounds)
        c = start.to_char(bounds)
        run = integrate_lower_system(c.v, c.w, bounds, t_max=2 * blowup_time_bound(c.v, c.w, bounds))
        assert run.blew_up
        v, w = run.column("v"), run.column("w")
        phases = [PhaseState.from_char(vi, wi, bounds) for vi, wi in zip(v, w)]
        assert all(in_domain_D(p, bounds) for p in phases)
        energy = np.array([lyapunov(p, bounds) for p in phases])
        assert np.all(np.diff(energy) > 0)
        assert np.all(np.diff(v) >= 0) and np.all(np.diff(w) >= 0)
        last_decade = v > v[-1] / 10
        product = (run.t_star - run.times[last_decade]) * v[last_decade]
        assert product.max() / product.min() - 1 < 0.05


@criterion(9, "scaling covariance of E1, E2, E0, E-1 with exponents 1, -1, 3, 5")
@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_scaling_covariance(alpha):
    fields = [
        gaussian_line_field(1.0, 1.0),
        PeriodicField.from_function(lambda x: 0.3 * np.cos(2 * np.pi * x) + 0.1 * np.sin(6 * np.pi * x), 256),
    ]
    for f in fields:
        base, scaled = compute_invariants(f), compute_invariants(scaling_transform(f, alpha))
        assert scaled.e1 == pytest.approx(alpha * base.e1, rel=1e-8)
        assert scaled.e2 == pytest.approx(base.e2 / alpha, rel=1e-8)
        assert scaled.e0 == pytest.approx(alpha**3 * base.e0, rel=1e-8)
        assert scaled.e_minus1 == pytest.approx(alpha**5 * base.e_minus1, rel=1e-8)


@criterion(10, "dispersionless cosine a=0.5: T = 4/pi within 1%, C = 1 +- 0.02")
def test_dispersionless_oracle():
    traj = _cosine_run(0.5, dispersionless=True)
    fit = fit_blowup(traj.step_times, traj.w_series)
    print(f"C = {fit.c:.5f}, T = {fit.t_break:.5f}, 4/pi = {4 / math.pi:.5f}")
    assert abs(fit.t_break / dispersionless_breaking_time(0.5) - 1) <= 0.01
    assert abs(fit.c - 1) <= 0.02


@criterion(11, "pulse m=0.32 in a box L=40 evolved to t=1 matches the exact pulse to 1e-4")
def test_pulse_solver_cross_validation():
    result = pulse_box_error(0.32, L=40.0, n=2048, t_end=1.0)
    print(result)
    assert result["t"] == pytest.approx(1.0)
    assert result["max_error"] <= 1e-4
