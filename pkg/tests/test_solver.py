import csv
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from shortpulse.analysis import fit_blowup
from shortpulse.errors import InvalidArgumentError, ZeroMassError
from shortpulse.exact import FamilySpec
from shortpulse.fields import PeriodicField
from shortpulse.invariants import compute_invariants
from shortpulse.solver import STOP_REASONS, SimConfig, rhs, simulate, sup_uux


def _cos(a, n):
    return FamilySpec("cosine", a=a).periodic_field(n)


def test_rhs_examples():
    a, n = 0.7, 64
    f = _cos(a, n)
    s = 2 * np.pi * f.x
    local = -np.pi * a**3 * np.cos(s) ** 2 * np.sin(s)
    assert np.allclose(rhs(f, SimConfig(n=n)).samples, local + a / (2 * np.pi) * np.sin(s), atol=1e-13)
    assert np.allclose(rhs(f, SimConfig(n=n, dispersionless=True)).samples, local, atol=1e-13)
    assert not np.any(rhs(PeriodicField(1.0, np.zeros(n)), SimConfig(n=n)).samples)


def test_rhs_rejects_mass():
    with pytest.raises(ZeroMassError):
        rhs(PeriodicField.from_function(lambda x: 1 + np.cos(2 * np.pi * x), 32), SimConfig(n=32))


def test_sup_uux():
    assert sup_uux(_cos(0.5, 256)) == pytest.approx(math.pi / 4, rel=1e-6)
    assert sup_uux(PeriodicField(1.0, np.zeros(16))) == 0.0


@pytest.mark.parametrize("kw", [dict(cfl=0), dict(cfl=1.5), dict(n=7), dict(w_max=-1), dict(L=0), dict(save_every=0)])
def test_config_validation(kw):
    with pytest.raises(InvalidArgumentError):
        SimConfig(**kw)


def test_zero_run():
    traj = simulate(PeriodicField(1.0, np.zeros(64)), SimConfig(n=64, t_end=0.3))
    assert traj.stop_reason == "completed"
    assert not np.any(traj.final.samples)
    assert traj.times[-1] == pytest.approx(0.3)


def test_rejects_mass_and_grid_mismatch():
    with pytest.raises(ZeroMassError):
        simulate(PeriodicField.from_function(lambda x: 0.1 + np.cos(2 * np.pi * x), 64), SimConfig(n=64))
    with pytest.raises(InvalidArgumentError):
        simulate(_cos(0.2, 64), SimConfig(n=128))


def test_mean_and_sup_bound_along_run():
    traj = simulate(_cos(0.5, 1024), SimConfig(n=1024, t_end=1.0))
    e1 = compute_invariants(traj.fields[0]).e1
    assert np.all(traj.max_u <= e1)
    assert max(abs(f.mean()) for f in traj.fields) < 1e-12
    assert traj.stop_reason in STOP_REASONS


def _characteristic_solution(a, t, x):
    # u = u0(xi) with x = xi - u0(xi)^2 t / 2, solved per point before breaking
    u0 = lambda s: a * np.cos(2 * np.pi * s)
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        g = lambda s: s - 0.5 * u0(s) ** 2 * t - xi
        out[i] = u0(brentq(g, xi - 1, xi + 1, xtol=1e-15))
    return out


def test_dispersionless_matches_characteristics():
    a, t = 0.5, 0.8
    traj = simulate(_cos(a, 2048), SimConfig(n=2048, t_end=t, dispersionless=True))
    x = traj.final.x
    assert np.max(np.abs(traj.final.samples - _characteristic_solution(a, t, x))) < 1e-4


def test_spatial_convergence():
    runs = [simulate(_cos(0.5, n), SimConfig(n=n, t_end=0.5)).final for n in (512, 1024)]
    coarse, fine = runs[0].samples, runs[1].samples[::2]
    assert np.max(np.abs(coarse - fine)) < 1e-6


def test_trajectory_csv(tmp_path):
    traj = simulate(_cos(0.2, 64), SimConfig(n=64, t_end=0.1))
    traj.to_csv(tmp_path / "t.csv")
    traj.snapshot_csv(tmp_path / "s.csv")
    with open(tmp_path / "t.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "W", "E0", "E1", "max_u"]
    assert len(rows) == len(traj.times) + 1
    with open(tmp_path / "s.csv") as fh:
        assert next(csv.reader(fh)) == ["x", "u"]


def test_blowup_time_stable_under_refinement():
    fits = []
    for n, cfl in ((4096, 0.25), (4096, 0.125)):
        traj = simulate(_cos(0.5, n), SimConfig(n=n, t_end=2.0, cfl=cfl))
        fits.append(fit_blowup(traj.step_times, traj.w_series))
    assert fits[0].t_break == pytest.approx(fits[1].t_break, rel=0.01)
