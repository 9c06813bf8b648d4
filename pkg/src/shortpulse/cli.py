"""Command-line front end: simulate, criteria, characteristics, pulse, scan."""

from __future__ import annotations

import argparse
from dataclasses import asdict
import hashlib
import json
import math
from pathlib import Path
import sys
import time

import numpy as np

from . import __version__
from .analysis import fit_blowup, scan_cosine, scan_gaussian, write_scan_csv
from .characteristics import (
    blowup_conditions,
    blowup_time_bound,
    integrate_full_system,
    integrate_lower_system,
    upper_blowup_time,
    upper_solution,
)
from .criteria import (
    BreakingBounds,
    breaking_bounds_line,
    cosine_criterion,
    cosine_invariants,
    gaussian_criterion,
    pulse_criterion,
    pulse_invariants,
    pulse_sup_bounds,
    threshold_scan,
    wellposedness_margin,
)
from .errors import (
    CriterionInapplicableError,
    DegenerateProfileError,
    InvalidArgumentError,
    NotInvertibleError,
    ShortPulseError,
    ZeroMassError,
)
from .exact import (
    M_CR,
    FamilySpec,
    PulseParams,
    pulse_parametric,
    pulse_sample,
    pulse_x_jacobian,
)
from .fields import PeriodicField
from .solver import SimConfig, simulate

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4
LINE_BOX = 40.0


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _finish(args, outputs: list[Path], started: float, stop_reason: str | None = None) -> int:
    """Write the run manifest and, with --seed-check, compare against the previous one."""
    out_dir = Path(args.out_dir)
    manifest_path = out_dir / "manifest.json"
    previous = json.loads(manifest_path.read_text()) if manifest_path.exists() else None
    params = {k: v for k, v in vars(args).items() if k not in ("handler", "seed_check", "config")}
    manifest = {
        "command": args.command,
        "parameters": params,
        "version": __version__,
        "outputs": {p.name: _sha256(p) for p in outputs},
        "duration_s": round(time.perf_counter() - started, 3),
        "stop_reason": stop_reason,
    }
    _write_json(manifest_path, manifest)
    if args.seed_check:
        if previous is None:
            print("seed-check: no previous manifest, recorded a fresh one", file=sys.stderr)
            return EXIT_OK
        bad = [name for name, digest in manifest["outputs"].items()
               if previous.get("outputs", {}).get(name) != digest]
        if bad or previous.get("parameters") != _jsonable(params):
            print(f"seed-check: mismatch in {bad or 'parameters'}", file=sys.stderr)
            return EXIT_NUMERIC
        print("seed-check: outputs identical to previous manifest", file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------ family input


def _family(args) -> FamilySpec:
    try:
        return FamilySpec(args.family, a=args.a, b=args.b, m=args.m)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc


def _load_field(path: str, L: float) -> PeriodicField:
    """CSV with a ``u`` column (optionally ``x``) or one number per line."""
    import csv

    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if rows and "u" in rows[0]:
        col = rows[0].index("u")
        rows = rows[1:]
    else:
        col = -1
    try:
        samples = [float(r[col]) for r in rows if r]
    except (ValueError, IndexError) as exc:
        raise ZeroMassError(f"malformed data in {path}") from exc
    return PeriodicField(L, samples)


def _initial_field(args) -> PeriodicField:
    if args.family == "file":
        if not args.path:
            raise UsageError("--family file needs --path")
        return _load_field(args.path, args.L or 1.0)
    spec = _family(args)
    L = args.L or (1.0 if spec.domain == "circle" else LINE_BOX)
    return spec.periodic_field(args.n, L)


# ----------------------------------------------------------------- commands


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    u0 = _initial_field(args)
    if not u0.is_mean_zero():
        raise ZeroMassError(f"initial data has mean {u0.mean():.3e}; zero mass is required")
    cfg = SimConfig(n=u0.n, L=u0.length, cfl=args.cfl, t_end=args.t_end, save_every=args.save_every,
                    dealias=args.dealias, w_max=args.w_max, drift_tol=args.drift_tol,
                    dispersionless=args.dispersionless, tail_tol=args.tail_tol)
    traj = simulate(u0, cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    traj_path, snap_path, summary_path = (out_dir / n for n in
                                          ("trajectory.csv", "snapshot.csv", "summary.json"))
    traj.to_csv(traj_path)
    traj.snapshot_csv(snap_path)
    summary = {"stop_reason": traj.stop_reason, "t_final": traj.times[-1],
               "W_final": traj.w_series[-1], "drift": traj.drift(), "config": asdict(cfg)}
    try:
        fit = fit_blowup(traj.step_times, traj.w_series, w_floor=args.w_floor)
        summary["fit"] = {"C": fit.c, "T": fit.t_break, "A": fit.a, "B": fit.b,
                          "window": fit.window, "rms_residual": fit.rms_residual, "samples": fit.samples}
    except ArithmeticError as exc:
        summary["fit"] = None
        summary["fit_error"] = str(exc)
    _write_json(summary_path, summary)
    print(json.dumps(_jsonable({k: summary[k] for k in ("stop_reason", "fit", "drift")}), sort_keys=True))
    return _finish(args, [traj_path, snap_path, summary_path], started, traj.stop_reason)


def _criteria_report(args) -> dict:
    spec = _family(args)
    if spec.domain != args.domain:
        raise UsageError(f"{spec.kind} data lives on the {spec.domain}, not the {args.domain}")
    report: dict = {"family": asdict(spec), "domain": args.domain}
    try:
        if spec.kind == "cosine":
            report["invariants"] = asdict(cosine_invariants(spec.a))
            bounds, crit = cosine_criterion(spec.a)
        elif spec.kind == "gaussian":
            inv, bounds, crit, margin = gaussian_criterion(spec.a, spec.b)
            report["invariants"] = asdict(inv)
            report["wellposedness_margin"] = margin
        else:
            inv = pulse_invariants(spec.m)
            report["invariants"] = asdict(inv)
            report["wellposedness_margin"] = wellposedness_margin(inv)
            bounds = pulse_sup_bounds(spec.m) if args.bounds == "sup" else breaking_bounds_line(inv)
            bounds, crit = pulse_criterion(spec.m, bounds)
        report["bounds"] = asdict(bounds)
        report["bounds_kind"] = "periodic" if spec.kind == "cosine" else args.bounds
        report["criterion"] = crit.as_dict()
    except CriterionInapplicableError as exc:
        report["error"] = f"criterion-inapplicable: {exc}"
    return report


def cmd_criteria(args) -> int:
    started = time.perf_counter()
    report = _criteria_report(args)
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    print(text)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "criteria.json"
        path.write_text(text + "\n")
        return _finish(args, [path], started)
    return EXIT_OK


def _write_table(path: Path, header, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{float(v):.17g}" for v in row) + "\n")


def cmd_characteristics(args) -> int:
    started = time.perf_counter()
    if not (args.lower or args.upper or args.full):
        raise UsageError("choose at least one of --lower, --upper, --full")
    bounds = BreakingBounds(args.f0, args.f1)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict = {"v0": args.v0, "w0": args.w0, "f0": args.f0, "f1": args.f1,
                     "conditions_hold": blowup_conditions(args.v0, args.w0, bounds)}
    try:
        summary["t_star_bound"] = blowup_time_bound(args.v0, args.w0, bounds)
    except CriterionInapplicableError as exc:
        summary["t_star_bound"] = None
        summary["bound_error"] = str(exc)
    outputs = []
    if args.lower:
        run = integrate_lower_system(args.v0, args.w0, bounds, args.dt, args.t_max)
        path = out_dir / "lower.csv"
        _write_table(path, ["t", "V", "W"], np.column_stack([run.times, run.states]))
        outputs.append(path)
        summary["lower"] = {"blew_up": run.blew_up, "t_star": run.t_star, "reason": run.reason}
    if args.upper:
        if args.f1 <= 0 or args.v0 <= 0:
            raise UsageError("the upper solution needs --v0 > 0 and --f1 > 0")
        t_star = upper_blowup_time(args.v0, args.f1)
        t = np.linspace(0.0, min(args.t_max, t_star), 201)[:-1]
        path = out_dir / "upper.csv"
        _write_table(path, ["t", "V"], np.column_stack([t, upper_solution(args.v0, args.f1, t)]))
        outputs.append(path)
        summary["upper"] = {"t_star": t_star}
    if args.full:
        run = integrate_full_system(args.v0, args.w0, bounds, dt=args.dt, t_max=args.t_max)
        path = out_dir / "full.csv"
        _write_table(path, ["t", "V", "W", "U"], np.column_stack([run.times, run.states]))
        outputs.append(path)
        summary["full"] = {"blew_up": run.blew_up, "t_star": run.t_star, "reason": run.reason}
    path = out_dir / "characteristics.json"
    _write_json(path, summary)
    outputs.append(path)
    print(json.dumps(_jsonable(summary), sort_keys=True))
    return _finish(args, outputs, started)


def cmd_pulse(args) -> int:
    started = time.perf_counter()
    try:
        p = PulseParams(args.m)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc
    # X_y depends on (y, t) through phi and psi only; one period in psi suffices
    y = np.linspace(-40.0, 40.0, 4001)
    tt = np.linspace(0.0, np.pi / p.n, 201)
    Y, T = np.meshgrid(y, tt)
    jac_min = float(pulse_x_jacobian(p, Y, T).min())
    summary = {"m": args.m, "m_cr": M_CR, "invertible": p.invertible, "jacobian_min": jac_min,
               "wellposedness_identity_32m": 32 * args.m}
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    if p.invertible:
        inv = pulse_invariants(args.m, args.t)
        summary["wellposedness_margin"] = wellposedness_margin(inv)
        ys = np.linspace(-20.0, 20.0, 401)
        h = 1e-5
        X_plus = pulse_parametric(p, ys, args.t + h)[1]
        X_minus = pulse_parametric(p, ys, args.t - h)[1]
        U = pulse_parametric(p, ys, args.t)[0]
        summary["characteristic_residual"] = float(np.max(np.abs((X_plus - X_minus) / (2 * h) + 0.5 * U**2)))
        xs = np.linspace(args.x_min, args.x_max, args.points)
        path = out_dir / "pulse.csv"
        _write_table(path, ["x", "u"], np.column_stack([xs, pulse_sample(p, args.t, xs)]))
        outputs.append(path)
    elif not args.check_invertible:
        raise NotInvertibleError(f"m = {args.m} >= m_cr = {M_CR:.6f}; the pulse is multivalued in x")
    path = out_dir / "pulse.json"
    _write_json(path, summary)
    outputs.append(path)
    print(json.dumps(_jsonable(summary), sort_keys=True))
    return _finish(args, outputs, started)


def cmd_scan(args) -> int:
    started = time.perf_counter()
    if args.cosine == args.gaussian:
        raise UsageError("choose exactly one of --cosine, --gaussian")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs, summary = [], {}
    if args.cosine:
        a_min, a_max = args.a_min or 0.5, args.a_max or 2.0
        if args.threshold:
            a_star = threshold_scan(lambda a: cosine_criterion(a)[1].breaking_predicted,
                                    a_min, a_max, args.tol)
            summary["threshold_a"] = a_star
        if args.count > 0:
            cfg = SimConfig(n=args.n, t_end=args.t_end, dispersionless=args.dispersionless)
            rows = scan_cosine(np.linspace(a_min, a_max, args.count), cfg, workers=args.workers,
                               w_floor=args.w_floor)
            path = out_dir / "scan_cosine.csv"
            write_scan_csv(rows, path)
            outputs.append(path)
            summary["failures"] = [r["a"] for r in rows if r["error"]]
    else:
        a_min, a_max = args.a_min or 0.1, args.a_max or 3.0
        if args.threshold:
            b = args.b or 1.0
            summary["b"] = b
            summary["wellposed_boundary_a"] = threshold_scan(
                lambda a: gaussian_criterion(a, b)[3] < 1, a_min, a_max, args.tol)
            summary["breaking_boundary_a"] = threshold_scan(
                lambda a: gaussian_criterion(a, b)[2].breaking_predicted, a_min, a_max, args.tol)
        if args.count > 0:
            rows = scan_gaussian(np.linspace(a_min, a_max, args.count),
                                 np.linspace(args.b_min, args.b_max, args.count))
            path = out_dir / "scan_gaussian.csv"
            write_scan_csv(rows, path)
            outputs.append(path)
            summary["overlap"] = sum(r["wellposed"] and r["breaking"] for r in rows)
    path = out_dir / "scan.json"
    _write_json(path, summary)
    outputs.append(path)
    print(json.dumps(_jsonable(summary), sort_keys=True))
    return _finish(args, outputs, started)


# ------------------------------------------------------------------ parser


def _add_family(p, families=("cosine", "gaussian", "pulse")):
    p.add_argument("--family", choices=families, required=True)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--m", type=float)


def _add_common(p, out_required=True):
    p.add_argument("--out-dir", default="out" if out_required else None)
    p.add_argument("--config", help="flat key=value file; command-line flags win")
    p.add_argument("--seed-check", action="store_true",
                   help="compare outputs with the manifest already in --out-dir")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortpulse", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="pseudospectral run with W(t) tracking")
    _add_family(p, ("cosine", "gaussian", "pulse", "file"))
    p.add_argument("--path", help="initial samples for --family file")
    p.add_argument("--n", type=int, default=1024)
    p.add_argument("--L", type=float, default=None, help="box length (1 for cosine, 40 for line data)")
    p.add_argument("--t-end", type=float, default=2.0)
    p.add_argument("--cfl", type=float, default=0.25)
    p.add_argument("--save-every", type=int, default=10)
    p.add_argument("--dealias", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--dispersionless", action="store_true")
    p.add_argument("--w-max", type=float, default=1e3)
    p.add_argument("--drift-tol", type=float, default=1e-6)
    p.add_argument("--tail-tol", type=float, default=1e-6)
    p.add_argument("--w-floor", type=float, default=10.0, help="lowest W admitted to the blow-up fit")
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("criteria", help="invariants, bounds and breaking verdict")
    _add_family(p)
    p.add_argument("--domain", choices=("line", "circle"), required=True)
    p.add_argument("--bounds", choices=("energy", "sup"), default="energy",
                   help="line bounds from the invariants or from space-time suprema (pulse only)")
    _add_common(p, out_required=False)
    p.set_defaults(handler=cmd_criteria)

    p = sub.add_parser("characteristics", help="lower, upper and full slope systems")
    p.add_argument("--lower", action="store_true")
    p.add_argument("--upper", action="store_true")
    p.add_argument("--full", action="store_true")
    p.add_argument("--v0", type=float, required=True)
    p.add_argument("--w0", type=float, required=True)
    p.add_argument("--f0", type=float, required=True)
    p.add_argument("--f1", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-max", type=float, default=10.0)
    _add_common(p)
    p.set_defaults(handler=cmd_characteristics)

    p = sub.add_parser("pulse", help="exact pulse samples and consistency checks")
    p.add_argument("--m", type=float, required=True)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--check-invertible", action="store_true")
    p.add_argument("--x-min", type=float, default=-20.0)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=801)
    _add_common(p)
    p.set_defaults(handler=cmd_pulse)

    p = sub.add_parser("scan", help="parameter scans and threshold search")
    p.add_argument("--cosine", action="store_true")
    p.add_argument("--gaussian", action="store_true")
    p.add_argument("--threshold", action="store_true", help="bisect for the criterion boundary")
    p.add_argument("--a-min", type=float)
    p.add_argument("--a-max", type=float)
    p.add_argument("--b", type=float, help="fixed b for the Gaussian threshold search")
    p.add_argument("--b-min", type=float, default=0.5)
    p.add_argument("--b-max", type=float, default=4.0)
    p.add_argument("--count", type=int, default=0, help="grid points per axis (0 skips the table)")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--t-end", type=float, default=2.0)
    p.add_argument("--dispersionless", action="store_true")
    p.add_argument("--w-floor", type=float, default=10.0)
    p.add_argument("--workers", type=int, default=1)
    _add_common(p)
    p.set_defaults(handler=cmd_scan)
    return parser


def _read_config(path: str) -> dict:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser, argv) -> argparse.Namespace:
    """Config-file values become subcommand defaults, so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    subparsers = parser._subparsers._group_actions[0].choices
    if not known.config or known.command not in subparsers:
        return parser.parse_args(argv)
    sub = subparsers[known.command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, value in _read_config(known.config).items():
        action = actions.get(key)
        if action is None or key in ("config", "help"):
            raise UsageError(f"unknown config key {key!r} for {known.command}")
        if action.nargs == 0:  # boolean switches
            low = value.lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise UsageError(f"config key {key!r} needs a boolean")
            defaults[key] = low in ("true", "1", "yes")
        else:
            try:
                defaults[key] = action.type(value) if action.type else value
            except ValueError as exc:
                raise UsageError(f"config key {key!r}: {exc}") from exc
            if action.choices is not None and defaults[key] not in action.choices:
                raise UsageError(f"config key {key!r} must be one of {sorted(action.choices)}")
    sub.set_defaults(**defaults)
    for action in sub._actions:
        if action.dest in defaults:
            action.required = False
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.handler(args)
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroMassError, DegenerateProfileError, NotInvertibleError) as exc:
        print(f"invalid input data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ShortPulseError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
