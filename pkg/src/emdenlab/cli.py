"""Batch command-line front end.

Every library module is exposed as one subcommand; each invocation prints
its primary payload to standard output (JSON or CSV) and, when --out is
given, writes the data files plus a manifest.json describing the run.
Numeric text uses the shortest round-trip representation, so identical
flags produce byte-identical data files; the manifest's wall_time_s is
the one intentionally nondeterministic field.

Exit codes: 0 success, 2 invalid parameters, 3 inconclusive numerics,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .ckn import (
    ADMISSIBLE,
    CknTriple,
    best_constant,
    check_balance,
)
from .closed_forms import (
    bubble,
    bubble_eval,
    bubble_second_derivative,
    normalized_bubble,
    residual,
)
from .emden_fowler import fixed_points, hamiltonian, to_cylinder
from .errors import EmdenLabError
from .params import (
    INADMISSIBLE_WEIGHTS,
    SYMMETRY_BREAKING,
    ProblemParams,
    classify,
    derive,
    fs_region,
)
from .pohozaev import evaluate as ball_identity
from .shooting import (
    Inconclusive,
    RadialTrajectory,
    ShootConfig,
    shoot,
    sweep_shoot,
    threshold_bisect,
    trajectory_from_csv,
    trajectory_to_csv,
)


def _f(x) -> str:
    return repr(float(x))


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _write_text(out_dir: str, name: str, text: str) -> str:
    with open(os.path.join(out_dir, name), "w", newline="") as fh:
        fh.write(text)
    return name


def _write_manifest(out_dir, subcommand, params, config, outputs, t0) -> None:
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "config": config,
        "outputs": sorted(outputs),
        "tool_version": __version__,
        "wall_time_s": time.perf_counter() - t0,
    }
    _write_text(out_dir, "manifest.json", _json_text(manifest))


def _prepare_out(args) -> str | None:
    if args.out is None:
        return None
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _config_from(args) -> ShootConfig:
    return ShootConfig(
        beta=args.beta,
        r_max=args.rmax,
        rel_tol=args.rtol,
        abs_tol=args.atol,
        epsilon0=args.eps0,
        nodes_per_decade=args.nodes_per_decade,
    )


def _read_grid(path: str, n_columns: int):
    """Numeric rows from a CSV grid file; one optional header row allowed."""
    rows = []
    first_data_seen = False
    with open(path, newline="") as fh:
        for line in csv.reader(fh):
            if not line or not "".join(line).strip():
                continue
            if line[0].lstrip().startswith("#"):
                continue
            try:
                values = [float(tok) for tok in line[:n_columns]]
            except ValueError:
                if first_data_seen:
                    raise ValueError(f"non-numeric row {line!r} in {path}")
                continue
            if len(line) < n_columns:
                raise ValueError(f"row {line!r} has fewer than {n_columns} columns")
            first_data_seen = True
            rows.append(values)
    if not rows:
        raise ValueError(f"no parameter rows found in {path}")
    return rows


# ---------------------------------------------------------------- classify


def cmd_classify(args) -> int:
    params = ProblemParams(args.N, args.a, args.b, args.p)
    regime = classify(params)
    payload = {"params": dataclasses.asdict(params)}
    payload.update(regime.to_dict())
    if regime.kind != INADMISSIBLE_WEIGHTS and params.p > 1:
        payload.update(derive(params).to_dict())
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        t0 = time.perf_counter()
        names = [_write_text(out, "classify.json", _json_text(payload))]
        _write_manifest(out, "classify", dataclasses.asdict(params), {}, names, t0)
    return 0


# ------------------------------------------------------------------- shoot


_SHOOT_PLOT = """\
# gnuplot: radial shot profile
set datafile separator ","
set logscale x
set xlabel "r"
set ylabel "v"
set grid
plot "trajectory.csv" skip 1 using 1:2 with lines title "v(r)", \\
     "trajectory.csv" skip 1 using 1:3 with lines title "v'(r)"
"""


def cmd_shoot(args) -> int:
    params = ProblemParams(args.N, args.a, args.b, args.p)
    config = _config_from(args)
    t0 = time.perf_counter()
    traj = shoot(params, config)
    payload = {
        "params": dataclasses.asdict(params),
        "config": config.to_dict(),
        "outcome": traj.outcome.to_dict(),
        "nodes": int(len(traj.r)),
    }
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        names = []
        trajectory_to_csv(traj, os.path.join(out, "trajectory.csv"))
        names.append("trajectory.csv")
        names.append(_write_text(out, "shoot.json", _json_text(payload)))
        if args.emit_plot:
            names.append(_write_text(out, "shoot.gp", _SHOOT_PLOT))
        _write_manifest(
            out, "shoot", dataclasses.asdict(params), config.to_dict(), names, t0
        )
    return 3 if isinstance(traj.outcome, Inconclusive) else 0


# --------------------------------------------------------------- threshold


def cmd_threshold(args) -> int:
    config = _config_from(args)
    t0 = time.perf_counter()
    p_star = threshold_bisect(
        args.N, args.a, args.b, args.p_lo, args.p_hi, tol_p=args.tol, config=config
    )
    d = derive(ProblemParams(args.N, args.a, args.b, p_star))
    payload = {
        "p_star": p_star,
        "p_critical": d.p_critical,
        "abs_error": abs(p_star - d.p_critical),
        "tol_p": args.tol,
        "bracket": [args.p_lo, args.p_hi],
        "params": {"N": args.N, "a": args.a, "b": args.b},
    }
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        names = [_write_text(out, "threshold.json", _json_text(payload))]
        _write_manifest(out, "threshold", payload["params"], config.to_dict(), names, t0)
    return 0


# ------------------------------------------------------------------ bubble


_BUBBLE_PLOT = """\
# gnuplot: exact critical profile
set datafile separator ","
set logscale x
set xlabel "r"
set ylabel "v"
set grid
plot "bubble.csv" skip 1 using 1:2 with lines title "v(r)", \\
     "bubble.csv" skip 1 using 1:3 with lines title "v'(r)"
"""


def cmd_bubble(args) -> int:
    if args.samples < 2:
        raise ValueError(f"--samples = {args.samples}, need at least 2")
    if not 0 < args.rmin < args.rmax:
        raise ValueError(f"need 0 < --rmin < --rmax, got [{args.rmin}, {args.rmax}]")
    N, a, b = args.N, args.a, args.b
    p = args.p if args.p is not None else (N + 2.0 + 2.0 * b - a) / (N - 2.0 + a)
    params = ProblemParams(N, a, b, p)
    t0 = time.perf_counter()
    if args.lambda_scale is not None:
        prof = bubble(params, args.lambda_scale)
    else:
        prof = normalized_bubble(params)
    r = np.geomspace(args.rmin, args.rmax, args.samples)
    v, dv = bubble_eval(prof, r)
    ddv = bubble_second_derivative(prof, r)
    _, rel = residual(params, v, dv, ddv, r)
    payload = {
        "params": dataclasses.asdict(params),
        "m": prof.m,
        "gamma": prof.gamma,
        "amplitude": prof.amplitude,
        "lambda_scale": prof.lambda_scale,
        "samples": int(args.samples),
        "max_rel_residual": float(np.max(rel)),
    }
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "v", "dv"])
        for rr, vv, dd in zip(r, v, dv):
            writer.writerow([_f(rr), _f(vv), _f(dd)])
        names = [
            _write_text(out, "bubble.csv", buf.getvalue()),
            _write_text(out, "bubble.json", _json_text(payload)),
        ]
        if args.emit_plot:
            names.append(_write_text(out, "bubble.gp", _BUBBLE_PLOT))
        config = {"rmin": args.rmin, "rmax": args.rmax, "samples": args.samples}
        _write_manifest(out, "bubble", dataclasses.asdict(params), config, names, t0)
    return 0


# ---------------------------------------------------------------- pohozaev


def cmd_pohozaev(args) -> int:
    params = ProblemParams(args.N, args.a, args.b, args.p)
    radii = [float(tok) for tok in args.radii.split(",") if tok.strip()]
    if not radii:
        raise ValueError("--radii parsed to an empty list")
    t0 = time.perf_counter()
    if args.traj is not None:
        traj = trajectory_from_csv(args.traj, params)
    else:
        traj = shoot(params, _config_from(args))
    reports = [ball_identity(traj, R) for R in radii]
    payload = {
        "params": dataclasses.asdict(params),
        "interior_coeff": reports[0].interior_coeff,
        "reports": [rep.to_dict() for rep in reports],
    }
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "R",
                "interior",
                "boundary1",
                "boundary2",
                "boundary3",
                "residual",
                "relative_residual",
            ]
        )
        for rep in reports:
            writer.writerow(
                [
                    _f(rep.R),
                    _f(rep.interior_integral),
                    _f(rep.boundary_1),
                    _f(rep.boundary_2),
                    _f(rep.boundary_3),
                    _f(rep.residual),
                    _f(rep.relative_residual),
                ]
            )
        names = [
            _write_text(out, "pohozaev.csv", buf.getvalue()),
            _write_text(out, "pohozaev.json", _json_text(payload)),
        ]
        if args.traj is None:
            trajectory_to_csv(traj, os.path.join(out, "trajectory.csv"))
            names.append("trajectory.csv")
        config = {"radii": radii, "traj": os.path.basename(args.traj) if args.traj else None}
        if args.traj is None:
            config.update(_config_from(args).to_dict())
        _write_manifest(out, "pohozaev", dataclasses.asdict(params), config, names, t0)
    return 0


# ------------------------------------------------------------------- phase


_PHASE_PLOT = """\
# gnuplot: cylinder phase portrait
set datafile separator ","
set xlabel "w"
set ylabel "dw/dt"
set grid
plot "cylinder.csv" skip 1 using 2:3 with lines title "orbit"
"""


def cmd_phase(args) -> int:
    params = ProblemParams(args.N, args.a, args.b, args.p)
    config = _config_from(args)
    t0 = time.perf_counter()
    traj = shoot(params, config)
    # a crossing shot ends on one nonpositive node; the cylinder map
    # needs v > 0, so drop it
    keep = len(traj.v) - 1 if traj.v[-1] <= 0.0 else len(traj.v)
    trimmed = RadialTrajectory(
        params=params,
        r=traj.r[:keep],
        v=traj.v[:keep],
        dv=traj.dv[:keep],
        outcome=traj.outcome,
        config=config,
    )
    cyl = to_cylinder(trimmed)
    d = derive(params)
    H = hamiltonian(params, cyl.w, cyl.dw)
    report = fixed_points(params) if params.p > d.p_serrin else None
    payload = {
        "params": dataclasses.asdict(params),
        "outcome": traj.outcome.to_dict(),
        "lambda1": d.lambda1,
        "lambda2": d.lambda2,
        "hamiltonian_first": float(H[0]),
        "hamiltonian_last": float(H[-1]),
        "fixed_point": report.to_dict() if report is not None else None,
    }
    _emit(_json_text(payload))
    out = _prepare_out(args)
    if out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "w", "dw"])
        for tt, ww, dd in zip(cyl.t, cyl.w, cyl.dw):
            writer.writerow([_f(tt), _f(ww), _f(dd)])
        names = [
            _write_text(out, "cylinder.csv", buf.getvalue()),
            _write_text(out, "phase.json", _json_text(payload)),
        ]
        if args.emit_plot:
            names.append(_write_text(out, "phase.gp", _PHASE_PLOT))
        _write_manifest(
            out, "phase", dataclasses.asdict(params), config.to_dict(), names, t0
        )
    return 3 if isinstance(traj.outcome, Inconclusive) else 0


# --------------------------------------------------------------------- ckn


def cmd_ckn(args) -> int:
    t0 = time.perf_counter()
    out = _prepare_out(args)
    if args.grid is not None:
        rows = _read_grid(args.grid, 2)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["a", "b", "q", "s_estimate", "fs_flag"])
        for a, b in rows:
            # per row, q is pinned by the dimensional balance
            q = 2.0 * (args.N + b) / (args.N - 2.0 + a)
            triple = CknTriple(args.N, a, b, q)
            flag = fs_region(ProblemParams(args.N, a, b, q - 1.0))
            verdict = check_balance(triple).verdict
            if verdict == ADMISSIBLE and flag != SYMMETRY_BREAKING:
                s = best_constant(triple).s_estimate
            else:
                s = float("nan")
            writer.writerow([_f(a), _f(b), _f(q), _f(s), flag])
        text = buf.getvalue()
        _emit(text)
        if out:
            names = [_write_text(out, "ckn_grid.csv", text)]
            params_echo = {"N": args.N, "grid": os.path.basename(args.grid)}
            _write_manifest(out, "ckn", params_echo, {"rows": len(rows)}, names, t0)
        return 0
    if args.a is None or args.b is None or args.q is None:
        raise ValueError("ckn needs either --grid or all of --a, --b, --q")
    triple = CknTriple(args.N, args.a, args.b, args.q)
    report = best_constant(triple)
    payload = {"triple": triple.to_dict(), "balance": check_balance(triple).to_dict()}
    payload.update(report.to_dict())
    _emit(_json_text(payload))
    if out:
        names = [_write_text(out, "ckn.json", _json_text(payload))]
        _write_manifest(out, "ckn", triple.to_dict(), {}, names, t0)
    return 0


# ------------------------------------------------------------------- sweep


_SWEEP_PLOT = """\
# gnuplot: crossing radius against the source exponent
set datafile separator ","
set xlabel "p"
set ylabel "r0"
set logscale y
set grid
plot "sweep.csv" skip 1 using 4:6 with points pt 7 title "crossing radius"
"""

_SWEEP_COLUMNS = [
    "N",
    "a",
    "b",
    "p",
    "kind",
    "r0",
    "r_reached",
    "decay_exponent_estimate",
    "oscillation_count",
    "reason",
]


def _sweep_row(params: ProblemParams, outcome) -> list:
    cells = dict.fromkeys(_SWEEP_COLUMNS, "")
    cells["N"] = str(params.N)
    cells["a"] = _f(params.a)
    cells["b"] = _f(params.b)
    cells["p"] = _f(params.p)
    cells["kind"] = outcome.kind
    for key, value in outcome.to_dict().items():
        if key == "kind":
            continue
        if key == "oscillation_count":
            cells[key] = str(int(value))
        elif key == "reason":
            cells[key] = value
        else:
            cells[key] = _f(value)
    return [cells[name] for name in _SWEEP_COLUMNS]


def cmd_sweep(args) -> int:
    raw = _read_grid(args.grid, 4)
    rows = [ProblemParams(int(round(r[0])), r[1], r[2], r[3]) for r in raw]
    config = _config_from(args)
    t0 = time.perf_counter()
    outcomes = sweep_shoot(rows, config, processes=args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_SWEEP_COLUMNS)
    for params, outcome in zip(rows, outcomes):
        writer.writerow(_sweep_row(params, outcome))
    text = buf.getvalue()
    _emit(text)
    out = _prepare_out(args)
    if out:
        names = [_write_text(out, "sweep.csv", text)]
        if args.emit_plot:
            names.append(_write_text(out, "sweep.gp", _SWEEP_PLOT))
        params_echo = {"grid": os.path.basename(args.grid), "rows": len(rows)}
        config_echo = dict(config.to_dict(), jobs=args.jobs)
        _write_manifest(out, "sweep", params_echo, config_echo, names, t0)
    return 0


# ------------------------------------------------------------------ parser


def _add_problem_flags(sp, with_p=True) -> None:
    sp.add_argument("--N", type=int, required=True, help="space dimension (>= 3)")
    sp.add_argument("--a", type=float, required=True, help="gradient weight exponent")
    sp.add_argument("--b", type=float, required=True, help="source weight exponent")
    if with_p:
        sp.add_argument("--p", type=float, required=True, help="source power")


def _add_shoot_flags(sp, beta=1.0, rmax=1e4) -> None:
    sp.add_argument("--beta", type=float, default=beta, help="starting height v(0)")
    sp.add_argument("--rmax", type=float, default=rmax, help="integration horizon")
    sp.add_argument("--rtol", type=float, default=1e-10, help="integrator rel tolerance")
    sp.add_argument("--atol", type=float, default=1e-12, help="integrator abs tolerance")
    sp.add_argument("--eps0", type=float, default=None, help="series hand-off radius")
    sp.add_argument(
        "--nodes-per-decade", type=int, default=160, help="stored node density"
    )


def _add_out_flags(sp, plot=False) -> None:
    sp.add_argument("--out", default=None, help="directory for data files + manifest")
    if plot:
        sp.add_argument(
            "--emit-plot",
            action="store_true",
            help="also write a gnuplot script next to the CSVs (needs --out)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emdenlab",
        description=(
            "numerical laboratory for the weighted radial source equation "
            "div(|x|^a grad u) + |x|^b u^p = 0"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="regime of the existence dichotomy")
    _add_problem_flags(sp)
    _add_out_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("shoot", help="integrate one radial trajectory")
    _add_problem_flags(sp)
    _add_shoot_flags(sp)
    _add_out_flags(sp, plot=True)
    sp.set_defaults(func=cmd_shoot)

    sp = sub.add_parser("threshold", help="bisect the crossing threshold in p")
    _add_problem_flags(sp, with_p=False)
    sp.add_argument("--p-lo", type=float, required=True, help="crossing endpoint")
    sp.add_argument("--p-hi", type=float, required=True, help="non-crossing endpoint")
    sp.add_argument("--tol", type=float, default=1e-3, help="bracket width target")
    _add_shoot_flags(sp, beta=100.0, rmax=1e3)
    _add_out_flags(sp)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("bubble", help="exact critical profile and its residual")
    _add_problem_flags(sp, with_p=False)
    sp.add_argument("--p", type=float, default=None, help="must equal the critical power")
    sp.add_argument("--samples", type=int, default=100, help="sample count")
    sp.add_argument("--rmin", type=float, default=1e-3, help="first sample radius")
    sp.add_argument("--rmax", type=float, default=1e3, help="last sample radius")
    sp.add_argument("--lambda-scale", type=float, default=None, help="dilation; default normalizes v(0) = 1")
    _add_out_flags(sp, plot=True)
    sp.set_defaults(func=cmd_bubble)

    sp = sub.add_parser("pohozaev", help="ball integral identity along a shot")
    _add_problem_flags(sp)
    sp.add_argument("--radii", required=True, help="comma-separated evaluation radii")
    sp.add_argument("--traj", default=None, help="reuse a trajectory CSV instead of shooting")
    _add_shoot_flags(sp)
    _add_out_flags(sp)
    sp.set_defaults(func=cmd_pohozaev)

    sp = sub.add_parser("phase", help="cylinder-frame orbit and fixed point")
    _add_problem_flags(sp)
    _add_shoot_flags(sp)
    _add_out_flags(sp, plot=True)
    sp.set_defaults(func=cmd_phase)

    sp = sub.add_parser("ckn", help="weighted Rayleigh quotient best constant")
    sp.add_argument("--N", type=int, required=True, help="space dimension (>= 3)")
    sp.add_argument("--a", type=float, default=None, help="gradient weight exponent")
    sp.add_argument("--b", type=float, default=None, help="norm weight exponent")
    sp.add_argument("--q", type=float, default=None, help="norm exponent")
    sp.add_argument("--grid", default=None, help="CSV of a,b rows; q is set by balance")
    _add_out_flags(sp)
    sp.set_defaults(func=cmd_ckn)

    sp = sub.add_parser("sweep", help="batch of shots from a grid file")
    sp.add_argument("--grid", required=True, help="CSV of N,a,b,p rows")
    sp.add_argument("--jobs", type=int, default=None, help="worker processes")
    _add_shoot_flags(sp)
    _add_out_flags(sp, plot=True)
    sp.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EmdenLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
