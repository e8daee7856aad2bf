"""Command-line front end.

Commands: single, sweep, chsh, scan, verify.  Angles are given in degrees
and converted to radians once, here.  Output is CSV (header row, 9
significant digits, '\\n' line endings) or a JSON object with ``config``,
``results`` and ``checks`` keys.

Exit status: 0 on success, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import checks, model, sim
from .model import PairSourceSpec
from .sim import ExperimentConfig, ModelKind

MAX_GRID_POINTS = 10**8
ANALYTIC = "analytic"


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".9g")
    return str(x)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


# ----------------------------------------------------------------- parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=[k.value for k in ModelKind], default=None,
                        help="sampling law (default: phase; scan defaults to all models)")
    common.add_argument("--analytic", action="store_true", help="closed-form evaluation, no sampling")
    common.add_argument("--phi1", type=float, default=model.CHSH_ANGLES_DEG[0], help="degrees")
    common.add_argument("--phi1p", type=float, default=model.CHSH_ANGLES_DEG[1], help="degrees")
    common.add_argument("--phi2", type=float, default=model.CHSH_ANGLES_DEG[2], help="degrees")
    common.add_argument("--phi2p", type=float, default=model.CHSH_ANGLES_DEG[3], help="degrees")
    common.add_argument("--delta", type=float, default=0.0, help="source phase difference, degrees")
    common.add_argument("--phi0", type=float, default=0.0, help="common initial phase, degrees")
    common.add_argument("--trials", type=int, default=1_000_000)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--partitions", type=int, default=None,
                        help="parallel substreams (default: number of processors)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="phasebell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("single", parents=[common], help="one setting pair")
    sub.add_parser("chsh", parents=[common], help="CHSH sum at four settings")
    sweep = sub.add_parser("sweep", parents=[common], help="correlation versus phi2 at fixed phi1")
    sweep.add_argument("--start", type=float, default=0.0)
    sweep.add_argument("--stop", type=float, default=180.0)
    sweep.add_argument("--step", type=float, default=5.0)
    scan = sub.add_parser("scan", parents=[common], help="max |S| over a grid of settings")
    scan.add_argument("--grid-step", type=float, default=22.5, help="degrees; grid covers [0, 180)")
    sub.add_parser("verify", parents=[common], help="run the built-in invariant checks")
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    angles = (args.phi1, args.phi1p, args.phi2, args.phi2p, args.delta, args.phi0)
    if not all(map(math.isfinite, angles)):
        parser.error("angles must be finite")
    if args.trials < 1 or args.trials > sim.MAX_TRIALS:
        parser.error("--trials must lie in [1, 2**62]")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.partitions is None:
        args.partitions = min(os.cpu_count() or 1, args.trials)
    elif not 1 <= args.partitions <= args.trials:
        parser.error("--partitions must lie in [1, trials]")
    if args.command == "sweep":
        if not args.step > 0:
            parser.error("--step must be positive")
        if args.stop < args.start:
            parser.error("--stop must not be below --start")
    if args.command == "scan":
        if not args.grid_step > 0:
            parser.error("--grid-step must be positive")
        if math.ceil(180.0 / args.grid_step) ** 4 > MAX_GRID_POINTS:
            parser.error(f"grid too fine: more than {MAX_GRID_POINTS} quadruples")


def _resolved_config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    if cfg["model"] is None:
        cfg["model"] = [k.value for k in ModelKind] if args.command == "scan" else ModelKind.PHASE.value
    cfg["backend"] = ANALYTIC if args.analytic else "monte-carlo"
    cfg["angle_unit"] = "deg"
    return cfg


def _experiment(args, kind: ModelKind, phi1_deg: float, phi2_deg: float) -> ExperimentConfig:
    return ExperimentConfig(
        model=kind,
        phi1=math.radians(phi1_deg),
        phi2=math.radians(phi2_deg),
        source=PairSourceSpec(delta=math.radians(args.delta), phi0=math.radians(args.phi0)),
        trials=args.trials,
        seed=args.seed,
        partitions=args.partitions,
    )


# ---------------------------------------------------------------- commands


def cmd_single(args) -> tuple[list[str], list[list], dict]:
    kind = ModelKind(args.model or ModelKind.PHASE)
    a, b, d = math.radians(args.phi1), math.radians(args.phi2), math.radians(args.delta)
    probs = sim.analytic_probabilities(kind, a, b, d)
    e = sim.analytic_correlation(kind, a, b, d)
    head = [args.phi1, args.phi2, args.delta]
    if args.analytic:
        if kind is ModelKind.PHASE:
            p_joint = model.joint_probability(a, b, PairSourceSpec(d, math.radians(args.phi0)))
        else:
            p_joint = probs.pp + probs.mm
        header = ["phi1_deg", "phi2_deg", "delta_deg", "p_joint", "p_pp", "p_mm", "p_pm", "p_mp", "E"]
        row = head + [p_joint, *probs, e]
    else:
        counts = sim.run_experiment(_experiment(args, kind, args.phi1, args.phi2))
        est = sim.estimate_correlation(counts)
        header = ["phi1_deg", "phi2_deg", "delta_deg", "n_pp", "n_mm", "n_pm", "n_mp",
                  "f_pp", "f_mm", "f_pm", "f_mp", "E_hat", "std_err", "n", "E_analytic"]
        row = head + [*counts.as_tuple(), *counts.frequencies(), est.e_hat, est.std_err, est.n, e]
    return header, [row], dict(zip(header, row))


def cmd_chsh(args) -> tuple[list[str], list[list], dict]:
    kind = ModelKind(args.model or ModelKind.PHASE)
    deg = (args.phi1, args.phi1p, args.phi2, args.phi2p)
    rad = [math.radians(x) for x in deg]
    d = math.radians(args.delta)
    labels = ["E_12", "E_12p", "E_1p2", "E_1p2p"]
    header = ["phi1_deg", "phi1p_deg", "phi2_deg", "phi2p_deg"] + labels + ["S"]
    if args.analytic:
        es = [sim.analytic_correlation(kind, x, y, d) for x, y in model.chsh_terms(*rad)]
        if kind is ModelKind.PHASE:
            s = model.chsh(*rad, delta=d)
        else:
            s = sim.analytic_chsh(kind, *rad, delta=d)
        row = [*deg, *es, s]
    else:
        est = sim.estimate_chsh(_experiment(args, kind, args.phi1, args.phi2), rad[1], rad[3])
        header += [f"{l}_std_err" for l in labels] + ["S_std_err"]
        row = [*deg, *(t.e_hat for t in est.terms), est.s_hat, *(t.std_err for t in est.terms), est.std_err]
    return header, [row], dict(zip(header, row))


def sweep_angles(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid start, start+step, ... not exceeding stop (1e-9 slack)."""
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def cmd_sweep(args) -> tuple[list[str], list[list], dict]:
    kind = ModelKind(args.model or ModelKind.PHASE)
    d = math.radians(args.delta)
    header = ["angle_deg", "E_analytic"]
    if not args.analytic:
        header += ["E_hat", "std_err"]
    rows = []
    base = _experiment(args, kind, args.phi1, args.phi1)
    for k, ang in enumerate(sweep_angles(args.start, args.stop, args.step)):
        e = sim.analytic_correlation(kind, math.radians(args.phi1), math.radians(ang), d)
        row = [float(ang), e]
        if not args.analytic:
            est = sim.estimate_correlation(sim.run_experiment(replace(base, phi2=math.radians(ang)), tag=k))
            row += [est.e_hat, est.std_err]
        rows.append(row)
    return header, rows, {"rows": [dict(zip(header, r)) for r in rows]}


def cmd_scan(args) -> tuple[list[str], list[list], dict]:
    kinds = [ModelKind(args.model)] if args.model else list(ModelKind)
    grid_deg = np.arange(0.0, 180.0, args.grid_step)
    grid = np.radians(grid_deg)
    d = math.radians(args.delta)
    header = ["model", "grid_step_deg", "max_abs_S", "phi1_deg", "phi1p_deg", "phi2_deg", "phi2p_deg"]
    if not args.analytic:
        header.append("std_err")
    rows = []
    for kind in kinds:
        if args.analytic:
            smax, arg = model.max_abs_chsh_grid(
                grid, corr=lambda x, y, kind=kind: sim.analytic_correlation(kind, x, y, d))
            extra = []
        else:
            res = sim.scan_chsh(_experiment(args, kind, 0.0, 0.0), grid)
            smax, arg, extra = res.max_abs_s, res.argmax, [res.std_err]
        rows.append([kind.value, args.grid_step, smax, *(math.degrees(x) for x in arg), *extra])
    return header, rows, {"rows": [dict(zip(header, r)) for r in rows]}


def cmd_verify(args) -> tuple[list[str], list[list], dict, list[checks.Check]]:
    results = checks.run_checks(seed=args.seed)
    header = ["check", "passed", "detail"]
    rows = [[c.name, c.passed, c.detail] for c in results]
    return header, rows, {"passed": all(c.passed for c in results)}, results


COMMANDS = {"single": cmd_single, "chsh": cmd_chsh, "sweep": cmd_sweep, "scan": cmd_scan}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)

    check_list: list[checks.Check] = []
    if args.command == "verify":
        header, rows, results, check_list = cmd_verify(args)
    else:
        header, rows, results = COMMANDS[args.command](args)

    if args.format == "csv":
        text = _csv(header, rows)
    else:
        doc = {
            "config": _resolved_config(args),
            "results": results,
            "checks": [c._asdict() for c in check_list],
        }
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    failed = [c.name for c in check_list if not c.passed]
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def run() -> None:
    sys.exit(main())
