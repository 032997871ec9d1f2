"""Command line entry point: ``curvebody simulate | verify | distance | audit``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .config import load_config
from .dynamics import integrate
from .errors import ChartExit, ConfigError, CurveBodyError, PotentialSingularity
from .kinematics import center_of_mass_chart
from .lagrangian import audit
from .ring import SpaceSign
from .space import ChartPoint, geodesic_distance
from .verify import format_report, run_suite

FIELDS = (
    "t", "q1x", "q1y", "q1z", "q2x", "q2y", "q2z",
    "q1dotx", "q1doty", "q1dotz", "q2dotx", "q2doty", "q2dotz",
    "r", "qcx", "qcy", "qcz", "kinetic", "potential", "energy",
)


def record(sample, m1, m2) -> dict:
    st = sample.state
    qc = center_of_mass_chart(st.config(m1, m2))
    values = [sample.t, *st.v1, *st.v2, *st.w1, *st.w2, sample.r, *qc,
              sample.kinetic, sample.potential, sample.energy]
    return dict(zip(FIELDS, (float(x) for x in values)))


def _g17(x: float) -> str:
    return "%.17g" % x


def write_records(fh, records, fmt: str):
    if fmt == "csv":
        fh.write(",".join(FIELDS) + "\n")
        for rec in records:
            fh.write(",".join(_g17(rec[k]) for k in FIELDS) + "\n")
    else:
        # repr of a float round-trips exactly, so json.dumps is lossless
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def _triple(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three numbers, got {text!r}") from None


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    status, samples, message = 0, None, None
    try:
        samples = integrate(cfg.initial_state(), cfg.m1, cfg.m2, cfg.potential,
                            cfg.dt, cfg.steps, cfg.output_every)
    except (ChartExit, PotentialSingularity) as exc:
        status, samples = 2, exc.trajectory
        message = f"stopped: {type(exc).__name__}: {exc} (last valid step {exc.last_index})"
    records = [record(s, cfg.m1, cfg.m2) for s in samples]
    try:
        with open(args.out, "w", encoding="ascii", newline="") as fh:
            write_records(fh, records, args.format)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    if message:
        print(message, file=sys.stderr)
    return status


def cmd_verify(args) -> int:
    if args.cases < 1:
        print("error: --cases must be >= 1", file=sys.stderr)
        return 1
    if args.seed < 0:
        print("error: --seed must be >= 0", file=sys.stderr)
        return 1
    spaces = None if args.space is None else (SpaceSign.parse(args.space),)
    try:
        results = run_suite(args.cases, args.seed, spaces)
    except Exception as exc:  # any crash inside the suite is an internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(format_report(results, args.cases, args.seed))
    return 0 if all(c.passed for c in results) else 1


def cmd_distance(args) -> int:
    try:
        p1 = ChartPoint(np.array(args.q1), args.space)
        p2 = ChartPoint(np.array(args.q2), args.space)
        r = float(geodesic_distance(p1, p2))
    except CurveBodyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print("%.12g" % r)
    return 0


def cmd_audit(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    try:
        rep = audit(cfg.initial_state(), cfg.m1, cfg.m2)
    except CurveBodyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(f"{'form':<22} {'value':>24} {'|value - embedding|':>20}")
    for key, val in rep.values.items():
        res = rep.residuals.get(key, 0.0)
        print(f"{key:<22} {val:>24.17g} {res:>20.3e}")
    print(f"cross-term magnitude   {rep.cross_term:.3e}")
    for key, msg in rep.errors.items():
        print(f"skipped {key}: {msg}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvebody", description="Two-body mechanics on S^3 and H^3.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a configuration and write the trajectory")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the randomized invariant suite")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--space", choices=("sphere", "hyperbolic"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("distance", help="geodesic distance between two chart points")
    p.add_argument("--space", choices=("sphere", "hyperbolic"), required=True)
    p.add_argument("--q1", type=_triple, required=True)
    p.add_argument("--q2", type=_triple, required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("audit", help="evaluate every kinetic form at a configuration's initial state")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse usage errors exit 2; map them to the config/usage status
        return 0 if exc.code == 0 else 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
