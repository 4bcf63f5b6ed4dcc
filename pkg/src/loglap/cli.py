"""Command-line interface: kernel tabulation, operator application, and the
verification suites with machine-readable reports.

Exit codes: 0 success, 1 failed verification check, 2 argument error,
3 quadrature non-convergence.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import euclid, hyperbolic, reporting
from .quadrature import NonConvergenceError, NonFiniteIntegrandError
from .verification import SUITES, run_suite


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loglap",
        description="Fractional and logarithmic Laplacian toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="tabulate a radial kernel to CSV + JSON")
    k.add_argument("--space", choices=["euclid", "hyperbolic"], required=True)
    k.add_argument("--kind", choices=["frac", "log1", "log2", "heat"], required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--s", type=float, default=None)
    k.add_argument("--t", type=float, default=None)
    k.add_argument("--r-min", type=float, default=0.1)
    k.add_argument("--r-max", type=float, default=8.0)
    k.add_argument("--points", type=int, default=64)
    k.add_argument(
        "--route",
        choices=["time_quadrature", "bessel_closed_form"],
        default="time_quadrature",
    )
    k.add_argument("--grid-points", type=int, default=64, help="torus samples per axis")
    k.add_argument("--length", type=float, default=24.0, help="torus side length")
    k.add_argument("--out", required=True)

    a = sub.add_parser("apply", help="apply an operator to a registry function")
    a.add_argument("--space", choices=["euclid", "hyperbolic"], required=True)
    a.add_argument("--op", choices=["log", "frac"], required=True)
    a.add_argument(
        "--route",
        choices=["pointwise", "bochner", "multiplier"],
        default="pointwise",
    )
    a.add_argument("--fn", required=True, help="registry function id")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--s", type=float, default=None)
    a.add_argument(
        "--x",
        action="append",
        default=None,
        help="evaluation point, comma-separated coordinates (repeatable)",
    )
    a.add_argument("--x-dist", type=float, action="append", default=None)
    a.add_argument("--grid-points", type=int, default=512)
    a.add_argument("--length", type=float, default=24.0)
    a.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=["all", *SUITES], default="all")
    v.add_argument("--json-out", default=None)
    return parser


def _fail_args(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _cmd_kernel(args) -> int:
    if args.kind == "frac":
        if args.s is None or not (0.0 < args.s < 1.0):
            return _fail_args("--kind frac requires --s in (0, 1)")
    if args.kind == "heat" and (args.t is None or args.t <= 0):
        return _fail_args("--kind heat requires --t > 0")
    if args.r_min <= 0 or args.r_max <= args.r_min or args.points < 2:
        return _fail_args("need 0 < r-min < r-max and at least 2 points")
    r_grid = np.linspace(args.r_min, args.r_max, args.points)

    if args.space == "euclid":
        if args.kind == "heat":
            if args.n not in (1, 2, 3):
                return _fail_args("euclid heat grids cover n in 1..3")
            gauss = euclid.registry(args.n)["gaussian"]
            grid = euclid.PeriodicGridFunction.from_function(
                gauss, args.n, args.length, args.grid_points
            )
            euclid.heat_apply(grid, args.t).to_csv(args.out)
            return 0
        flat = {
            "frac": lambda r: euclid.frac_kernel_flat(args.n, args.s, r),
            "log1": lambda r: euclid.k1_flat(args.n, r),
            "log2": lambda r: euclid.k2_flat(args.n, r),
        }[args.kind]
        values = [flat(float(r)) for r in r_grid]
        reporting.write_csv(args.out, ["r", "value"], zip(r_grid, values))
        payload = {"space": "euclid", "n": args.n, "kind": args.kind}
        if args.s is not None:
            payload["s"] = args.s
        reporting.write_json(str(args.out) + ".json", payload)
        return 0

    if args.n not in (2, 3, 4, 5):
        return _fail_args("hyperbolic kernels cover n in 2..5")
    if args.kind == "frac" and args.route == "bessel_closed_form" and args.n not in (3, 5):
        return _fail_args("the Bessel closed form needs n in {3, 5}")
    try:
        table = hyperbolic.build_kernel_table(
            args.n,
            args.kind,
            r_grid,
            s=args.s,
            t=args.t,
            route=args.route,
            cfg=hyperbolic.DEFAULT_CONFIG,
        )
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    table.to_csv(args.out)
    return 0


def _cmd_apply(args) -> int:
    if args.op == "frac" and (args.s is None or not (0.0 < args.s < 1.0)):
        return _fail_args("--op frac requires --s in (0, 1)")

    rows = []
    meta = {"op": args.op, "route": args.route, "fn": args.fn, "n": args.n}
    if args.s is not None:
        meta["s"] = args.s

    try:
        if args.space == "euclid":
            if args.n not in (1, 2, 3):
                return _fail_args("euclid operators cover n in 1..3")
            reg = euclid.registry(args.n)
            if args.fn not in reg:
                return _fail_args(f"unknown function id {args.fn!r}")
            f = reg[args.fn]
            points = args.x or ["0.0"]
            xs = []
            for spec_str in points:
                coords = [float(c) for c in spec_str.split(",")]
                if len(coords) != args.n:
                    return _fail_args(f"point {spec_str!r} is not {args.n}-dimensional")
                xs.append(np.array(coords))
            grid = None
            if args.route == "multiplier":
                grid = euclid.PeriodicGridFunction.from_function(
                    f, args.n, args.length, args.grid_points
                )
                out_grid = (
                    euclid.log_multiplier(grid)
                    if args.op == "log"
                    else euclid.frac_multiplier(grid, args.s)
                )
                meta["length"] = args.length
                meta["grid_points"] = args.grid_points
            for x in xs:
                if args.route == "pointwise":
                    val = (
                        euclid.log_pointwise(f, x)
                        if args.op == "log"
                        else euclid.frac_pointwise(f, x, args.s)
                    )
                elif args.route == "bochner":
                    val = (
                        euclid.log_bochner_point(f, x)
                        if args.op == "log"
                        else euclid.frac_bochner_point(f, x, args.s)
                    )
                else:
                    val = out_grid.value_at(x)
                rows.append(list(x) + [val])
            header = [f"x{i + 1}" for i in range(args.n)] + ["value"]
        else:
            if args.n not in (2, 3):
                return _fail_args("hyperbolic pointwise operators cover n in {2, 3}")
            if args.op != "log":
                return _fail_args("hyperbolic apply supports --op log")
            if args.route == "multiplier":
                return _fail_args("no multiplier route on hyperbolic space")
            reg = hyperbolic.hyper_registry()
            if args.fn not in reg:
                return _fail_args(f"unknown function id {args.fn!r}")
            f = reg[args.fn]
            dists = args.x_dist if args.x_dist is not None else [0.0]
            for xd in dists:
                if xd < 0:
                    return _fail_args("--x-dist must be nonnegative")
                val = (
                    hyperbolic.log_pointwise_h(args.n, f, xd)
                    if args.route == "pointwise"
                    else hyperbolic.log_bochner_h(args.n, f, xd)
                )
                rows.append([xd, val])
            header = ["x_dist", "value"]
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NonFiniteIntegrandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    reporting.write_csv(args.out, header, rows)
    reporting.write_json(str(args.out) + ".json", meta)
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.suite)
    for line in report.summary_lines():
        print(line)
    print(
        f"suite {report.suite}: {sum(c.passed for c in report.checks)}"
        f"/{len(report.checks)} checks passed in {report.wall_time_ms} ms"
    )
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.command == "kernel":
        return _cmd_kernel(args)
    if args.command == "apply":
        return _cmd_apply(args)
    return _cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
