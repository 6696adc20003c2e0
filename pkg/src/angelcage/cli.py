"""Command-line entry point.

Every command writes a manifest comment first (``# angelcage-manifest {...}``
followed by ``# rerun: ...``), then its CSV payload.  Exit codes: 0 success,
1 a reproduced table cell failed, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import shlex
import sys
from datetime import datetime, timezone
from importlib import metadata

import numpy as np

from angelcage import analytic, exact_dist, lattice, montecarlo, plotting, tables

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
MANIFEST_TAG = "# angelcage-manifest "


class UsageError(Exception):
    pass


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value <= montecarlo.MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else str(x)
    return str(x)


# --- manifest ---------------------------------------------------------------


def manifest_lines(args) -> list[str]:
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("command", "func", "output") and v is not None and v is not False
    }
    record = {
        "command": args.command,
        "params": params,
        "seed": getattr(args, "seed", None),
        "version": _version(),
        "started": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    argv = ["angelcage", args.command]
    for key, value in params.items():
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        else:
            argv += [flag, str(value)]
    return [MANIFEST_TAG + json.dumps(record), "# rerun: " + shlex.join(argv)]


def read_manifest(text: str) -> dict | None:
    for line in text.splitlines():
        if line.startswith(MANIFEST_TAG):
            return json.loads(line[len(MANIFEST_TAG):])
    return None


def _emit(args, header, rows, comments=()) -> str:
    buf = io.StringIO()
    for line in manifest_lines(args):
        buf.write(line + "\n")
    for line in comments:
        buf.write("# " + line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


# --- commands ---------------------------------------------------------------


def cmd_exact_pmf(args):
    if args.within is not None:
        p = exact_dist.cdf_within(args.power, args.turns, args.within)
        return _emit(
            args,
            ["power", "turns", "within", "exact", "value"],
            [[args.power, args.turns, args.within, f"{p.numerator}/{p.denominator}", float(p)]],
        )
    pmf = exact_dist.pmf_exact(args.power, args.turns)
    rows = [[j, pmf.count(j), float(pmf.mass(j))] for j in pmf.support]
    return _emit(args, ["displacement", "count", "probability"], rows)


def cmd_count(args):
    if args.method == "exact":
        value = lattice.count_ball_exact(args.dim, args.radius)
    elif args.method == "hcv":
        if args.dim != 2:
            raise UsageError("--method hcv counts planar points only (--dim 2)")
        value = lattice.count_disk_hcv(args.radius)
    else:
        value = lattice.ball_volume(args.dim, args.radius)
    return _emit(args, None, [[value]])


def cmd_shell(args):
    return _emit(args, None, [[lattice.shell_turns(args.dim, args.power, args.inner_k)]])


def cmd_threshold(args):
    solver = analytic.threshold_k_1d if args.dim == 1 else analytic.threshold_k_2d
    k = solver(args.power, args.eps)
    return _emit(args, ["dim", "power", "eps", "value"], [[args.dim, args.power, args.eps, k]])


def cmd_cage_prob(args):
    plan = analytic.make_plan(args.dim, args.power, args.inner_k)
    if args.method == "oracle":
        est = analytic.radial_quadrature_oracle(plan.dim, plan.sigma_sq, plan.inner_k)
    else:
        est = analytic.cage_prob(plan.dim, plan.power, plan.inner_k)
    return _emit(
        args,
        ["dim", "power", "k", "N", "sigma_sq", "method", "value"],
        [[plan.dim, plan.power, plan.inner_k, plan.turns, plan.sigma_sq, est.method, est.value]],
    )


def cmd_bounds3d(args):
    b = analytic.bounds_3d(args.power)
    return _emit(args, ["power", "lower", "upper"], [[args.power, b.lower, b.upper]])


def _config(args, trials=None):
    plan = analytic.make_plan(args.dim, args.power, args.inner_k)
    return montecarlo.SimulationConfig(
        plan,
        trials if trials is not None else args.trials,
        args.seed,
        sampler=getattr(args, "sampler", "walk"),
        strict_boundary=getattr(args, "strict_boundary", False),
    )


def cmd_simulate(args):
    config = _config(args)
    report = montecarlo.run_simulation(config, args.threads)
    plan = config.plan
    row = [
        plan.dim, plan.power, plan.inner_k, plan.turns, report.trials, args.seed,
        report.caged_rate, report.never_left_rate, report.ci_halfwidth_95,
    ]
    header = ["dim", "power", "k", "N", "trials", "seed", "caged_rate",
              "never_left_rate", "ci95"]
    # wall time is kept out of the payload so reruns compare bit-exactly
    return _emit(args, header, [row], [f"elapsed_s: {report.elapsed:.3f}"])


def _trace(args):
    config = _config(args, trials=args.trial + 1)
    return config, montecarlo.trace_walk(config, args.trial)


def cmd_trace(args):
    config, trace = _trace(args)
    n = config.plan.dim
    header = ["step"] + [f"x{i + 1}" for i in range(n)]
    rows = ([t, *map(int, p)] for t, p in enumerate(trace.positions))
    if args.figure:
        fig = plotting.footprint_figure(trace.positions, config.plan.inner_k,
                                        title=f"n={n}, c={config.plan.power}, k={config.plan.inner_k}")
        plotting.save_figure(fig, args.figure)
    return _emit(args, header, rows)


def cmd_distance_curve(args):
    curve = montecarlo.avg_distance_curve(
        args.dim, args.power, args.steps, args.trials, args.seed, args.threads
    )
    if args.figure:
        fig = plotting.curve_figure(np.arange(len(curve)), curve, label=f"n={args.dim}")
        plotting.save_figure(fig, args.figure)
    return _emit(args, ["step", "mean_distance"], enumerate(curve.tolist()))


def cmd_sweep(args):
    rows = montecarlo.sweep_k(
        args.dim, args.power, args.k_min, args.k_max, args.trials, args.seed,
        args.threads, sampler=args.sampler, strict_boundary=args.strict_boundary,
    )
    if args.figure:
        nl = [np.nan if r.never_left_rate is None else r.never_left_rate for r in rows]
        fig = plotting.sweep_figure([r.k for r in rows], [r.caged_rate for r in rows], nl,
                                    title=f"n={args.dim}, c={args.power}")
        plotting.save_figure(fig, args.figure)
    return _emit(
        args,
        ["k", "N", "caged_rate", "never_left_rate"],
        [[r.k, r.turns, r.caged_rate, r.never_left_rate] for r in rows],
    )


def cmd_reproduce(args):
    results = tables.reproduce(
        args.table, args.trials, args.seed,
        threads=args.threads, sampler=args.sampler, strict_boundary=args.strict_boundary,
    )
    comments = []
    if tables.scaled_mode(args.trials):
        comments.append(
            f"scaled-down mode: {args.trials} < {tables.FULL_TRIALS} trials; tolerance = "
            f"max(published, {tables.SCALED_SE_MULT} binomial standard errors"
            f", {tables.SCALED_TABLE1_TOL} for planar cells)"
        )
    passed = sum(r.passed for r in results)
    comments.append(f"summary: {passed}/{len(results)} cells passed")
    header = ["table", "dim", "power", "k", "N", "trials", "measured", "expected",
              "tolerance", "check", "in_bounds", "pass"]
    rows = [
        [args.table, r.cell.dim, r.cell.power, r.cell.inner_k, r.report.config.plan.turns,
         r.report.trials, r.measured, r.cell.expected, r.tolerance, r.cell.kind,
         r.bounds_ok, r.passed]
        for r in results
    ]
    text = _emit(args, header, rows, comments)
    return text, (EXIT_OK if passed == len(results) else EXIT_FAIL)


def _read_csv(path):
    with open(path, newline="") as fh:
        text = fh.read()
    body = [line for line in text.splitlines() if not line.startswith("#")]
    rows = list(csv.reader(body))
    if not rows:
        raise UsageError(f"{path}: no CSV payload")
    return read_manifest(text), rows[0], rows[1:]


def cmd_plot(args):
    if not args.output:
        raise UsageError("plot needs --output PATH.svg")
    if args.kind == "footprint":
        inner_k = args.inner_k
        if args.input:
            manifest, header, rows = _read_csv(args.input)
            positions = np.array([[int(v) for v in row[1:]] for row in rows], dtype=np.int64)
            if inner_k is None and manifest:
                inner_k = manifest["params"].get("inner_k")
        else:
            missing = [f for f in ("dim", "power", "inner_k") if getattr(args, f) is None]
            if missing:
                raise UsageError("footprint without --input needs --dim, --power and --inner-k")
            positions = _trace(args)[1].positions
        fig = plotting.footprint_figure(positions, inner_k)
    else:
        if not args.input:
            raise UsageError(f"--kind {args.kind} needs --input CSV")
        _, header, rows = _read_csv(args.input)
        cols = list(zip(*rows)) if rows else [[] for _ in header]
        col = dict(zip(header, cols))
        num = lambda name: np.array([float(v) if v != "" else np.nan for v in col[name]])
        if args.kind == "curve":
            fig = plotting.curve_figure(num(header[0]), num(header[1]),
                                        xlabel=header[0], ylabel=header[1])
        else:
            fig = plotting.sweep_figure(num("k"), num("caged_rate"), num("never_left_rate"))
    plotting.save_figure(fig, args.output)
    return None


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_u64, default=argparse.SUPPRESS,
                        help="64-bit master seed (default 0)")
    common.add_argument("--threads", type=_positive, default=argparse.SUPPRESS,
                        help=f"worker threads (default ${montecarlo.THREADS_ENV} or 1)")
    common.add_argument("--output", default=argparse.SUPPRESS,
                        help="write to this file instead of standard output")

    parser = argparse.ArgumentParser(
        prog="angelcage", parents=[common],
        description="Drunk angel vs. hiding devil: caging probabilities and simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    def game(p, k=True):
        p.add_argument("--dim", type=_positive, required=True)
        p.add_argument("--power", type=_positive, required=True)
        if k:
            p.add_argument("--inner-k", type=_positive, required=True)

    def mc_opts(p):
        p.add_argument("--sampler", choices=montecarlo.SAMPLERS, default="walk")
        p.add_argument("--strict-boundary", action="store_true",
                       help="count the angel as caged only strictly inside radius k")

    p = add("exact-pmf", cmd_exact_pmf, "exact 1-D displacement distribution")
    p.add_argument("--power", type=_nonneg, required=True)
    p.add_argument("--turns", type=_nonneg, required=True)
    p.add_argument("--within", type=_nonneg)

    p = add("count", cmd_count, "lattice points in a Euclidean ball")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--method", choices=("exact", "hcv", "volume"), default="exact")

    p = add("shell", cmd_shell, "turns N needed to build the cage")
    game(p)

    p = add("threshold", cmd_threshold, "inner radius reaching 1 - eps")
    p.add_argument("--dim", type=int, choices=(1, 2), required=True)
    p.add_argument("--power", type=_positive, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = add("cage-prob", cmd_cage_prob, "normal-approximation caging probability")
    game(p)
    p.add_argument("--method", choices=("series", "oracle"), default="series")

    p = add("bounds3d", cmd_bounds3d, "3-D caging probability bounds")
    p.add_argument("--power", type=_positive, required=True)

    p = add("simulate", cmd_simulate, "Monte Carlo caged / never-left rates")
    game(p)
    p.add_argument("--trials", type=_positive, required=True)
    mc_opts(p)

    p = add("trace", cmd_trace, "positions of one walk")
    game(p)
    p.add_argument("--trial", type=_nonneg, default=0)
    p.add_argument("--figure", help="also render the footprints to this SVG")

    p = add("distance-curve", cmd_distance_curve, "mean distance after each step")
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--power", type=_nonneg, required=True)
    p.add_argument("--steps", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--figure", help="also render the curve to this SVG")

    p = add("sweep", cmd_sweep, "caged and never-left rates over a range of k")
    game(p, k=False)
    p.add_argument("--k-min", type=_positive, required=True)
    p.add_argument("--k-max", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--figure", help="also render the sweep to this SVG")
    mc_opts(p)

    p = add("reproduce", cmd_reproduce, "re-measure a published table")
    p.add_argument("--table", choices=sorted(tables.TABLES), required=True)
    p.add_argument("--trials", type=_positive, default=tables.FULL_TRIALS)
    mc_opts(p)

    p = add("plot", cmd_plot, "render a trace, curve or sweep CSV as SVG")
    p.add_argument("--kind", choices=("footprint", "curve", "sweep"), required=True)
    p.add_argument("--input", help="CSV written by trace / distance-curve / sweep")
    p.add_argument("--inner-k", type=_positive, help="radius of the reference circle")
    p.add_argument("--dim", type=_positive)
    p.add_argument("--power", type=_positive)
    p.add_argument("--trial", type=_nonneg, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("seed", 0), ("threads", None), ("output", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.threads is None:
        try:
            args.threads = montecarlo.default_threads()
        except ValueError as exc:
            parser.print_usage(sys.stderr)
            print(f"angelcage: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        result = args.func(args)
    except (UsageError, ValueError, lattice.BudgetExceeded) as exc:
        parser.print_usage(sys.stderr)
        print(f"angelcage {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"angelcage {args.command}: I/O error: {exc.filename or ''}: {exc.strerror or exc}",
              file=sys.stderr)
        return EXIT_IO
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    if result is None:
        return code
    try:
        if args.output and args.command != "plot":
            with open(args.output, "w", newline="") as fh:
                fh.write(result)
        else:
            sys.stdout.write(result)
    except OSError as exc:
        print(f"angelcage: I/O error: {args.output}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
