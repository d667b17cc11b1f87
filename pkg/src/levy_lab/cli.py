"""Command-line front end.

Exit codes: 0 success, 1 a validation report failed, 2 bad arguments (including
parameters outside their domain), 3 numerical or sampling errors at run time.
Errors are written to stderr as a single JSON line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import cts, stable_density, stable_sampler, trajectory, validation
from .errors import LevyLabError, OutOfDomain
from .params import (CtsTriplet, StableLevyTriplet, StableParams, levy_to_stable,
                     stable_to_levy)
from .rng import DEFAULT_SEED, RngStream


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else repr(v)


def write_table(header, rows, out, fmt):
    """CSV with a header row (shortest round-trip float repr) or JSON lines."""
    lines = []
    if fmt == "csv":
        lines.append(",".join(header))
        lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    else:
        lines.extend(json.dumps(dict(zip(header, (_json_value(v) for v in row))))
                     for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return len(rows)


def _seed(value):
    seed = int(value)
    if not 0 <= seed < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def _positive_int(value):
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _float_list(value):
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser():
    parser = _Parser(prog="levy-lab", description="Stable and tempered stable sampling, "
                     "trajectories and densities.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, random=True):
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if random:
            p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)

    def stable_args(p):
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--sigma", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=0.0)
        p.add_argument("--location", type=float, default=0.0, help="stable location delta")

    def cts_args(p, time_flag=True):
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--p", type=float, required=True)
        p.add_argument("--a", type=float, default=0.0, help="positive-side tempering A")
        p.add_argument("--q", type=float, default=0.0)
        p.add_argument("--b-temper", type=float, default=0.0, help="negative-side tempering B")
        if time_flag:
            p.add_argument("--delta", type=float, required=True, help="time step")

    p = sub.add_parser("sample-stable", help="draws from S_alpha(sigma, beta, location)")
    stable_args(p)
    p.add_argument("--n", type=_positive_int, required=True)
    common(p)

    p = sub.add_parser("sample-cts", help="CTS increments over one time step")
    cts_args(p)
    p.add_argument("--c", type=float, default=0.0, help="truncation constant (alpha > 1)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--max-rejections", type=int, default=10**8)
    common(p)

    p = sub.add_parser("trajectory", help="process skeleton on a uniform grid")
    p.add_argument("--process", choices=("stable", "cts"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0, help="drift of the stable triplet")
    p.add_argument("--a", type=float, default=0.0, help="positive-side tempering A (cts)")
    p.add_argument("--b-temper", type=float, default=0.0, help="negative-side tempering B (cts)")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--max-rejections", type=int, default=10**8)
    common(p)

    p = sub.add_parser("density", help="tabulate a density on a grid")
    p.add_argument("--dist", choices=("stable", "cts"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--location", type=float, default=0.0)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--q", type=float, default=0.0)
    p.add_argument("--b-temper", type=float, default=0.0)
    p.add_argument("--time", type=float, default=1.0)
    p.add_argument("--method", choices=("fourier", "stable-link"), default="fourier",
                   help="cts only; stable-link needs q = 0")
    p.add_argument("--x-min", type=float, required=True)
    p.add_argument("--x-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    common(p, random=False)

    p = sub.add_parser("convert", help="Levy triplet <-> stable parameters")
    p.add_argument("--to", choices=("stable", "levy"), default="stable")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--q", type=float, default=None)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--location", type=float, default=0.0)
    common(p, random=False)

    p = sub.add_parser("explore-c", help="acceptance rate and accuracy over a grid of c")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--c-grid", type=_float_list, required=True, help="comma separated")
    p.add_argument("--n-mc", type=int, default=10**5)
    p.add_argument("--n-ks", type=int, default=10**4)
    common(p)

    p = sub.add_parser("validate", help="goodness-of-fit suites, one JSON report per line")
    p.add_argument("--n", type=int, default=10**4, help="sample size per check")
    p.add_argument("--out", default=None)
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    return parser


# --------------------------------------------------------------------------
# argument -> model objects (domain errors here are argument errors, exit 2)

def _prepare(args):
    cmd = args.command
    if cmd == "sample-stable":
        return {"params": StableParams(args.alpha, args.sigma, args.beta, args.location)}
    if cmd == "sample-cts":
        t = CtsTriplet(args.alpha, args.p, args.a, args.q, args.b_temper)
        cts._check_sampler_alpha(t.alpha)
        return {"triplet": t,
                "cfg": cts.CtsIncrementConfig(args.delta, args.c, args.max_rejections)}
    if cmd == "trajectory":
        grid = trajectory.SamplingGrid(args.delta, args.n)
        if args.process == "stable":
            return {"grid": grid, "triplet": StableLevyTriplet(args.alpha, args.p, args.q, args.b)}
        t = CtsTriplet(args.alpha, args.p, args.a, args.q, args.b_temper)
        cts._check_sampler_alpha(t.alpha)
        cts.CtsIncrementConfig(args.delta, args.c, args.max_rejections)
        return {"grid": grid, "triplet": t}
    if cmd == "density":
        if args.points < 1 or not args.x_min <= args.x_max:
            raise OutOfDomain("points", "need points >= 1 and x-min <= x-max")
        if args.dist == "stable":
            p = StableParams(args.alpha, args.sigma, args.beta, args.location)
            if p.sigma <= 0.0:
                raise OutOfDomain("sigma", "density needs sigma > 0")
            return {"params": p}
        t = CtsTriplet(args.alpha, args.p, args.a, args.q, args.b_temper)
        if not args.time > 0.0:
            raise OutOfDomain("time", "time must be > 0")
        if args.method == "stable-link" and t.Q > 0.0:
            raise OutOfDomain("q", "the stable-link density is one-sided (q = 0)")
        return {"triplet": t}
    if cmd == "convert":
        if args.to == "stable":
            if args.p is None or args.q is None:
                raise OutOfDomain("p", "--p and --q are required")
            return {"triplet": StableLevyTriplet(args.alpha, args.p, args.q, args.b)}
        if args.sigma is None:
            raise OutOfDomain("sigma", "--sigma is required")
        p = StableParams(args.alpha, args.sigma, args.beta, args.location)
        if p.alpha >= 2.0 or p.sigma <= 0.0:
            raise OutOfDomain("alpha", "a Levy triplet needs alpha < 2 and sigma > 0")
        return {"params": p}
    if cmd == "explore-c":
        if not 1.0 < args.alpha < 2.0:
            raise OutOfDomain("alpha", "explore-c needs alpha in (1, 2)")
        CtsTriplet(args.alpha, args.p, args.a)
        if not args.delta > 0.0:
            raise OutOfDomain("delta", "time step must be > 0")
        if not args.c_grid or min(args.c_grid) < 0.0:
            raise OutOfDomain("c_grid", "need a nonempty grid of c >= 0")
        if args.n_mc < 1000 or args.n_ks < 1:
            raise OutOfDomain("n_mc", "need n-mc >= 1000 and n-ks >= 1")
        return {}
    if cmd == "validate":
        if args.n < 100:
            raise OutOfDomain("n", "validate needs n >= 100")
        return {}
    raise UsageError(f"unknown command {cmd}")


# --------------------------------------------------------------------------
# commands

def _cmd_sample_stable(args, ctx):
    x = stable_sampler.sample(ctx["params"], RngStream(args.seed), size=args.n)
    return write_table(["x"], [(v,) for v in x], args.out, args.format), 0


def _cmd_sample_cts(args, ctx):
    x = trajectory.cts_increments(ctx["triplet"], args.delta, args.c, args.n,
                                  RngStream(args.seed), max_rejections=args.max_rejections)
    return write_table(["x"], [(v,) for v in x], args.out, args.format), 0


def _cmd_trajectory(args, ctx):
    rng = RngStream(args.seed)
    if args.process == "stable":
        path = trajectory.simulate_stable_path(ctx["triplet"], ctx["grid"], rng)
    else:
        path = trajectory.simulate_cts_path(ctx["triplet"], ctx["grid"], args.c, rng,
                                            max_rejections=args.max_rejections)
    rows = list(zip(path.times(), path.values))
    return write_table(["t", "x"], rows, args.out, args.format), 0


def _cmd_density(args, ctx):
    x = np.linspace(args.x_min, args.x_max, args.points)
    if args.dist == "stable":
        f = stable_density.pdf(ctx["params"], x)
    elif args.method == "fourier":
        f = cts.pdf_fourier(ctx["triplet"], args.time, x)
    else:
        t = ctx["triplet"]
        f = cts.pdf_skewed_via_stable(t.alpha, t.P, t.A, args.time, x)
    f = np.atleast_1d(f)
    return write_table(["x", "f"], list(zip(x, f)), args.out, args.format), 0


def _cmd_convert(args, ctx):
    if args.to == "stable":
        p = levy_to_stable(ctx["triplet"])
        return write_table(["alpha", "sigma", "beta", "delta"],
                           [(p.alpha, p.sigma, p.beta, p.delta)], args.out, args.format), 0
    t = stable_to_levy(ctx["params"])
    return write_table(["alpha", "p", "q", "b"], [(t.alpha, t.P, t.Q, t.b)],
                       args.out, args.format), 0


def _cmd_explore_c(args, ctx):
    rows = cts.explore_c(args.alpha, args.p, args.a, args.delta, args.c_grid,
                         RngStream(args.seed), n_mc=args.n_mc, n_ks=args.n_ks)
    header = ["c", "mc_acceptance_rate", "ks_vs_fourier", "mc_se"]
    rows = [(c, rate, ks, se) for c, rate, se, ks in rows]
    return write_table(header, rows, args.out, args.format), 0


def validation_suite(n, seed):
    """Goodness-of-fit reports for the samplers at sample size ``n``."""
    root = RngStream(seed)
    reports = []
    for k, (a, b) in enumerate(((0.5, 0.0), (1.0, 0.0), (1.5, 0.0), (0.7, 1.0), (1.5, -0.5))):
        p = StableParams(a, 1.0, b, 0.0)
        x = stable_sampler.sample(p, root.spawn(k), size=n)
        reports.append(validation.ks_report(x, stable_density.cdf_interpolant(p),
                                            f"cms_ks alpha={a} beta={b}"))
    for k, (a, b) in enumerate(((0.7, 0.5), (1.5, 0.0), (1.5, -1.0))):
        s = root.spawn(10 + k)
        x = stable_sampler.sample_from_skewed_pair(a, b, s.spawn(0), size=n)
        y = stable_sampler.sample_standard(a, b, s.spawn(1), size=n)
        reports.append(validation.two_sample_report(x, y, f"skewed_pair alpha={a} beta={b}"))
    for k, (a, d) in enumerate(((0.5, 0.01), (1.5, 1.0))):
        t = StableLevyTriplet(a, 0.5, 0.5, 0.0)
        s = root.spawn(20 + k)
        inc = trajectory.stable_increments(t, d, n, s.spawn(0))
        p = levy_to_stable(t)
        marg = StableParams(a, d ** (1.0 / a) * p.sigma, p.beta, d * p.delta)
        direct = stable_sampler.sample(marg, s.spawn(1), size=n)
        reports.append(validation.two_sample_report(inc, direct, f"route alpha={a} delta={d}"))
    cfg = cts.CtsIncrementConfig(0.1)
    y = cts.sample_y_plus(0.5, 1.0, 1.0, cfg, root.spawn(30), size=n)
    reports.append(validation.ks_report(y, cts.cdf_skewed_via_stable(0.5, 1.0, 1.0, 0.1),
                                        "cts_fv_exact alpha=0.5 delta=0.1"))
    return reports


def _cmd_validate(args, ctx):
    reports = validation_suite(args.n, args.seed)
    lines = "".join(json.dumps({k: _json_value(v) if k != "name" else v
                                for k, v in r.as_dict().items()}) + "\n" for r in reports)
    if args.out is None or args.out == "-":
        sys.stdout.write(lines)
    else:
        with open(args.out, "w") as fh:
            fh.write(lines)
    failed = sum(not r.passed for r in reports)
    return len(reports), 1 if failed else 0


COMMANDS = {
    "sample-stable": _cmd_sample_stable,
    "sample-cts": _cmd_sample_cts,
    "trajectory": _cmd_trajectory,
    "density": _cmd_density,
    "convert": _cmd_convert,
    "explore-c": _cmd_explore_c,
    "validate": _cmd_validate,
}


def _fail(kind, message, field=None, code=2):
    record = {"error": kind, "message": str(message)}
    if field is not None:
        record["field"] = field
    sys.stderr.write(json.dumps(record) + "\n")
    return code


def run(argv=None):
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("UsageError", exc)
    try:
        ctx = _prepare(args)
    except OutOfDomain as exc:
        return _fail(type(exc).__name__, exc, exc.field, code=2)
    try:
        count, code = COMMANDS[args.command](args, ctx)
    except LevyLabError as exc:
        return _fail(type(exc).__name__, exc, getattr(exc, "field", None), code=3)
    except OSError as exc:
        return _fail("OSError", exc, code=3)
    if args.out not in (None, "-"):
        print(f"{args.command}: wrote {count} records to {args.out}")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
