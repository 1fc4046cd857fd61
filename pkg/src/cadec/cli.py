"""Command-line entry point: ``cadec <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .ca import LazyRule, brute_force_longest_period
from .dec import build_dec, find_cycles, longest_period, mark_cemetery
from .errors import ParameterError
from .harness import ExperimentSpec, KINDS, rule_seed, run_experiment
from .necklace import build_vertex_set
from .stochastic import density_c_limit, density_hitting_time


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _report(st) -> None:
    summary = st.to_json()
    keep = ("kind", "points", "ks_statistic", "ks_pvalue", "reference", "slope",
            "intercept", "r_squared", "tests", "notes")
    print(json.dumps({k: summary[k] for k in keep}, sort_keys=True))


def cmd_dec_stats(a):
    spec = ExperimentSpec("cemetery_histogram", [a.n], a.sigma, a.r, a.samples, a.seed,
                          workers=a.workers, output_dir=a.out, bins=a.bins)
    _report(run_experiment(spec))


def cmd_longest_period(a):
    rule = LazyRule(a.n, a.r, a.seed)
    g = build_dec(rule, a.sigma)
    C, N = mark_cemetery(g)
    cycles = find_cycles(g)
    table = [{"length": c.length, "net_shift": c.net_shift, "expanding": c.expanding,
              "period": c.period,
              "representative": str(g.vs.class_id(c.vertices[0]).canonical)}
             for c in cycles]
    print(json.dumps({"n": a.n, "sigma": a.sigma, "r": a.r, "seed": a.seed,
                      "X": longest_period(g, cycles), "C": C, "N": N, "cycles": table}))


def cmd_scaling(a):
    if a.n_step < 1 or a.n_min < 1 or a.n_max < a.n_min:
        raise ParameterError("need 1 <= n-min <= n-max and n-step >= 1", "n-step")
    ns = list(range(a.n_min, a.n_max + 1, a.n_step))
    spec = ExperimentSpec("longest_period_scaling", ns, a.sigma, a.r, a.samples, a.seed,
                          workers=a.workers, output_dir=a.out)
    _report(run_experiment(spec))


def cmd_algo1(a):
    r = a.r if a.r is not None else a.sigma
    spec = ExperimentSpec("algo1_vs_dec", [a.n], a.sigma, r, a.samples, a.seed,
                          workers=a.workers, output_dir=a.out, bins=a.bins)
    _report(run_experiment(spec))


def cmd_run(a):
    spec = ExperimentSpec(a.kind, a.n, a.sigma, a.r, a.samples, a.seed, workers=a.workers,
                          output_dir=a.out, bins=a.bins, dt=a.dt)
    _report(run_experiment(spec))


def cmd_theory_density(a):
    if a.grid < 1:
        raise ParameterError("grid must be >= 1", "grid")
    xs = np.arange(1, a.grid + 1) / (a.grid + 1)
    if a.kind == "hitting":
        if a.a is None:
            raise ParameterError("--a is required for --kind hitting", "a")
        ys = density_hitting_time(a.a, xs)
    else:
        if a.sigma is None:
            raise ParameterError("--sigma is required for --kind c-limit", "sigma")
        ys = density_c_limit(a.sigma, xs)
    out = sys.stdout
    out.write("x,density\n")
    for x, y in zip(xs, np.atleast_1d(ys)):
        out.write(f"{float(x)!r},{float(y)!r}\n")


def cmd_oracle_compare_x(a):
    ok = True
    for n in range(1, a.n_max + 1):
        build_vertex_set(n, a.sigma)
        bad = 0
        for i in range(a.rules):
            rule = LazyRule(n, a.r, rule_seed(a.seed, n, i))
            if longest_period(build_dec(rule, a.sigma)) != brute_force_longest_period(rule, a.sigma):
                bad += 1
        ok &= bad == 0
        print(f"n={n} sigma={a.sigma} r={a.r} rules={a.rules} mismatches={bad} "
              f"{'PASS' if bad == 0 else 'FAIL'}")
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cadec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("dec-stats", help="histogram of the non-cemetery proportion C/N")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sigma", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--seed", type=_u64, required=True)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--bins", type=int, default=50)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_dec_stats)

    q = sub.add_parser("longest-period", help="X and cycle table for a single rule")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sigma", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--seed", type=_u64, required=True)
    q.set_defaults(func=cmd_longest_period)

    q = sub.add_parser("scaling", help="mean longest period over a range of n")
    q.add_argument("--sigma", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--n-min", type=int, required=True)
    q.add_argument("--n-max", type=int, required=True)
    q.add_argument("--n-step", type=int, required=True)
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--seed", type=_u64, required=True)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_scaling)

    q = sub.add_parser("algo1", help="sequential-construction C/N against full DECs")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sigma", type=int, required=True)
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--seed", type=_u64, required=True)
    q.add_argument("--r", type=int, default=None, help="rule width for the DEC side (default sigma)")
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--bins", type=int, default=50)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_algo1)

    q = sub.add_parser("run", help="any experiment kind")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--n", type=int, nargs="+", required=True)
    q.add_argument("--sigma", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--seed", type=_u64, required=True)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--bins", type=int, default=50)
    q.add_argument("--dt", type=float, default=1e-4)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_run)

    q = sub.add_parser("theory", help="closed-form limit laws")
    tsub = q.add_subparsers(dest="theory_command", required=True)
    t = tsub.add_parser("density", help="CSV (x, density) on an interior grid of (0, 1)")
    t.add_argument("--kind", choices=("hitting", "c-limit"), required=True)
    t.add_argument("--a", type=float)
    t.add_argument("--sigma", type=int)
    t.add_argument("--grid", type=int, required=True)
    t.set_defaults(func=cmd_theory_density)

    q = sub.add_parser("oracle", help="cross-checks against brute force")
    osub = q.add_subparsers(dest="oracle_command", required=True)
    o = osub.add_parser("compare-x", help="DEC longest period vs direct simulation")
    o.add_argument("--n-max", type=int, required=True)
    o.add_argument("--sigma", type=int, required=True)
    o.add_argument("--r", type=int, required=True)
    o.add_argument("--rules", type=int, required=True)
    o.add_argument("--seed", type=_u64, required=True)
    o.set_defaults(func=cmd_oracle_compare_x)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args) or 0
    except (ParameterError, OverflowError, OSError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc),
               "param": getattr(exc, "param", None)}
        print(json.dumps(err), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
