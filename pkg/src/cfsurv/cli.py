"""Command-line front end.

Subcommands:
  sweep     run a configured experiment sweep (results.csv / results.json)
  validate  closed-form vs. Monte-Carlo oracle suite; nonzero exit on mismatch
  solve     one seeded instance: greedy assignment + max-min power control
  demo      tiny seeded sweep, handy for smoke tests and plotting
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import harness, oracle
from .channel import SimParams, compute_large_scale, generate_topology
from .modes import greedy_assign
from .powerctl import bisection_power_control
from .sinr import monitoring_report

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2


def _add_common(p):
    p.add_argument("--seed", type=int, default=None, help="master RNG seed")
    p.add_argument("--out", type=str, default=None, help="output directory")


def cmd_sweep(args) -> int:
    try:
        cfg = harness.load_config(args.config, out_dir=args.out)
    except Exception as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        cfg.seed = args.seed
    if args.trials is not None:
        cfg.trials = args.trials
    if args.threads is not None:
        cfg.threads = args.threads
    if cfg.out_dir is None:
        cfg.out_dir = "results"
    rows = harness.run_experiment(cfg)
    failed = sum(1 for r in rows if r.error)
    print(f"wrote {len(rows)} rows to {cfg.out_dir} ({failed} failed trials)")
    return EXIT_OK


def cmd_validate(args) -> int:
    seed = args.seed if args.seed is not None else 0
    master = np.random.SeedSequence(seed)
    all_rows = []
    for inst, ss in enumerate(master.spawn(args.instances)):
        rng = np.random.default_rng(ss)
        params = SimParams(M=4, K=2, N=2, seed=seed)
        topo = generate_topology(params, rng)
        ls = compute_large_scale(topo, params, rng)
        a, theta = _random_operating_point(params, ls, rng)
        rows = oracle.compare_closed_forms(a, theta, ls, params,
                                           n=args.draws, rng=rng)
        for r in rows:
            r["instance"] = inst
        all_rows.extend(rows)

    fm = oracle.fourth_moment_check(gamma=1.0, N=2, n=args.draws,
                                    rng=np.random.default_rng(master.spawn(1)[0]))
    expected = 2 * 3 * 1.0  # N(N+1) gamma^2
    all_rows.append({
        "quantity": "fourth_moment", "k": None, "instance": None,
        "closed_form": expected, "oracle": fm.value,
        "std_error": fm.std_error, "n_samples": fm.n_samples,
        "error": abs(fm.value - expected),
        "bound": max(0.02 * expected, 3 * fm.std_error),
        "verdict": "pass" if abs(fm.value - expected) <= max(0.02 * expected, 3 * fm.std_error) else "fail",
    })

    n_fail = sum(1 for r in all_rows if r["verdict"] == "fail")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "validation.json", "w") as f:
            json.dump(all_rows, f, indent=1, sort_keys=True)
            f.write("\n")
    for r in all_rows:
        print(f"{r['verdict']:4s} {r['quantity']:12s} k={r['k']} "
              f"closed={r['closed_form']:.6g} oracle={r['oracle']:.6g} "
              f"se={r['std_error']:.2g}")
    print(f"{len(all_rows) - n_fail}/{len(all_rows)} checks passed")
    return EXIT_OK if n_fail == 0 else EXIT_VALIDATION


def _random_operating_point(params, ls, rng):
    from .modes import equal_power, random_assign
    from .sinr import ModeAssignment

    a = random_assign(params.M, rng, p_jam=0.5)
    if a.jamming.size == 0:  # force at least one jammer so theta matters
        v = a.a.copy()
        v[int(rng.integers(params.M))] = 1.0
        a = ModeAssignment(v)
    theta = equal_power(a, ls, params)
    # perturb away from the equal split so no term is accidentally tied
    scale = rng.uniform(0.2, 1.0, size=theta.theta.shape)
    theta.theta *= scale
    return a, theta


def cmd_solve(args) -> int:
    seed = args.seed if args.seed is not None else 0
    params = SimParams(M=args.M, K=args.K, N=args.N, seed=seed)
    ss = np.random.SeedSequence(seed)
    ss_topo, ss_ls = ss.spawn(2)
    topo = generate_topology(params, np.random.default_rng(ss_topo))
    ls = compute_large_scale(topo, params, np.random.default_rng(ss_ls))

    trace = greedy_assign(ls, params)
    a = trace.final_assignment
    if a.jamming.size > 0:
        bis = bisection_power_control(a, ls, params)
        theta = bis.theta_opt
        bis_dict = bis.to_json_dict()
    else:
        from .modes import equal_power
        theta = equal_power(a, ls, params)
        bis_dict = None

    report = monitoring_report(a, theta, ls, params)
    out = {
        "seed": seed,
        "M": params.M, "K": params.K, "N": params.N,
        "greedy": trace.to_json_dict(),
        "bisection": bis_dict,
        "report": report.to_json_dict(),
    }
    print(json.dumps(out, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_demo(args) -> int:
    seed = args.seed if args.seed is not None else 0
    out_dir = args.out or "demo_out"
    cfg = harness.ExperimentConfig(
        sweep_var="M",
        sweep_values=[6, 8],
        trials=args.trials if args.trials is not None else 3,
        base_params=SimParams(M=6, K=3, seed=seed),
        schemes=("cf-greedy-ppa", "cf-greedy-epa"),
        seed=seed,
        out_dir=out_dir,
        threads=args.threads if args.threads is not None else 1,
        write_traces=True,
    )
    rows = harness.run_experiment(cfg)
    print(f"demo wrote {len(rows)} rows to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfsurv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a configured experiment sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="closed-form vs. oracle suite")
    p.add_argument("--instances", type=int, default=3)
    p.add_argument("--draws", type=int, default=oracle.DEFAULT_DRAWS)
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="single-instance greedy + max-min power")
    p.add_argument("--M", type=int, default=10)
    p.add_argument("--K", type=int, default=4)
    p.add_argument("--N", type=int, default=2)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("demo", help="tiny seeded sweep")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
