"""Small end-to-end sweep: schemes over M, persisted to CSV, then plotted.

Runs {greedy, random} x {optimized, equal} power on shared per-trial
topologies, so the scheme comparison is paired, and renders the
comparison curve with the companion plotting package (installed
separately from plots/).
"""
from pathlib import Path

from cfsurv import SimParams
from cfsurv.harness import ExperimentConfig, run_experiment

out_dir = Path("demo_sweep")
cfg = ExperimentConfig(
    sweep_var="M",
    sweep_values=[8, 12, 16],
    trials=10,
    base_params=SimParams(M=8, K=4, N=2),
    schemes=("cf-greedy-ppa", "cf-greedy-epa", "cf-random-ppa"),
    seed=2,
    out_dir=str(out_dir),
)
rows = run_experiment(cfg)
print(f"wrote {len(rows)} rows to {out_dir}/results.csv")

for scheme in cfg.schemes:
    means = {}
    for r in rows:
        if r.scheme == scheme and not r.error:
            means.setdefault(r.sweep_value, []).append(r.min_success_prob)
    line = ", ".join(f"M={v}: {sum(p)/len(p):.3f}"
                     for v, p in sorted(means.items()))
    print(f"  {scheme:15s} {line}")

try:
    from cfplots.render import PlotSpec, render

    render(PlotSpec(input_csv=str(out_dir / "results.csv"), axis="M",
                    output=str(out_dir / "fig1.svg")))
    print(f"figure written to {out_dir}/fig1.svg")
except ImportError:
    print("plotting package not installed; run "
          "`pip install -e plots/ --no-build-isolation` and rerun, or use "
          f"`plot --in {out_dir}/results.csv --axis M --out fig1.svg`")
