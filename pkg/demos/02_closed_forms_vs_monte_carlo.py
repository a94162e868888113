"""Validate the closed forms against the signal-level Monte-Carlo oracle.

Draws one small instance, picks a random observe/jam split with a random
feasible power allocation, and compares every closed-form quantity (the
effective noise variance of the untrusted link, the five observing-SINR
terms, and the monitoring success probability) with brute-force averages
over instantaneous channel draws.
"""
import numpy as np

from cfsurv import (ModeAssignment, SimParams, compare_closed_forms,
                    compute_large_scale, equal_power, generate_topology)

params = SimParams(M=4, K=2, N=2, seed=7)
rng = np.random.default_rng(params.seed)
topo = generate_topology(params, rng)
ls = compute_large_scale(topo, params, rng)

a = ModeAssignment(a=np.array([1, 0, 1, 0]))
theta = equal_power(a, ls, params)
theta.theta *= rng.uniform(0.2, 1.0, theta.theta.shape)  # off the equal split

print("closed form vs. 100k-draw Monte-Carlo, per untrusted link:\n")
rows = compare_closed_forms(a, theta, ls, params, n=100_000, rng=rng)
for r in rows:
    print(f"  {r['verdict']:4s} k={r['k']} {r['quantity']:12s} "
          f"closed={r['closed_form']:.6g}  oracle={r['oracle']:.6g} "
          f"(se {r['std_error']:.2g})")

n_pass = sum(r["verdict"] == "pass" for r in rows)
print(f"\n{n_pass}/{len(rows)} checks passed")
