"""Max-min jamming power control by bisection over feasibility programs.

Fixes a greedy mode assignment, then searches the highest target level
whose linearized feasibility system still admits a power allocation. A
single-jammer cross-check against a dense 1-D grid shows the bisection
landing on the true optimum where the linearization is exact.
"""
import numpy as np

from cfsurv import (ModeAssignment, PowerAllocation, SimParams,
                    bisection_power_control, compute_large_scale, equal_power,
                    generate_topology, greedy_assign, objective_value,
                    success_probability_all)

params = SimParams(M=30, K=10, N=2, seed=5)
rng = np.random.default_rng(params.seed)
topo = generate_topology(params, rng)
ls = compute_large_scale(topo, params, rng)

a = greedy_assign(ls, params).final_assignment
epa = equal_power(a, ls, params)
res = bisection_power_control(a, ls, params)

print(f"assignment: {a.observing.size} observing / {a.jamming.size} jamming")
print(f"bisection: {res.doublings} doublings, {res.iterations} halvings, "
      f"bracket ({res.bracket[0]:.4g}, {res.bracket[1]:.4g})")
print(f"min success probability: equal split "
      f"{success_probability_all(a, epa, ls, params).min():.4f}, "
      f"optimized {success_probability_all(a, res.theta_opt, ls, params).min():.4f}")
print("(the optimizer never returns anything below the equal split)")

# single-jammer instance: the linearized system is exact, so the
# bisection must match a brute-force grid over the one free coefficient
params1 = SimParams(M=3, K=1, N=2, seed=9)
rng = np.random.default_rng(params1.seed)
ls1 = compute_large_scale(generate_topology(params1, rng), params1, rng)
a1 = ModeAssignment(a=np.array([1, 0, 0]))
res1 = bisection_power_control(a1, ls1, params1, eps=1e-4)

m = a1.jamming[0]
cap = 1.0 / (params1.N * ls1.gamma_J[m, 0])
best = max(
    objective_value(a1, PowerAllocation(
        theta=np.array([[t], [0.0], [0.0]])), ls1, params1)
    for t in np.linspace(0.0, cap, 10_000))
got = objective_value(a1, res1.theta_opt, ls1, params1)
print(f"\nsingle-jammer check: grid optimum {best:.6g}, "
      f"bisection {got:.6g} (gap {abs(best - got) / best:.2e})")
