"""Observe/jam mode assignment: greedy search and the random baseline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import LargeScale, SimParams
from .errors import GammaZero
from .sinr import ModeAssignment, PowerAllocation, success_probability_all

DEFAULT_E_MIN = 1e-4


@dataclass
class GreedyTrace:
    """Record of one greedy run: the accepted moves and their objectives."""

    initial_objective: float
    iterations: list = field(default_factory=list)  # [(moved MN index, objective), ...]
    final_assignment: ModeAssignment | None = None

    def to_json_dict(self) -> dict:
        return {
            "initial_objective": self.initial_objective,
            "iterations": [[int(m), float(p)] for m, p in self.iterations],
            "final_assignment": self.final_assignment.to_json_dict(),
        }


def equal_power(a: ModeAssignment, ls: LargeScale, params: SimParams) -> PowerAllocation:
    """Equal power allocation: every jamming MN meets its power constraint
    with equality, splitting it evenly across the K per-link terms, so
    theta[m, k] = 1 / (N * K * gamma_J[m, k]). Observing MNs get zero."""
    theta = np.zeros((params.M, params.K))
    jam = a.jamming
    if jam.size and params.K > 0:
        g = ls.gamma_J[jam, :]
        if np.any(g <= 0):
            raise GammaZero("jamming MN has a zero estimate-quality coefficient")
        theta[jam, :] = 1.0 / (params.N * params.K * g)
    return PowerAllocation(theta)


def min_success_for(a: ModeAssignment, ls: LargeScale, params: SimParams,
                    power_rule) -> float:
    theta = power_rule(a, ls, params)
    return float(success_probability_all(a, theta, ls, params).min())


def greedy_assign(ls: LargeScale, params: SimParams,
                  e_min: float = DEFAULT_E_MIN,
                  power_rule=equal_power) -> GreedyTrace:
    """Greedy mode assignment under a fixed power rule.

    Starts all-observing. Each iteration tries moving every observing MN
    to jamming (power recomputed by power_rule), takes the best candidate
    (ties: lowest MN index), and accepts the move only while the objective
    improvement clears e_min; the final rejected probe is not applied.
    """
    if e_min <= 0:
        raise ValueError("e_min must be positive")

    a = np.zeros(params.M)
    current = min_success_for(ModeAssignment(a.copy()), ls, params, power_rule)
    trace = GreedyTrace(initial_objective=current)

    while True:
        observing = np.flatnonzero(a == 0)
        if observing.size == 0:
            break
        best_m, best_val = -1, -np.inf
        for m in observing:
            cand = a.copy()
            cand[m] = 1.0
            val = min_success_for(ModeAssignment(cand), ls, params, power_rule)
            if val > best_val:
                best_m, best_val = m, val
        # signed improvement: a candidate that makes things worse never gets
        # applied, so the accepted-move sequence is strictly increasing
        if best_val - current < e_min:
            break
        a[best_m] = 1.0
        current = best_val
        trace.iterations.append((int(best_m), current))

    trace.final_assignment = ModeAssignment(a)
    return trace


def random_assign(M: int, rng: np.random.Generator,
                  p_jam: float = 0.5) -> ModeAssignment:
    """i.i.d. Bernoulli(p_jam) mode vector."""
    if not 0.0 <= p_jam <= 1.0:
        raise ValueError("p_jam must lie in [0, 1]")
    return ModeAssignment((rng.random(M) < p_jam).astype(float))
