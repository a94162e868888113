"""Max-min jamming power control.

The quasi-linear max-min program is solved by bisection on the objective
level: each probe level turns the problem into a linear feasibility
system over the nonnegative power-control coefficients of the jamming
MNs, decided by a self-contained phase-1 simplex. The coefficient-linear
lower bound tilde_xi replaces the exact (and nonlinear) coherent jamming
term inside the feasibility rows; reporting always uses the exact forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import LargeScale, SimParams
from .errors import BracketFailure, NumericalBreakdown
from .modes import equal_power
from .sinr import (ModeAssignment, PowerAllocation, mn_interference_all,
                   mu_all, sinr_observe_all, success_probability_all, xi_all)

FEASIBILITY_TOL = 1e-9
SIMPLEX_MAX_ITER = 100_000
DEFAULT_BISECTION_EPS = 1e-3  # relative to the initial bracket width
MAX_DOUBLINGS = 60


@dataclass
class FeasibilityLP:
    """Inequality system A x <= b over x >= 0.

    Variables are the flattened power-control coefficients of the jamming
    MNs; var_index maps each column to its (MN, link) pair.
    """

    A: np.ndarray              # (rows, num_vars)
    b: np.ndarray              # (rows,)
    var_index: list            # [(m, k), ...] per column
    M: int
    K: int

    @property
    def num_vars(self) -> int:
        return self.A.shape[1]

    def theta_from_vars(self, x: np.ndarray) -> PowerAllocation:
        theta = np.zeros((self.M, self.K))
        for j, (m, k) in enumerate(self.var_index):
            theta[m, k] = max(x[j], 0.0)
        return PowerAllocation(theta)

    def dump_text(self) -> str:
        """Plain-text inequality listing, one row per line."""
        names = [f"theta[{m},{k}]" for m, k in self.var_index]
        lines = []
        for i in range(self.A.shape[0]):
            terms = " + ".join(
                f"{self.A[i, j]:.6e}*{names[j]}"
                for j in range(self.num_vars) if self.A[i, j] != 0.0
            ) or "0"
            lines.append(f"{terms} <= {self.b[i]:.6e}")
        lines.extend(f"{n} >= 0" for n in names)
        return "\n".join(lines)


@dataclass
class BisectionResult:
    theta_opt: PowerAllocation
    rho_star: float
    iterations: int
    bracket: tuple[float, float]
    doublings: int = 0

    def to_json_dict(self) -> dict:
        return {
            "theta_opt": self.theta_opt.theta.tolist(),
            "rho_star": self.rho_star,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "doublings": self.doublings,
        }


def tilde_xi_all(a: ModeAssignment, theta: PowerAllocation, ls: LargeScale,
                 params: SimParams) -> np.ndarray:
    """Linear-in-theta lower bound on the effective noise variance xi.

    Identical to xi except the coherent jamming term
    (sum_m a_m sqrt(theta) gamma)^2 is bounded below by
    sum_m a_m theta gamma^2.
    """
    K, N = params.K, params.N
    av, th = a.a, theta.theta
    cross_ut = params.rho_UT * (ls.beta_U.sum(axis=0) - np.diag(ls.beta_U))
    jam_lin = params.rho_J * N * np.einsum(
        "m,mq,mk,mq->k", av, th, ls.beta_J, ls.gamma_J)
    jam_coh = params.rho_J * N ** 2 * np.einsum(
        "m,mk,mk->k", av, th, ls.gamma_J ** 2)
    return cross_ut + jam_lin + jam_coh + np.ones(K)


def tilde_xi(k: int, a: ModeAssignment, theta: PowerAllocation,
             ls: LargeScale, params: SimParams) -> float:
    return float(tilde_xi_all(a, theta, ls, params)[k])


def objective_value(a: ModeAssignment, theta: PowerAllocation,
                    ls: LargeScale, params: SimParams) -> float:
    """Exact max-min objective: min over links of sinr_observe * xi."""
    return float((sinr_observe_all(a, theta, ls, params)
                  * xi_all(a, theta, ls, params)).min())


def feasibility_level(a: ModeAssignment, theta: PowerAllocation,
                      ls: LargeScale, params: SimParams) -> float:
    """Largest level at which theta satisfies the per-link feasibility rows:
    min over k of tilde_xi_k / (mu_k + leakage_k)."""
    den = mu_all(a, ls, params) + mn_interference_all(a, theta, ls, params)
    num = tilde_xi_all(a, theta, ls, params)
    with np.errstate(divide="ignore"):
        return float(np.min(np.where(den > 0, num / den, np.inf)))


def build_feasibility_lp(rho: float, a: ModeAssignment, ls: LargeScale,
                         params: SimParams) -> FeasibilityLP:
    """Feasibility system for a probe level rho.

    K per-link rows: mu_k + leakage(theta) - (1/rho) * tilde_xi(theta) <= 0
    with the constants of tilde_xi folded into the right-hand side, plus
    one power row per jamming MN. Coefficients are exactly the closed
    forms, unscaled.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    K, N = params.K, params.N
    jam = a.jamming
    obs = 1.0 - a.a

    var_index = [(int(m), int(k)) for m in jam for k in range(K)]
    nv = len(var_index)
    rows = np.zeros((K + jam.size, nv))
    rhs = np.zeros(K + jam.size)

    # S[k, i] = sum_m (1 - a_m) gamma_O[m, k] beta_MM[m, i]
    S = np.einsum("m,mk,mi->ki", obs, ls.gamma_O, ls.beta_MM)
    cross_ut = params.rho_UT * (ls.beta_U.sum(axis=0) - np.diag(ls.beta_U))
    mu = mu_all(a, ls, params)

    for k in range(K):
        for j, (i, ell) in enumerate(var_index):
            mi_coef = params.rho_J * N * S[k, i] * ls.gamma_J[i, ell]
            xi_coef = params.rho_J * N * ls.beta_J[i, k] * ls.gamma_J[i, ell]
            if ell == k:
                xi_coef += params.rho_J * N ** 2 * ls.gamma_J[i, k] ** 2
            rows[k, j] = mi_coef - xi_coef / rho
        rhs[k] = (cross_ut[k] + 1.0) / rho - mu[k]

    for r, m in enumerate(jam):
        for j, (i, ell) in enumerate(var_index):
            if i == m:
                rows[K + r, j] = ls.gamma_J[m, ell]
        rhs[K + r] = 1.0 / N

    return FeasibilityLP(A=rows, b=rhs, var_index=var_index,
                         M=params.M, K=params.K)


def _phase1_simplex(A: np.ndarray, b: np.ndarray, tol: float,
                    max_iter: int = SIMPLEX_MAX_ITER):
    """Phase-1 simplex with Bland's rule for A x <= b, x >= 0.

    Returns (feasible, x). Feasible iff the minimized total artificial
    mass is <= tol.
    """
    m, n = A.shape
    neg = b < 0
    n_art = int(neg.sum())

    total = n + m + n_art
    T = np.zeros((m, total))
    rhs = b.copy()
    basis = np.empty(m, dtype=int)
    art_col = n + m
    for i in range(m):
        if neg[i]:
            T[i, :n] = -A[i]
            T[i, n + i] = -1.0
            T[i, art_col] = 1.0
            rhs[i] = -b[i]
            basis[i] = art_col
            art_col += 1
        else:
            T[i, :n] = A[i]
            T[i, n + i] = 1.0
            basis[i] = n + i

    # reduced costs for min sum(artificials): z = c - sum of artificial rows
    z = np.zeros(total)
    z[n + m:] = 1.0
    obj = 0.0
    for i in range(m):
        if neg[i]:
            z -= T[i]
            obj += rhs[i]

    for _ in range(max_iter):
        enter_candidates = np.flatnonzero(z < -1e-11)
        if enter_candidates.size == 0:
            break
        j = int(enter_candidates[0])  # Bland: lowest column index

        col = T[:, j]
        pos = col > 1e-11
        if not np.any(pos):
            raise NumericalBreakdown("phase-1 column unbounded; LP is ill-posed")
        ratios = np.full(m, np.inf)
        ratios[pos] = rhs[pos] / col[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-12 * max(1.0, abs(rmin)))
        r = int(ties[np.argmin(basis[ties])])  # Bland: lowest basis index

        piv = T[r, j]
        T[r] /= piv
        rhs[r] /= piv
        for i in range(m):
            if i != r and T[i, j] != 0.0:
                f = T[i, j]
                T[i] -= f * T[r]
                rhs[i] -= f * rhs[r]
        if z[j] != 0.0:
            f = z[j]
            z -= f * T[r]
            obj += f * rhs[r]
        basis[r] = j
    else:
        raise NumericalBreakdown(
            f"phase-1 simplex exceeded {max_iter} pivots")

    # recompute the artificial mass from the final basis; the incremental
    # objective drifts when right-hand sides span many orders of magnitude
    obj = float(rhs[basis >= n + m].sum()) if n_art else 0.0
    if obj > tol:
        return False, None
    x = np.zeros(total)
    x[basis] = np.maximum(rhs, 0.0)
    return True, x[:n]


def check_feasible(lp: FeasibilityLP, tol: float = FEASIBILITY_TOL):
    """Decide feasibility of the system within tol; return a witness when
    feasible.

    Rows are equilibrated to unit max-coefficient before solving: the raw
    coefficients span many orders of magnitude after path loss.
    """
    A, b = lp.A, lp.b

    # constant rows carry no variables, so the tolerance has to be read
    # relative to the magnitude of the constants themselves
    b_scale = max(float(np.max(np.abs(b))) if b.size else 0.0, 1e-300)

    if lp.num_vars == 0:
        if np.any(b < -tol * b_scale):
            return False, None
        return True, lp.theta_from_vars(np.zeros(0))

    keep = []
    for i in range(A.shape[0]):
        if np.max(np.abs(A[i])) == 0.0:
            if b[i] < -tol * b_scale:  # constant row violated outright
                return False, None
        else:
            keep.append(i)
    if not keep:
        return True, lp.theta_from_vars(np.zeros(lp.num_vars))

    A = A[keep]
    b = b[keep]
    # equilibrate each row by its largest entry including the right-hand
    # side, so |b| <= 1; otherwise rhs values spanning many orders of
    # magnitude swamp the pivot tolerances
    row_scale = np.maximum(np.max(np.abs(A), axis=1), np.abs(b))
    A = A / row_scale[:, None]
    b = b / row_scale

    # column scaling keeps the tableau well conditioned; witnesses are
    # rescaled back, so the contract is unchanged
    col_scale = np.max(np.abs(A), axis=0)
    col_scale[col_scale == 0.0] = 1.0
    A = A / col_scale[None, :]

    feasible, x = _phase1_simplex(A, b, tol)
    if not feasible:
        return False, None
    return True, lp.theta_from_vars(x / col_scale)


def bisection_power_control(a: ModeAssignment, ls: LargeScale,
                            params: SimParams,
                            eps: float = DEFAULT_BISECTION_EPS) -> BisectionResult:
    """Max-min power control by bisection over feasibility probes.

    The bracket is anchored at the level achieved by equal power
    allocation (always feasible, with EPA itself as witness) and grown by
    doubling until infeasible. The returned coefficients are the last
    feasible witness, or EPA when the linearized witness does not beat
    EPA on the exact objective and success metrics (the linearization can
    only under-credit coherent jamming, so EPA remains a valid floor).
    """
    if params.K < 1:
        raise ValueError("need at least one untrusted pair")

    theta_epa = equal_power(a, ls, params)
    if a.jamming.size == 0 or a.observing.size == 0:
        # no decision variables (no jammers) or a zero objective for any
        # theta (no observers): the level is constant, nothing to search
        level = feasibility_level(a, theta_epa, ls, params)
        return BisectionResult(theta_opt=theta_epa, rho_star=level,
                               iterations=0, bracket=(level, level))

    level_epa = feasibility_level(a, theta_epa, ls, params)
    rho_lo = level_epa * (1.0 - 1e-9)
    ok, witness = check_feasible(build_feasibility_lp(rho_lo, a, ls, params))
    if not ok:
        raise BracketFailure(
            "equal-power anchor level is infeasible; inconsistent inputs")

    rho_hi = rho_lo
    doublings = 0
    for _ in range(MAX_DOUBLINGS):
        cand = 2.0 * rho_hi
        ok, w = check_feasible(build_feasibility_lp(cand, a, ls, params))
        doublings += 1
        if ok:
            rho_hi = cand
            rho_lo = cand
            witness = w
        else:
            rho_hi = cand
            break

    eps_abs = max(eps * (rho_hi - rho_lo), 1e-300)
    iterations = 0
    while rho_hi - rho_lo >= eps_abs:
        mid = 0.5 * (rho_lo + rho_hi)
        ok, w = check_feasible(build_feasibility_lp(mid, a, ls, params))
        if ok:
            rho_lo = mid
            witness = w
        else:
            rho_hi = mid
        iterations += 1

    theta_opt = witness

    # exact-metric floor: fall back to EPA if the linearized witness loses
    # on either the exact objective or the minimum success probability
    if (objective_value(a, theta_opt, ls, params)
            < objective_value(a, theta_epa, ls, params)
            or success_probability_all(a, theta_opt, ls, params).min()
            < success_probability_all(a, theta_epa, ls, params).min()):
        theta_opt = theta_epa

    return BisectionResult(
        theta_opt=theta_opt,
        rho_star=feasibility_level(a, theta_opt, ls, params),
        iterations=iterations,
        bracket=(rho_lo, rho_hi),
        doublings=doublings,
    )
