"""Closed-form effective SINRs and the monitoring success probability.

Everything here is statistics-only: evaluated from large-scale gains and
estimate qualities, never from an instantaneous channel draw (the lone
exception, sinr_untrusted, exists for the Monte-Carlo oracle and
diagnostics).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import LargeScale, SimParams


@dataclass
class ModeAssignment:
    """Binary mode vector: a[m] = 1 means MN m jams, 0 means it observes."""

    a: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if not np.all((self.a == 0) | (self.a == 1)):
            raise ValueError("mode entries must be 0 or 1")

    @property
    def observing(self) -> np.ndarray:
        return np.flatnonzero(self.a == 0)

    @property
    def jamming(self) -> np.ndarray:
        return np.flatnonzero(self.a == 1)

    def to_json_dict(self) -> dict:
        return {"a": self.a.astype(int).tolist()}


@dataclass
class PowerAllocation:
    """Nonnegative per-(MN, link) jamming power-control coefficients."""

    theta: np.ndarray  # (M, K)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        if np.any(self.theta < 0):
            raise ValueError("power-control coefficients must be nonnegative")

    def to_json_dict(self) -> dict:
        return {"theta": self.theta.tolist()}


@dataclass
class MonitoringReport:
    """Per-link closed-form summary of one (assignment, power) operating point."""

    xi: np.ndarray
    sinr_O: np.ndarray
    success_prob: np.ndarray
    min_success_prob: float

    def to_json_dict(self) -> dict:
        return {
            "xi": self.xi.tolist(),
            "sinr_O": self.sinr_O.tolist(),
            "success_prob": self.success_prob.tolist(),
            "min_success_prob": self.min_success_prob,
        }


def power_constraint_lhs(a: ModeAssignment, theta: PowerAllocation,
                         ls: LargeScale) -> np.ndarray:
    """Per-MN value of a_m * sum_k gamma_J[m,k] * theta[m,k] (must be <= 1/N)."""
    return a.a * np.sum(ls.gamma_J * theta.theta, axis=1)


def xi_all(a: ModeAssignment, theta: PowerAllocation, ls: LargeScale,
           params: SimParams) -> np.ndarray:
    """Effective interference-plus-noise variance at every UR, length K.

    xi_k = rho_UT * sum_{l != k} beta_U[l,k]
         + rho_J * N * sum_{k'} sum_m a_m theta[m,k'] beta_J[m,k] gamma_J[m,k']
         + rho_J * N^2 * (sum_m a_m sqrt(theta[m,k]) gamma_J[m,k])^2
         + 1
    """
    K, N = params.K, params.N
    av = a.a
    th = theta.theta

    cross_ut = params.rho_UT * (ls.beta_U.sum(axis=0) - np.diag(ls.beta_U))

    # sum over m of a_m theta[m,k'] gamma_J[m,k'], then couple to beta_J[m,k]
    jam_lin = params.rho_J * N * np.einsum(
        "m,mq,mk,mq->k", av, th, ls.beta_J, ls.gamma_J)

    coh = np.einsum("m,mk,mk->k", av, np.sqrt(th), ls.gamma_J)
    jam_coh = params.rho_J * N ** 2 * coh ** 2

    return cross_ut + jam_lin + jam_coh + np.ones(K)


def xi(k: int, a: ModeAssignment, theta: PowerAllocation, ls: LargeScale,
       params: SimParams) -> float:
    """Effective interference-plus-noise variance at UR k."""
    return float(xi_all(a, theta, ls, params)[k])


def sinr_untrusted(k: int, h_kk_abs2: float, a: ModeAssignment,
                   theta: PowerAllocation, ls: LargeScale,
                   params: SimParams) -> float:
    """Instantaneous SINR of untrusted link k given a draw of |h_kk|^2."""
    if h_kk_abs2 < 0:
        raise ValueError("h_kk_abs2 must be nonnegative")
    return params.rho_UT * h_kk_abs2 / xi(k, a, theta, ls, params)


def mu_all(a: ModeAssignment, ls: LargeScale, params: SimParams) -> np.ndarray:
    """Observer-side noise-plus-UT-interference constant mu_k, length K."""
    obs = 1.0 - a.a
    ut_part = params.rho_UT * np.einsum(
        "m,ml,mk->k", obs, ls.beta_O, ls.gamma_O)
    an_part = np.einsum("m,mk->k", obs, ls.gamma_O)
    return ut_part + an_part


def mn_interference_all(a: ModeAssignment, theta: PowerAllocation,
                        ls: LargeScale, params: SimParams) -> np.ndarray:
    """Jammer-to-observer leakage term of the observing SINR denominator.

    rho_J * N * sum_{m,i,l} (1-a_m) a_i theta[i,l] gamma_O[m,k]
                            beta_MM[m,i] gamma_J[i,l]
    """
    obs = 1.0 - a.a
    jam_load = a.a * np.sum(theta.theta * ls.gamma_J, axis=1)  # (M,)
    coupling = np.einsum("m,mk,mi,i->k", obs, ls.gamma_O, ls.beta_MM, jam_load)
    return params.rho_J * params.N * coupling


def sinr_observe_all(a: ModeAssignment, theta: PowerAllocation,
                     ls: LargeScale, params: SimParams) -> np.ndarray:
    """Closed-form observing SINR at the CPU for every link, length K.

    N * rho_UT * (sum_m (1-a_m) gamma_O[m,k])^2
    over mu_k plus the jammer-to-observer leakage. All MNs jamming gives
    a zero numerator, hence zero.
    """
    obs = 1.0 - a.a
    num = params.N * params.rho_UT * np.einsum("m,mk->k", obs, ls.gamma_O) ** 2
    den = mu_all(a, ls, params) + mn_interference_all(a, theta, ls, params)
    out = np.zeros(params.K)
    np.divide(num, den, out=out, where=den > 0)
    return out


def sinr_observe(k: int, a: ModeAssignment, theta: PowerAllocation,
                 ls: LargeScale, params: SimParams) -> float:
    return float(sinr_observe_all(a, theta, ls, params)[k])


def observe_term_closed_forms(k: int, a: ModeAssignment, theta: PowerAllocation,
                              ls: LargeScale, params: SimParams) -> dict:
    """The five decomposition terms of the observing SINR: DS^2, BU, UI, MI, AN.

    Satisfies sinr_observe == DS2 / (BU + UI + MI + AN).
    """
    obs = 1.0 - a.a
    N = params.N
    g_k = ls.gamma_O[:, k]

    ds2 = params.rho_UT * (N * np.sum(obs * g_k)) ** 2
    bu = params.rho_UT * N * np.sum(obs * ls.beta_O[:, k] * g_k)
    ui = params.rho_UT * N * (
        np.einsum("m,ml,m->", obs, ls.beta_O, g_k) - np.sum(obs * ls.beta_O[:, k] * g_k))
    jam_load = a.a * np.sum(theta.theta * ls.gamma_J, axis=1)
    mi = params.rho_J * N ** 2 * np.einsum("m,m,mi,i->", obs, g_k, ls.beta_MM, jam_load)
    an = N * np.sum(obs * g_k)
    return {"DS2": float(ds2), "BU": float(bu), "UI": float(ui),
            "MI": float(mi), "AN": float(an)}


def success_probability_all(a: ModeAssignment, theta: PowerAllocation,
                            ls: LargeScale, params: SimParams) -> np.ndarray:
    """Monitoring success probability of every link, length K.

    1 - exp(-sinr_O[k] * xi[k] / (beta_U[k,k] * rho_UT)): the chance the
    CPU's statistical SINR beats the untrusted link's instantaneous SINR,
    using the exponential law of |h_kk|^2.
    """
    s = sinr_observe_all(a, theta, ls, params)
    x = xi_all(a, theta, ls, params)
    expo = s * x / (np.diag(ls.beta_U) * params.rho_UT)
    return -np.expm1(-expo)


def success_probability(k: int, a: ModeAssignment, theta: PowerAllocation,
                        ls: LargeScale, params: SimParams) -> float:
    return float(success_probability_all(a, theta, ls, params)[k])


def min_success_probability(a: ModeAssignment, theta: PowerAllocation,
                            ls: LargeScale, params: SimParams) -> tuple[float, int]:
    """Minimum success probability over links and its argmin (ties: lowest k)."""
    probs = success_probability_all(a, theta, ls, params)
    if probs.size == 0:
        raise ValueError("need at least one untrusted pair")
    k = int(np.argmin(probs))
    return float(probs[k]), k


def monitoring_report(a: ModeAssignment, theta: PowerAllocation,
                      ls: LargeScale, params: SimParams) -> MonitoringReport:
    probs = success_probability_all(a, theta, ls, params)
    return MonitoringReport(
        xi=xi_all(a, theta, ls, params),
        sinr_O=sinr_observe_all(a, theta, ls, params),
        success_prob=probs,
        min_success_prob=float(probs.min()),
    )
