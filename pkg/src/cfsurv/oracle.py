"""Signal-level Monte-Carlo ground truth for every closed form.

Simulates the raw received signals (jamming superposition at each UR,
combined observations at the CPU) from fresh small-scale draws and i.i.d.
unit-variance symbols, and estimates each quantity that the closed forms
predict. Deliberately brute force: this module is the independent side of
every equivalence check and never reuses the closed-form expressions it
validates (the lone exception is the success-probability estimator, which
by construction validates only the exponential-CDF step).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LargeScale, SimParams, crandn
from .sinr import (ModeAssignment, PowerAllocation, sinr_observe_all,
                   success_probability_all, xi_all)

DEFAULT_DRAWS = 100_000
SMOKE_DRAWS = 1_000


@dataclass
class OracleEstimate:
    value: float
    std_error: float
    n_samples: int

    def to_json_dict(self) -> dict:
        return {"value": self.value, "std_error": self.std_error,
                "n_samples": self.n_samples}


class _MeanAccumulator:
    """Chunked mean/variance with compensated cross-chunk summation."""

    def __init__(self):
        self._sums = []
        self._sqsums = []
        self._n = 0

    def add(self, values: np.ndarray):
        self._sums.append(float(np.sum(values)))
        self._sqsums.append(float(np.sum(values ** 2)))
        self._n += values.size

    def estimate(self) -> OracleEstimate:
        n = self._n
        mean = math.fsum(self._sums) / n
        var = max(math.fsum(self._sqsums) / n - mean ** 2, 0.0)
        return OracleEstimate(value=mean, std_error=math.sqrt(var / n),
                              n_samples=n)


def _chunks(n: int, size: int):
    done = 0
    while done < n:
        c = min(size, n - done)
        yield c
        done += c


def mc_effective_noise_variance(k: int, a: ModeAssignment, theta: PowerAllocation,
                                ls: LargeScale, params: SimParams,
                                n: int = DEFAULT_DRAWS,
                                rng: np.random.Generator | None = None) -> OracleEstimate:
    """Sample variance of the effective noise seen at UR k.

    Per draw: cross-UT interference + MR-precoded jamming leakage + unit
    AWGN, with fresh channels and fresh CN(0,1) symbols (any unit-variance
    zero-mean symbol law gives the same variance).
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    M, K, N = params.M, params.K, params.N
    av = a.a
    sq_theta = np.sqrt(theta.theta)

    other = np.arange(K) != k
    acc = _MeanAccumulator()
    chunk = max(1, 200_000 // max(M * K * N, 1))
    for c in _chunks(n, chunk):
        hat_g = np.sqrt(ls.gamma_J)[None, :, :, None] * crandn((c, M, K, N), rng)
        err_g = np.sqrt(ls.beta_J - ls.gamma_J)[None, :, :, None] * crandn((c, M, K, N), rng)
        g_k = hat_g[:, :, k, :] + err_g[:, :, k, :]  # true channel MN m -> UR k

        h = np.sqrt(ls.beta_U[:, k])[None, :] * crandn((c, K), rng)
        s_ut = crandn((c, K), rng)
        s_j = crandn((c, K), rng)
        w = crandn((c,), rng)

        cross = math.sqrt(params.rho_UT) * np.einsum("cl,cl->c", h[:, other], s_ut[:, other])
        inner = np.einsum("cmn,cmqn->cmq", g_k, hat_g.conj())
        jam = math.sqrt(params.rho_J) * np.einsum(
            "m,mq,cmq,cq->c", av, sq_theta, inner, s_j)
        acc.add(np.abs(cross + jam + w) ** 2)
    return acc.estimate()


def mc_observe_terms(k: int, a: ModeAssignment, theta: PowerAllocation,
                     ls: LargeScale, params: SimParams,
                     n: int = DEFAULT_DRAWS,
                     rng: np.random.Generator | None = None) -> dict:
    """Monte-Carlo estimates of the observing-SINR decomposition at the CPU:
    DS2 (squared mean of the combined desired signal), BU (its variance),
    UI (cross-UT interference power), MI (jammer leakage power through the
    MN-to-MN channels), AN (combined noise power). Keys match those names.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    M, K, N = params.M, params.K, params.N
    obs = 1.0 - a.a
    av = a.a
    sq_theta = np.sqrt(theta.theta)

    # the deterministic mean of the combined desired signal follows from
    # E{hat^dag (hat + err)} = E||hat||^2 = N * gamma, used as the centre
    # for the BU deviation
    ds_mean = math.sqrt(params.rho_UT) * params.N * float(np.sum(obs * ls.gamma_O[:, k]))

    other = np.arange(K) != k
    acc_ds = _MeanAccumulator()   # real part of the combined desired signal
    acc_bu = _MeanAccumulator()
    acc_ui = _MeanAccumulator()
    acc_mi = _MeanAccumulator()
    acc_an = _MeanAccumulator()

    chunk = max(1, 200_000 // max(M * M * N * N, 1))
    for c in _chunks(n, chunk):
        hat_o = np.sqrt(ls.gamma_O)[None, :, :, None] * crandn((c, M, K, N), rng)
        err_o = np.sqrt(ls.beta_O - ls.gamma_O)[None, :, :, None] * crandn((c, M, K, N), rng)
        g_o = hat_o + err_o
        hat_j = np.sqrt(ls.gamma_J)[None, :, :, None] * crandn((c, M, K, N), rng)
        F = np.sqrt(ls.beta_MM)[None, :, :, None, None] * crandn((c, M, M, N, N), rng)
        w = crandn((c, M, N), rng)

        comb = hat_o[:, :, k, :].conj()  # combiner of link k at each MN
        # B[c, l]: combined response of UT l through the observing MNs
        B = np.einsum("m,cmn,cmln->cl", obs, comb, g_o)

        desired = math.sqrt(params.rho_UT) * B[:, k]
        acc_ds.add(desired.real)
        acc_bu.add(np.abs(desired - ds_mean) ** 2)
        acc_ui.add(params.rho_UT * np.sum(np.abs(B[:, other]) ** 2, axis=1))

        # C[c, l]: combined leakage of jamming stream l
        w1 = np.einsum("cmn,cminp->cmip", comb, F)
        D = np.einsum("m,cmip->cip", obs, w1)
        C = np.einsum("i,il,cip,cilp->cl", av, sq_theta, D, hat_j.conj())
        acc_mi.add(params.rho_J * np.sum(np.abs(C) ** 2, axis=1))

        noise = np.einsum("m,cmn,cmn->c", obs, comb, w)
        acc_an.add(np.abs(noise) ** 2)

    ds = acc_ds.estimate()
    ds2 = OracleEstimate(value=ds.value ** 2,
                         std_error=2.0 * abs(ds.value) * ds.std_error,
                         n_samples=ds.n_samples)
    return {"DS2": ds2, "BU": acc_bu.estimate(), "UI": acc_ui.estimate(),
            "MI": acc_mi.estimate(), "AN": acc_an.estimate()}


def mc_success_probability(k: int, a: ModeAssignment, theta: PowerAllocation,
                           ls: LargeScale, params: SimParams,
                           n: int = DEFAULT_DRAWS,
                           rng: np.random.Generator | None = None) -> OracleEstimate:
    """Empirical Pr(observing SINR >= untrusted SINR) over draws of the
    direct-link power |h_kk|^2 (exponential with mean beta_U[k, k])."""
    rng = rng if rng is not None else np.random.default_rng(0)
    sinr_o = sinr_observe_all(a, theta, ls, params)[k]
    xi_k = xi_all(a, theta, ls, params)[k]
    h2 = rng.exponential(scale=ls.beta_U[k, k], size=n)
    hits = (sinr_o >= params.rho_UT * h2 / xi_k).astype(float)
    acc = _MeanAccumulator()
    acc.add(hits)
    return acc.estimate()


def fourth_moment_check(gamma: float, N: int, n: int = DEFAULT_DRAWS,
                        rng: np.random.Generator | None = None) -> OracleEstimate:
    """Sample mean of ||v||^4 for v ~ CN(0, gamma I_N); expected N(N+1)gamma^2."""
    rng = rng if rng is not None else np.random.default_rng(0)
    acc = _MeanAccumulator()
    for c in _chunks(n, 100_000):
        v = math.sqrt(gamma) * crandn((c, N), rng)
        acc.add(np.sum(np.abs(v) ** 2, axis=1) ** 2)
    return acc.estimate()


def compare_closed_forms(a: ModeAssignment, theta: PowerAllocation,
                         ls: LargeScale, params: SimParams,
                         n: int = DEFAULT_DRAWS,
                         rng: np.random.Generator | None = None,
                         rel_tol: float = 0.02,
                         prob_tol: float = 0.01) -> list[dict]:
    """Closed form vs. oracle for every link: effective noise variance,
    the five observing-SINR terms, and the success probability. Returns
    JSON-ready comparison rows with a pass/fail verdict each.
    """
    from .sinr import observe_term_closed_forms

    rng = rng if rng is not None else np.random.default_rng(0)
    rows = []

    def row(quantity, k, closed, est: OracleEstimate, tol, absolute=False):
        err = abs(est.value - closed)
        bound = tol if absolute else max(tol * abs(closed), 3.0 * est.std_error)
        rows.append({
            "quantity": quantity, "k": k,
            "closed_form": closed, "oracle": est.value,
            "std_error": est.std_error, "n_samples": est.n_samples,
            "error": err, "bound": bound,
            "verdict": "pass" if err <= bound else "fail",
        })

    xis = xi_all(a, theta, ls, params)
    probs = success_probability_all(a, theta, ls, params)
    for k in range(params.K):
        row("xi", k, float(xis[k]),
            mc_effective_noise_variance(k, a, theta, ls, params, n, rng), rel_tol)
        closed_terms = observe_term_closed_forms(k, a, theta, ls, params)
        ests = mc_observe_terms(k, a, theta, ls, params, n, rng)
        for name in ("DS2", "BU", "UI", "MI", "AN"):
            row(name, k, closed_terms[name], ests[name], rel_tol)
        row("success_prob", k, float(probs[k]),
            mc_success_probability(k, a, theta, ls, params, n, rng),
            prob_tol, absolute=True)
    return rows
