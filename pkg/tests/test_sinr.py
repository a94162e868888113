import numpy as np
import pytest

from cfsurv import (
    LargeScale,
    ModeAssignment,
    PowerAllocation,
    SimParams,
    min_success_probability,
    monitoring_report,
    sinr_observe,
    sinr_observe_all,
    sinr_untrusted,
    success_probability,
    success_probability_all,
    xi,
    xi_all,
)
from cfsurv.sinr import (
    mn_interference_all,
    mu_all,
    observe_term_closed_forms,
    power_constraint_lhs,
)

from conftest import make_handpicked, make_instance, random_allocation


def all_observing(M):
    return ModeAssignment(a=np.zeros(M, dtype=int))


def all_jamming(M):
    return ModeAssignment(a=np.ones(M, dtype=int))


class TestXi:
    def test_no_jammers(self, handpicked):
        params, ls = handpicked
        a = all_observing(params.M)
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        expect = params.rho_UT * (ls.beta_U[:, 0].sum() - ls.beta_U[0, 0]) + 1.0
        assert xi(0, a, theta, ls, params) == pytest.approx(expect)

    def test_zero_theta_any_assignment(self, handpicked):
        params, ls = handpicked
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        base = xi(0, all_observing(params.M), theta, ls, params)
        for bits in range(1, 2 ** params.M):
            a = ModeAssignment(a=np.array(
                [(bits >> m) & 1 for m in range(params.M)]))
            assert xi(0, a, theta, ls, params) == pytest.approx(base)

    def test_at_least_one(self):
        params, ls = make_instance(M=3, K=2, seed=1)
        rng = np.random.default_rng(1)
        a = ModeAssignment(a=np.array([1, 0, 1]))
        theta = random_allocation(a, ls, params, rng)
        assert np.all(xi_all(a, theta, ls, params) >= 1.0)

    def test_monotone_in_theta(self, handpicked):
        params, ls = handpicked
        a = ModeAssignment(a=np.array([1, 0]))
        rng = np.random.default_rng(2)
        theta = random_allocation(a, ls, params, rng)
        v0 = xi(0, a, theta, ls, params)
        bumped = theta.theta.copy()
        bumped[0, 0] *= 1.1
        v1 = xi(0, a, PowerAllocation(theta=bumped), ls, params)
        assert v1 > v0

    def test_closed_form_composition(self, handpicked):
        # hand-evaluated sum against the vectorized path
        params, ls = handpicked
        M, K, N = params.M, params.K, params.N
        a = ModeAssignment(a=np.array([1, 1]))
        rng = np.random.default_rng(3)
        theta = random_allocation(a, ls, params, rng)
        k = 0
        cross = params.rho_UT * sum(ls.beta_U[l, k] for l in range(K) if l != k)
        leak = params.rho_J * N * sum(
            a.a[m] * theta.theta[m, kp] * ls.beta_J[m, k] * ls.gamma_J[m, kp]
            for m in range(M) for kp in range(K))
        coh = params.rho_J * N ** 2 * sum(
            a.a[m] * np.sqrt(theta.theta[m, k]) * ls.gamma_J[m, k]
            for m in range(M)) ** 2
        assert xi(k, a, theta, ls, params) == pytest.approx(
            cross + leak + coh + 1.0)


class TestSinrUntrusted:
    def test_zero_channel(self, handpicked):
        params, ls = handpicked
        a = all_observing(params.M)
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        assert sinr_untrusted(0, 0.0, a, theta, ls, params) == 0.0

    def test_unit_noise_only(self):
        # K=1, no jamming: xi collapses to 1, SINR = rho_UT * |h|^2
        params, ls = make_handpicked(M=2, K=1)
        a = all_observing(params.M)
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        assert xi(0, a, theta, ls, params) == pytest.approx(1.0)
        assert sinr_untrusted(0, 1.0, a, theta, ls, params) == pytest.approx(
            params.rho_UT)

    def test_ratio_recomputation(self, small_instance):
        params, ls = small_instance
        rng = np.random.default_rng(4)
        a = ModeAssignment(a=np.array([1, 0, 1, 0]))
        theta = random_allocation(a, ls, params, rng)
        h2 = 3.7
        expect = params.rho_UT * h2 / xi(1, a, theta, ls, params)
        assert sinr_untrusted(1, h2, a, theta, ls, params) == pytest.approx(
            expect)


class TestSinrObserve:
    def test_all_jamming_zero(self, small_instance):
        params, ls = small_instance
        a = all_jamming(params.M)
        theta = random_allocation(a, ls, params, np.random.default_rng(5))
        assert np.all(sinr_observe_all(a, theta, ls, params) == 0.0)

    def test_all_observing_k1_hand_formula(self):
        params, ls = make_handpicked(M=3, K=1)
        a = all_observing(params.M)
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        g = ls.gamma_O[:, 0]
        num = params.N * params.rho_UT * g.sum() ** 2
        den = params.rho_UT * (ls.beta_O[:, 0] * g).sum() + g.sum()
        assert sinr_observe(0, a, theta, ls, params) == pytest.approx(num / den)

    def test_term_recomposition(self, small_instance):
        # Eq-level decomposition: SINR = N * DS2 / (BU + UI + MI + AN)
        # with the common factor N of the denominator terms cancelled
        params, ls = small_instance
        rng = np.random.default_rng(6)
        a = ModeAssignment(a=np.array([0, 1, 0, 1]))
        theta = random_allocation(a, ls, params, rng)
        for k in range(params.K):
            t = observe_term_closed_forms(k, a, theta, ls, params)
            den = (t["BU"] + t["UI"] + t["MI"] + t["AN"]) / params.N
            assert sinr_observe(k, a, theta, ls, params) == pytest.approx(
                t["DS2"] / params.N / den)

    def test_mu_matches_terms(self, small_instance):
        params, ls = small_instance
        a = ModeAssignment(a=np.array([0, 1, 1, 0]))
        theta = random_allocation(a, ls, params, np.random.default_rng(7))
        mu = mu_all(a, ls, params)
        for k in range(params.K):
            t = observe_term_closed_forms(k, a, theta, ls, params)
            assert mu[k] == pytest.approx((t["BU"] + t["UI"] + t["AN"])
                                          / params.N)


class TestSuccessProbability:
    def test_zero_sinr_zero_probability(self, small_instance):
        params, ls = small_instance
        a = all_jamming(params.M)
        theta = random_allocation(a, ls, params, np.random.default_rng(8))
        assert np.all(success_probability_all(a, theta, ls, params) == 0.0)

    def test_analytic_median(self):
        # exponent ln2 => probability exactly 1/2
        params, ls = make_handpicked(M=2, K=1)
        a = all_observing(params.M)
        theta = PowerAllocation(theta=np.zeros((params.M, params.K)))
        s = sinr_observe(0, a, theta, ls, params)
        x = xi(0, a, theta, ls, params)
        ls.beta_U[0, 0] = s * x / (params.rho_UT * np.log(2.0))
        assert success_probability(0, a, theta, ls, params) == pytest.approx(0.5)

    def test_range(self, small_instance):
        params, ls = small_instance
        rng = np.random.default_rng(9)
        for seed in range(5):
            a = ModeAssignment(
                a=(np.random.default_rng(seed).random(params.M) < 0.5)
                .astype(int))
            theta = random_allocation(a, ls, params, rng)
            p = success_probability_all(a, theta, ls, params)
            assert np.all(p >= 0.0)
            assert np.all(p < 1.0)


class TestMinSuccess:
    def test_single_link(self):
        params, ls = make_handpicked(M=2, K=1)
        a = ModeAssignment(a=np.array([1, 0]))
        theta = random_allocation(a, ls, params, np.random.default_rng(10))
        val, k = min_success_probability(a, theta, ls, params)
        assert k == 0
        assert val == pytest.approx(
            success_probability(0, a, theta, ls, params))

    def test_symmetric_ties_take_lowest_index(self):
        params, ls = make_handpicked(M=2, K=2)
        # duplicate link 0 onto link 1 so both links are identical
        for f in (ls.beta_J, ls.beta_O, ls.gamma_J, ls.gamma_O):
            f[:, 1] = f[:, 0]
        ls.beta_U[:, :] = ls.beta_U[0, 0]
        a = ModeAssignment(a=np.array([1, 0]))
        theta = PowerAllocation(
            theta=np.array([[0.1, 0.1], [0.0, 0.0]]))
        p = success_probability_all(a, theta, ls, params)
        assert p[0] == pytest.approx(p[1])
        _, k = min_success_probability(a, theta, ls, params)
        assert k == 0

    def test_equals_min_of_per_link(self, small_instance):
        params, ls = small_instance
        a = ModeAssignment(a=np.array([0, 1, 0, 1]))
        theta = random_allocation(a, ls, params, np.random.default_rng(11))
        val, k = min_success_probability(a, theta, ls, params)
        per = [success_probability(i, a, theta, ls, params)
               for i in range(params.K)]
        assert val == pytest.approx(min(per))
        assert k == int(np.argmin(per))


class TestReport:
    def test_fields_and_invariants(self, small_instance):
        params, ls = small_instance
        a = ModeAssignment(a=np.array([0, 1, 1, 0]))
        theta = random_allocation(a, ls, params, np.random.default_rng(12))
        rep = monitoring_report(a, theta, ls, params)
        assert np.all(rep.xi >= 1.0)
        assert np.all(rep.sinr_O >= 0.0)
        assert np.all((rep.success_prob >= 0.0) & (rep.success_prob < 1.0))
        assert rep.min_success_prob == pytest.approx(rep.success_prob.min())

    def test_power_constraint_lhs(self, small_instance):
        params, ls = small_instance
        a = ModeAssignment(a=np.array([1, 1, 0, 0]))
        theta = random_allocation(a, ls, params, np.random.default_rng(13))
        lhs = power_constraint_lhs(a, theta, ls)
        hand = a.a * np.sum(ls.gamma_J * theta.theta, axis=1)
        assert np.allclose(lhs, hand)
