import numpy as np
import pytest

from cfsurv import (
    ModeAssignment,
    PowerAllocation,
    compare_closed_forms,
    fourth_moment_check,
    mc_effective_noise_variance,
    mc_observe_terms,
    mc_success_probability,
    sinr_observe,
    success_probability,
    xi,
)
from cfsurv.sinr import observe_term_closed_forms

from conftest import make_handpicked, make_instance, random_allocation


def within(est, target, rel=0.05):
    """max(rel, 3 std errors) agreement band."""
    bound = max(rel * abs(target), 3.0 * est.std_error)
    return abs(est.value - target) <= bound


class TestEffectiveNoise:
    def test_noise_only(self):
        params, ls = make_handpicked(M=2, K=1)
        a = ModeAssignment(a=np.zeros(2, dtype=int))
        theta = PowerAllocation(theta=np.zeros((2, 1)))
        est = mc_effective_noise_variance(0, a, theta, ls, params, n=20000,
                                          rng=np.random.default_rng(0))
        assert abs(est.value - 1.0) <= 3.0 * est.std_error

    def test_cross_ut_only(self):
        params, ls = make_handpicked(M=2, K=2)
        a = ModeAssignment(a=np.zeros(2, dtype=int))
        theta = PowerAllocation(theta=np.zeros((2, 2)))
        est = mc_effective_noise_variance(0, a, theta, ls, params, n=40000,
                                          rng=np.random.default_rng(1))
        target = params.rho_UT * ls.beta_U[1, 0] + 1.0
        assert within(est, target)

    def test_random_instance_matches_xi(self):
        params, ls = make_instance(M=4, K=2, N=2, seed=2)
        rng = np.random.default_rng(2)
        a = ModeAssignment(a=np.array([1, 0, 1, 0]))
        theta = random_allocation(a, ls, params, rng)
        est = mc_effective_noise_variance(0, a, theta, ls, params, n=30000,
                                          rng=rng)
        assert within(est, xi(0, a, theta, ls, params))

    def test_std_error_halves_with_4x_samples(self):
        params, ls = make_instance(M=3, K=2, seed=3)
        rng = np.random.default_rng(3)
        a = ModeAssignment(a=np.array([1, 0, 1]))
        theta = random_allocation(a, ls, params, rng)
        e1 = mc_effective_noise_variance(0, a, theta, ls, params, n=5000,
                                         rng=np.random.default_rng(10))
        e2 = mc_effective_noise_variance(0, a, theta, ls, params, n=20000,
                                         rng=np.random.default_rng(11))
        ratio = e1.std_error / e2.std_error
        assert 1.5 < ratio < 2.7


class TestObserveTerms:
    def test_all_jamming_all_zero(self):
        params, ls = make_instance(M=3, K=2, seed=4)
        a = ModeAssignment(a=np.ones(3, dtype=int))
        theta = random_allocation(a, ls, params, np.random.default_rng(4))
        terms = mc_observe_terms(0, a, theta, ls, params, n=2000,
                                 rng=np.random.default_rng(4))
        for name, est in terms.items():
            assert est.value == pytest.approx(0.0, abs=1e-12), name

    def test_mi_zero_without_power(self):
        params, ls = make_instance(M=3, K=2, seed=5)
        a = ModeAssignment(a=np.array([0, 1, 0]))
        theta = PowerAllocation(theta=np.zeros((3, 2)))
        terms = mc_observe_terms(0, a, theta, ls, params, n=2000,
                                 rng=np.random.default_rng(5))
        assert terms["MI"].value == pytest.approx(0.0, abs=1e-12)

    def test_terms_match_closed_forms(self):
        params, ls = make_instance(M=4, K=2, N=2, seed=6)
        rng = np.random.default_rng(6)
        a = ModeAssignment(a=np.array([0, 1, 0, 1]))
        theta = random_allocation(a, ls, params, rng)
        k = 0
        terms = mc_observe_terms(k, a, theta, ls, params, n=40000, rng=rng)
        closed = observe_term_closed_forms(k, a, theta, ls, params)
        for name in ("DS2", "BU", "UI", "MI", "AN"):
            assert within(terms[name], closed[name], rel=0.05), name


class TestSuccessProbability:
    def test_zero_observe_sinr(self):
        params, ls = make_instance(M=2, K=1, seed=7)
        a = ModeAssignment(a=np.ones(2, dtype=int))  # no observers
        theta = random_allocation(a, ls, params, np.random.default_rng(7))
        est = mc_success_probability(0, a, theta, ls, params, n=2000,
                                     rng=np.random.default_rng(7))
        assert est.value == 0.0

    def test_analytic_median(self):
        params, ls = make_handpicked(M=2, K=1)
        a = ModeAssignment(a=np.zeros(2, dtype=int))
        theta = PowerAllocation(theta=np.zeros((2, 1)))
        s = sinr_observe(0, a, theta, ls, params)
        x = xi(0, a, theta, ls, params)
        ls.beta_U[0, 0] = s * x / (params.rho_UT * np.log(2.0))
        est = mc_success_probability(0, a, theta, ls, params, n=40000,
                                     rng=np.random.default_rng(8))
        assert abs(est.value - 0.5) <= 3.0 * est.std_error

    def test_random_instance_matches_closed_form(self):
        params, ls = make_instance(M=4, K=2, seed=9)
        rng = np.random.default_rng(9)
        a = ModeAssignment(a=np.array([0, 1, 1, 0]))
        theta = random_allocation(a, ls, params, rng)
        est = mc_success_probability(0, a, theta, ls, params, n=40000,
                                     rng=rng)
        target = success_probability(0, a, theta, ls, params)
        assert abs(est.value - target) <= 0.02


class TestFourthMoment:
    def test_exponential_second_moment(self):
        est = fourth_moment_check(1.0, 1, n=100000,
                                  rng=np.random.default_rng(10))
        assert est.value == pytest.approx(2.0, rel=0.05)

    def test_n3_half_gamma(self):
        est = fourth_moment_check(0.5, 3, n=100000,
                                  rng=np.random.default_rng(11))
        assert est.value == pytest.approx(3.0, rel=0.05)

    def test_fields(self):
        est = fourth_moment_check(1.0, 2, n=5000,
                                  rng=np.random.default_rng(12))
        assert est.std_error >= 0.0
        assert est.n_samples == 5000


class TestComparisonReport:
    def test_report_structure_and_verdicts(self):
        params, ls = make_instance(M=3, K=2, seed=13)
        rng = np.random.default_rng(13)
        a = ModeAssignment(a=np.array([1, 0, 1]))
        theta = random_allocation(a, ls, params, rng)
        report = compare_closed_forms(a, theta, ls, params, n=30000, rng=rng)
        assert isinstance(report, list)
        names = {row["quantity"] for row in report}
        assert {"xi", "DS2", "BU", "UI", "MI", "AN",
                "success_prob"} <= names
        for row in report:
            assert row["verdict"] in ("pass", "fail")
            assert row["verdict"] == "pass", row
