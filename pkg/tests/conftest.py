"""Shared fixtures: small random instances sized for fast closed-form checks."""
import numpy as np
import pytest

from cfsurv import (
    LargeScale,
    ModeAssignment,
    PowerAllocation,
    SimParams,
    compute_large_scale,
    generate_topology,
)


def make_instance(M=4, K=2, N=2, seed=0, **overrides):
    """Random topology + large-scale draw with the default numerology."""
    params = SimParams(M=M, K=K, N=N, seed=seed, **overrides)
    rng = np.random.default_rng(seed)
    topo = generate_topology(params, rng)
    ls = compute_large_scale(topo, params, rng)
    return params, ls


def make_handpicked(M=2, K=1, N=2, rho_J=4.0, rho_UT=2.0, seed=0,
                    beta_scale=1.0):
    """Small instance with O(1) gains so tolerances read in plain numbers."""
    params = SimParams(M=M, K=K, N=N, rho_J=rho_J, rho_UT=rho_UT, seed=seed)
    rng = np.random.default_rng(seed)
    beta_J = beta_scale * rng.uniform(0.1, 1.0, (M, K))
    beta_O = beta_scale * rng.uniform(0.1, 1.0, (M, K))
    beta_U = beta_scale * rng.uniform(0.1, 1.0, (K, K))
    beta_MM = beta_scale * rng.uniform(0.1, 1.0, (M, M))
    beta_MM = 0.5 * (beta_MM + beta_MM.T)
    np.fill_diagonal(beta_MM, 0.0)
    frac = rng.uniform(0.3, 1.0, (M, K))
    ls = LargeScale(beta_J=beta_J, beta_O=beta_O, beta_U=beta_U,
                    beta_MM=beta_MM, gamma_J=frac * beta_J,
                    gamma_O=rng.uniform(0.3, 1.0, (M, K)) * beta_O)
    return params, ls


def random_allocation(a: ModeAssignment, ls: LargeScale, params: SimParams,
                      rng: np.random.Generator) -> PowerAllocation:
    """Feasible random theta: per-MN budget split by random weights."""
    M, K = params.M, params.K
    theta = np.zeros((M, K))
    for m in a.jamming:
        w = rng.dirichlet(np.ones(K)) * rng.uniform(0.2, 1.0)
        theta[m] = w / (params.N * ls.gamma_J[m])
    return PowerAllocation(theta=theta)


@pytest.fixture
def small_instance():
    return make_instance()


@pytest.fixture
def handpicked():
    return make_handpicked()
