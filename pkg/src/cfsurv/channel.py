"""Topology generation, large-scale statistics, and small-scale channel draws.

Geometry lives on a wrap-around (toroidal) square so the network has no
boundary. Large-scale gains combine a log-distance path loss with
log-normal shadowing that is correlated across the untrusted users seen
from the same monitoring node (MN) and independent across MNs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CovarianceNotFactorable, PlacementExhausted

# retry budget for rejection-sampled placements, per entity
PLACEMENT_RETRIES = 10_000

# path loss model is far-field with a 1 m reference distance
MIN_PATHLOSS_DIST_M = 1.0

# covariance factorization: clip threshold and allowed clipped mass
EIG_CLIP_TOL = 1e-10
EIG_CLIP_MASS_BUDGET = 0.01


@dataclass
class EstimationModel:
    """How estimate-quality coefficients gamma arise from the gains beta.

    mode "lmmse": gamma = q * beta**2 / (q * beta + 1) with
    q = tau_p * pilot_power, the standard pilot-based form. pilot_power is
    the noise-normalized pilot transmit power; the gains beta are raw
    path-loss scale, so without it the pilot SNR q * beta would be
    meaningless. mode "fraction": gamma = kappa * beta, handy for
    perfect-CSI tests (kappa = 1).
    """

    mode: str = "lmmse"
    tau_p: float = 100.0
    pilot_power: float = 1.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.mode not in ("lmmse", "fraction"):
            raise ValueError(f"unknown estimation model mode: {self.mode!r}")
        if self.mode == "fraction" and not (0.0 < self.kappa <= 1.0):
            raise ValueError("kappa must lie in (0, 1]")
        if self.mode == "lmmse" and (self.tau_p <= 0 or self.pilot_power <= 0):
            raise ValueError("tau_p and pilot_power must be positive")


@dataclass
class SimParams:
    """Scenario parameters. Powers are linear and noise-normalized."""

    M: int
    K: int
    N: int = 2
    rho_J: float = 10.0 ** 12.2        # 1 W over -92 dBm noise
    rho_UT: float = 0.25 * 10.0 ** 12.2  # 250 mW over -92 dBm noise
    area_side: float = 1000.0
    min_mn_spacing: float = 80.0
    pair_dist_range: tuple[float, float] = (80.0, 160.0)
    shadow_sigma_dB: float = 4.0
    shadow_decorr_m: float = 9.0
    estimation_model: EstimationModel | None = None
    seed: int = 0

    def __post_init__(self):
        if self.estimation_model is None:
            # pilots are sent at the untrusted transmit power by default
            self.estimation_model = EstimationModel(pilot_power=self.rho_UT)
        if self.M < 1 or self.K < 0 or self.N < 1:
            raise ValueError("need M >= 1, K >= 0, N >= 1")
        if self.rho_J <= 0 or self.rho_UT <= 0:
            raise ValueError("powers must be positive")
        lo, hi = self.pair_dist_range
        if lo > hi:
            raise ValueError("pair_dist_range must satisfy min <= max")
        if self.area_side <= 0:
            raise ValueError("area_side must be positive")


@dataclass
class Topology:
    """Node positions (meters) on the wrap-around square."""

    mn_pos: np.ndarray  # (M, 2)
    ut_pos: np.ndarray  # (K, 2)
    ur_pos: np.ndarray  # (K, 2)

    def to_json_dict(self) -> dict:
        return {
            "mn_pos": self.mn_pos.tolist(),
            "ut_pos": self.ut_pos.tolist(),
            "ur_pos": self.ur_pos.tolist(),
        }


@dataclass
class LargeScale:
    """Large-scale gains and estimate-quality coefficients (linear scale).

    beta_J[m, k]: MN m -> UR k (jamming link)
    beta_O[m, k]: MN m -> UT k (observing link)
    beta_U[l, k]: UT l -> UR k
    beta_MM[m, i]: MN m -> MN i, zero diagonal
    gamma_J, gamma_O: estimate variances, 0 <= gamma <= beta elementwise
    """

    beta_J: np.ndarray
    beta_O: np.ndarray
    beta_U: np.ndarray
    beta_MM: np.ndarray
    gamma_J: np.ndarray
    gamma_O: np.ndarray

    def to_json_dict(self) -> dict:
        return {
            "beta_J": self.beta_J.tolist(),
            "beta_O": self.beta_O.tolist(),
            "beta_U": self.beta_U.tolist(),
            "beta_MM": self.beta_MM.tolist(),
            "gamma_J": self.gamma_J.tolist(),
            "gamma_O": self.gamma_O.tolist(),
        }


@dataclass
class SmallScaleDraw:
    """One instantaneous channel realization.

    Estimates (hat_*) and the implied errors are independent by
    construction: hat entries have variance gamma, error entries
    beta - gamma, true channel = estimate + error.
    """

    g_J: np.ndarray      # (M, K, N)
    g_O: np.ndarray      # (M, K, N)
    hat_g_J: np.ndarray  # (M, K, N)
    hat_g_O: np.ndarray  # (M, K, N)
    h_U: np.ndarray      # (K, K), h_U[l, k] = UT l -> UR k
    F: np.ndarray        # (M, M, N, N), F[m, i] = MN i -> MN m block


def wrap_distance(p, q, area_side: float) -> float:
    """Torus distance: minimum over the 9 shifted images of q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    shifts = np.array([-1.0, 0.0, 1.0]) * area_side
    best = np.inf
    for sx in shifts:
        for sy in shifts:
            d = np.hypot(p[0] - (q[0] + sx), p[1] - (q[1] + sy))
            best = min(best, d)
    return best


def wrap_distance_matrix(P: np.ndarray, Q: np.ndarray, area_side: float) -> np.ndarray:
    """Pairwise torus distances, shape (len(P), len(Q)).

    Per-axis folding is equivalent to the 9-image minimum on a square torus.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    diff = np.abs(P[:, None, :] - Q[None, :, :]) % area_side
    diff = np.minimum(diff, area_side - diff)
    return np.hypot(diff[..., 0], diff[..., 1])


def generate_topology(params: SimParams, rng: np.random.Generator) -> Topology:
    """Place MNs with a minimum wrap-around spacing and untrusted pairs
    with a bounded transmitter-receiver separation.

    Raises PlacementExhausted when rejection sampling for any single
    entity exceeds its retry budget.
    """
    side = params.area_side

    mn_pos = np.empty((params.M, 2))
    for m in range(params.M):
        for _ in range(PLACEMENT_RETRIES):
            cand = rng.uniform(0.0, side, size=2)
            if m == 0:
                mn_pos[m] = cand
                break
            d = wrap_distance_matrix(cand[None, :], mn_pos[:m], side)
            if d.min() >= params.min_mn_spacing:
                mn_pos[m] = cand
                break
        else:
            raise PlacementExhausted(
                f"could not place MN {m} with spacing >= "
                f"{params.min_mn_spacing} m in a {side} m square"
            )

    ut_pos = rng.uniform(0.0, side, size=(params.K, 2))
    lo, hi = params.pair_dist_range
    radius = rng.uniform(lo, hi, size=params.K)
    angle = rng.uniform(0.0, 2.0 * np.pi, size=params.K)
    offset = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
    ur_pos = (ut_pos + offset) % side

    return Topology(mn_pos=mn_pos, ut_pos=ut_pos, ur_pos=ur_pos)


def path_loss_dB(d) -> np.ndarray:
    """Log-distance path loss; distances are clamped below at 1 m."""
    d = np.maximum(np.asarray(d, dtype=float), MIN_PATHLOSS_DIST_M)
    return -30.5 - 36.7 * np.log10(d)


def shadowing_covariance(points: np.ndarray, area_side: float,
                         sigma_dB: float = 4.0, decorr_m: float = 9.0) -> np.ndarray:
    """Covariance (dB^2) of the shadowing seen from one MN across user points."""
    delta = wrap_distance_matrix(points, points, area_side)
    return sigma_dB ** 2 * np.exp2(-delta / decorr_m)


def sample_correlated_shadowing(points, area_side: float, rng: np.random.Generator,
                                num_rows: int = 1, sigma_dB: float = 4.0,
                                decorr_m: float = 9.0) -> np.ndarray:
    """Draw shadowing rows (dB), one independent row per MN.

    Each row is zero-mean Gaussian over the user points with covariance
    sigma^2 * 2^(-distance / decorr). The covariance is realized through a
    symmetric eigen-factorization with small negative eigenvalues clipped
    at zero; the distance kernel is not guaranteed positive-definite after
    floating error on dense point sets.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n_pts = points.shape[0]
    if n_pts < 1:
        raise ValueError("need at least one receiving point")

    cov = shadowing_covariance(points, area_side, sigma_dB, decorr_m)
    eigval, eigvec = np.linalg.eigh(cov)
    clipped_mass = -eigval[eigval < -EIG_CLIP_TOL].sum()
    total_mass = np.abs(eigval).sum()
    if total_mass > 0 and clipped_mass > EIG_CLIP_MASS_BUDGET * total_mass:
        raise CovarianceNotFactorable(
            f"clipping removed {clipped_mass / total_mass:.1%} of eigenvalue mass"
        )
    root = eigvec * np.sqrt(np.clip(eigval, 0.0, None))
    z = rng.standard_normal((num_rows, n_pts))
    return z @ root.T


def estimation_quality(beta, model: EstimationModel) -> np.ndarray:
    """Estimate variance gamma for a gain beta, with 0 <= gamma <= beta."""
    beta = np.asarray(beta, dtype=float)
    if model.mode == "fraction":
        return model.kappa * beta
    q = model.tau_p * model.pilot_power
    return q * beta ** 2 / (q * beta + 1.0)


def compute_large_scale(topology: Topology, params: SimParams,
                        rng: np.random.Generator) -> LargeScale:
    """Fill every large-scale gain matrix from path loss times shadowing.

    MN-to-user shadowing is correlated across users per MN; MN-to-MN and
    UT-to-UR links get independent shadowing (the correlation model is
    defined only toward untrusted users). The MN-to-MN diagonal is exactly
    zero.
    """
    M, K = params.M, params.K
    side = params.area_side
    sigma = params.shadow_sigma_dB

    if K > 0:
        user_pts = np.vstack([topology.ut_pos, topology.ur_pos])  # (2K, 2)
        shadow = sample_correlated_shadowing(
            user_pts, side, rng, num_rows=M, sigma_dB=sigma,
            decorr_m=params.shadow_decorr_m)
        A_O, A_J = shadow[:, :K], shadow[:, K:]

        d_O = wrap_distance_matrix(topology.mn_pos, topology.ut_pos, side)
        d_J = wrap_distance_matrix(topology.mn_pos, topology.ur_pos, side)
        beta_O = 10.0 ** ((path_loss_dB(d_O) + A_O) / 10.0)
        beta_J = 10.0 ** ((path_loss_dB(d_J) + A_J) / 10.0)

        d_U = wrap_distance_matrix(topology.ut_pos, topology.ur_pos, side)
        A_U = sigma * rng.standard_normal((K, K))
        beta_U = 10.0 ** ((path_loss_dB(d_U) + A_U) / 10.0)
    else:
        beta_O = np.zeros((M, 0))
        beta_J = np.zeros((M, 0))
        beta_U = np.zeros((0, 0))

    d_MM = wrap_distance_matrix(topology.mn_pos, topology.mn_pos, side)
    A_MM = sigma * rng.standard_normal((M, M))
    beta_MM = 10.0 ** ((path_loss_dB(d_MM) + A_MM) / 10.0)
    np.fill_diagonal(beta_MM, 0.0)

    model = params.estimation_model
    return LargeScale(
        beta_J=beta_J,
        beta_O=beta_O,
        beta_U=beta_U,
        beta_MM=beta_MM,
        gamma_J=estimation_quality(beta_J, model),
        gamma_O=estimation_quality(beta_O, model),
    )


def crandn(shape, rng: np.random.Generator) -> np.ndarray:
    """i.i.d. CN(0, 1) samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_small_scale(ls: LargeScale, params: SimParams,
                       rng: np.random.Generator) -> SmallScaleDraw:
    """One draw of all instantaneous channels.

    Estimates are CN(0, gamma) per entry, errors CN(0, beta - gamma) and
    independent of the estimates, true channel = estimate + error.
    """
    M, K, N = params.M, params.K, params.N

    hat_g_J = np.sqrt(ls.gamma_J)[:, :, None] * crandn((M, K, N), rng)
    err_J = np.sqrt(ls.beta_J - ls.gamma_J)[:, :, None] * crandn((M, K, N), rng)
    hat_g_O = np.sqrt(ls.gamma_O)[:, :, None] * crandn((M, K, N), rng)
    err_O = np.sqrt(ls.beta_O - ls.gamma_O)[:, :, None] * crandn((M, K, N), rng)

    h_U = np.sqrt(ls.beta_U) * crandn((K, K), rng)
    F = np.sqrt(ls.beta_MM)[:, :, None, None] * crandn((M, M, N, N), rng)

    return SmallScaleDraw(
        g_J=hat_g_J + err_J,
        g_O=hat_g_O + err_O,
        hat_g_J=hat_g_J,
        hat_g_O=hat_g_O,
        h_U=h_U,
        F=F,
    )
