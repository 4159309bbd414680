"""Benchmark targets with exact oracles.

Contains the 4x4 torus Ising model (small enough to enumerate all 65,536
states exactly), the far-separated bimodal Gaussian pair, a Gaussian
mean-shift pair with closed-form barrier, and two instructional targets
whose exploration kernels renew the energy i.i.d. while mixing poorly in
state space.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import truncnorm

from .core import TargetModel

# ---------------------------------------------------------------------------
# 4x4 torus Ising model
# ---------------------------------------------------------------------------

N_SITES = 16
N_STATES = 1 << N_SITES
SIDE = 4


def _torus_edges():
    """The 32 (right, down) nearest-neighbour bonds of the 4x4 torus."""
    edges = []
    for i in range(SIDE):
        for j in range(SIDE):
            s = SIDE * i + j
            edges.append((s, SIDE * i + (j + 1) % SIDE))
            edges.append((s, SIDE * ((i + 1) % SIDE) + j))
    return edges


TORUS_EDGES = _torus_edges()


def _site_neighbours():
    """For each site, its 4 torus neighbours (left/right/up/down)."""
    nbrs = np.empty((N_SITES, 4), dtype=np.intp)
    for i in range(SIDE):
        for j in range(SIDE):
            s = SIDE * i + j
            nbrs[s] = [
                SIDE * i + (j + 1) % SIDE,
                SIDE * i + (j - 1) % SIDE,
                SIDE * ((i + 1) % SIDE) + j,
                SIDE * ((i - 1) % SIDE) + j,
            ]
    return nbrs


SITE_NEIGHBOURS = _site_neighbours()


def spins_from_codes(codes):
    """Decode 16-bit state codes into +-1 spin arrays of shape (..., 16)."""
    codes = np.asarray(codes)
    bits = (codes[..., None] >> np.arange(N_SITES)) & 1
    return (2 * bits - 1).astype(np.int8)


def codes_from_spins(spins):
    """Encode +-1 spin arrays of shape (..., 16) into 16-bit codes."""
    spins = np.asarray(spins)
    bits = ((spins + 1) // 2).astype(np.int64)
    return (bits << np.arange(N_SITES)).sum(axis=-1)


def _all_bond_sums():
    """sum_{i~j} x_i x_j for every one of the 65,536 states."""
    spins = spins_from_codes(np.arange(N_STATES)).astype(np.int32)
    s = np.zeros(N_STATES, dtype=np.int32)
    for a, b in TORUS_EDGES:
        s += spins[:, a] * spins[:, b]
    return s


_BOND_SUMS = None


def ising_bond_sums():
    """Cached per-state bond sums (the sufficient statistic)."""
    global _BOND_SUMS
    if _BOND_SUMS is None:
        _BOND_SUMS = _all_bond_sums()
    return _BOND_SUMS


@dataclass(frozen=True)
class DiscreteDist:
    """Exact probability table over the coded Ising state space."""

    probs: np.ndarray
    log_z: float

    def __post_init__(self):
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError("distribution does not normalize")


def ising_exact_distribution(beta):
    """Exact pi_beta over all 65,536 states, pi_beta ~ exp(beta * bond sum)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    s = ising_bond_sums().astype(float)
    logw = beta * s
    log_z = logsumexp(logw)
    p = np.exp(logw - log_z)
    p /= p.sum()
    return DiscreteDist(probs=p, log_z=float(log_z))


def ising_model():
    """The 4x4 torus Ising target with uniform reference.

    States are +-1 spin arrays of shape (..., 16).  The energy convention is
    V(x) = log pi_0(x) - log gamma_1(x) = const - sum_{i~j} x_i x_j.
    """
    log_unif = -N_SITES * np.log(2.0)

    def log_reference(x):
        x = np.asarray(x)
        return np.full(x.shape[:-1], log_unif)

    def log_target_unnorm(x):
        x = np.asarray(x, dtype=np.int32)
        s = np.zeros(x.shape[:-1], dtype=np.int32)
        for a, b in TORUS_EDGES:
            s = s + x[..., a] * x[..., b]
        return s.astype(float)

    def sample_reference(rng, size):
        return (2 * rng.integers(0, 2, size=(size, N_SITES)) - 1).astype(np.int8)

    return TargetModel(
        log_reference=log_reference,
        log_target_unnorm=log_target_unnorm,
        dim=None,
        sample_reference=sample_reference,
        name="ising4x4",
    )


# ---------------------------------------------------------------------------
# Gaussian pairs
# ---------------------------------------------------------------------------


def gaussian_shift_pair(mu=2.0):
    """Reference N(0,1), target N(mu,1).

    Along the linear path pi_beta = N(beta*mu, 1) exactly, and the barrier
    has the closed form Lambda = mu / sqrt(pi): the energy is
    V(x) = mu^2/2 - mu*x, so E|V - V'| under pi_beta is beta-free.
    """

    def log_reference(x):
        x = np.asarray(x, dtype=float)
        return -0.5 * x**2 - 0.5 * np.log(2 * np.pi)

    def log_target_unnorm(x):
        x = np.asarray(x, dtype=float)
        return -0.5 * (x - mu) ** 2 - 0.5 * np.log(2 * np.pi)

    def sample_reference(rng, size):
        return rng.standard_normal(size)

    return TargetModel(
        log_reference=log_reference,
        log_target_unnorm=log_target_unnorm,
        dim=1,
        sample_reference=sample_reference,
        name="gaussian_shift",
    )


def gaussian_shift_barrier(mu):
    """Closed-form barrier for gaussian_shift_pair: mu / sqrt(pi)."""
    return mu / np.sqrt(np.pi)


def gaussian_path_sampler(mu):
    """(beta, rng, size) -> exact draws from pi_beta = N(beta*mu, 1)."""

    def sample(beta, rng, size):
        return beta * mu + rng.standard_normal(size)

    return sample


def bimodal_pair():
    """Target 0.5 N(-100,1) + 0.5 N(100,1), reference N(0, 100^2 + 1)."""
    s2 = 100.0**2 + 1.0

    def log_reference(x):
        x = np.asarray(x, dtype=float)
        return -0.5 * x**2 / s2 - 0.5 * np.log(2 * np.pi * s2)

    def log_target_unnorm(x):
        x = np.asarray(x, dtype=float)
        a = -0.5 * (x + 100.0) ** 2
        b = -0.5 * (x - 100.0) ** 2
        return np.logaddexp(a, b) + np.log(0.5) - 0.5 * np.log(2 * np.pi)

    def sample_reference(rng, size):
        return np.sqrt(s2) * rng.standard_normal(size)

    return TargetModel(
        log_reference=log_reference,
        log_target_unnorm=log_target_unnorm,
        dim=1,
        sample_reference=sample_reference,
        name="bimodal",
    )


# ---------------------------------------------------------------------------
# Instructional examples: energy renews i.i.d. but global mixing fails
# ---------------------------------------------------------------------------


def disjoint_modes_target():
    """Two-mode target on [-15,-5] u [5,15] with a mode-local exact kernel.

    Returns (model, kernel_step).  kernel_step(x, rng) draws an exact sample
    from the mode containing x, so the energy is i.i.d. from its stationary
    law while the mode indicator never changes.
    """
    lo, hi = 5.0, 15.0

    def log_target_unnorm(x):
        x = np.asarray(x, dtype=float)
        inside = (np.abs(x) >= lo) & (np.abs(x) <= hi)
        with np.errstate(divide="ignore"):
            val = np.where(inside, -0.5 * (np.abs(x) - 10.0) ** 2, -np.inf)
        return val

    def log_reference(x):
        x = np.asarray(x, dtype=float)
        s2 = 200.0
        return -0.5 * x**2 / s2 - 0.5 * np.log(2 * np.pi * s2)

    model = TargetModel(
        log_reference=log_reference,
        log_target_unnorm=log_target_unnorm,
        dim=1,
        sample_reference=lambda rng, size: np.sqrt(200.0) * rng.standard_normal(size),
        name="disjoint_modes",
    )

    def kernel_step(x, rng):
        x = np.asarray(x, dtype=float)
        sign = np.where(x >= 0, 1.0, -1.0)
        draw = truncnorm.rvs(-5.0, 5.0, loc=10.0, scale=1.0,
                             size=x.shape, random_state=rng)
        return sign * draw

    return model, kernel_step


def thin_shell_target(a=100.0):
    """Target N(x2; a*x1, 1) on x1 in [0,1], with its two-block Gibbs kernel.

    Returns (model, gibbs_step).  The Gibbs sweep renews the energy i.i.d.,
    but x1 moves O(1/a) per step, so global mixing degrades as a grows.
    """
    if a <= 0:
        raise ValueError("shell parameter a must be positive")

    def log_target_unnorm(x):
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        inside = (x1 >= 0.0) & (x1 <= 1.0)
        with np.errstate(divide="ignore"):
            val = np.where(inside, -0.5 * (x2 - a * x1) ** 2, -np.inf)
        return val

    def log_reference(x):
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        s2 = a**2 + 1.0
        out = np.where((x1 >= 0.0) & (x1 <= 1.0), 0.0, -np.inf)
        return out - 0.5 * x2**2 / s2 - 0.5 * np.log(2 * np.pi * s2)

    def sample_reference(rng, size):
        x1 = rng.uniform(0.0, 1.0, size)
        x2 = np.sqrt(a**2 + 1.0) * rng.standard_normal(size)
        return np.stack([x1, x2], axis=-1)

    model = TargetModel(
        log_reference=log_reference,
        log_target_unnorm=log_target_unnorm,
        dim=2,
        sample_reference=sample_reference,
        name="thin_shell",
    )

    def gibbs_step(x, rng):
        x = np.asarray(x, dtype=float).copy()
        x1, x2 = x[..., 0], x[..., 1]
        # x2 | x1 ~ N(a*x1, 1)
        x2_new = a * x1 + rng.standard_normal(x1.shape)
        # x1 | x2 ~ N(x2/a, 1/a^2) truncated to [0, 1]
        mean = x2_new / a
        lo = (0.0 - mean) * a
        hi = (1.0 - mean) * a
        x1_new = truncnorm.rvs(lo, hi, loc=mean, scale=1.0 / a,
                               size=mean.shape, random_state=rng)
        return np.stack([x1_new, x2_new], axis=-1)

    return model, gibbs_step


def example_targets(a=100.0):
    """The two instructional (model, kernel) pairs keyed by name."""
    return {
        "disjoint_modes": disjoint_modes_target(),
        "thin_shell": thin_shell_target(a),
    }
