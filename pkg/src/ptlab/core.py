"""Domain types and annealing-path mathematics.

A tempering problem is a pair (reference pi_0, unnormalized target gamma_1)
connected by the linear path pi_beta(x) proportional to pi_0(x) exp(-beta V(x)),
where the energy is V(x) = log pi_0(x) - log gamma_1(x).  The unknown
normalizing constant of the target shifts V by a constant, which cancels in
every quantity computed here (swap probabilities, barriers, diagnostics).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class TargetModel:
    """A reference/target pair with log-densities and optional samplers.

    Parameters
    ----------
    log_reference : callable
        x -> log pi_0(x), normalized.  Must accept batched states (an array
        whose leading axis indexes replicas) and return a matching array.
    log_target_unnorm : callable
        x -> log gamma_1(x), unnormalized target log-density, batched.
    dim : int or None
        Dimension for continuous states; None for discrete/coded states.
    sample_reference : callable or None
        (rng, size) -> array of i.i.d. draws from pi_0.
    name : str
        Human-readable tag used in exports.
    """

    log_reference: Callable
    log_target_unnorm: Callable
    dim: Optional[int] = None
    sample_reference: Optional[Callable] = None
    name: str = "model"


@dataclass(frozen=True)
class AnnealingSchedule:
    """An ordered inverse-temperature grid 0 = beta_0 < ... < beta_N = 1."""

    betas: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.betas, dtype=float)
        object.__setattr__(self, "betas", b)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("schedule needs at least two points")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("schedule must start at 0 and end at 1")
        if np.any(np.diff(b) <= 0):
            raise ValueError("schedule must be strictly increasing")

    @property
    def n_intervals(self):
        return self.betas.size - 1

    @classmethod
    def uniform(cls, n):
        return cls(np.linspace(0.0, 1.0, n + 1))


def energy(model, x):
    """Energy V(x) = log pi_0(x) - log gamma_1(x), batched.

    Returns +inf where the target density vanishes inside the reference
    support.  NaN log-densities indicate an invalid model and raise.
    """
    lr = np.asarray(model.log_reference(x), dtype=float)
    lt = np.asarray(model.log_target_unnorm(x), dtype=float)
    if np.any(np.isnan(lr)) or np.any(np.isnan(lt)):
        raise ValueError("NaN log-density: invalid model at supplied state")
    with np.errstate(invalid="ignore"):
        v = lr - lt
    # lr finite on support; lt = -inf gives v = +inf, which is meaningful.
    if np.any(np.isnan(v)):
        raise ValueError("indeterminate energy (inf - inf)")
    return v


def log_path_density(model, beta, x):
    """Unnormalized log pi_beta(x) = log pi_0(x) - beta * V(x)."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    lr = np.asarray(model.log_reference(x), dtype=float)
    if beta == 0.0:
        return lr  # avoids 0 * inf at states of zero target density
    return lr - beta * energy(model, x)


def swap_acceptance(beta_lo, beta_hi, v_lo, v_hi):
    """Probability of accepting a swap between adjacent chains.

    alpha = exp(min{0, (beta_hi - beta_lo) * (v_hi - v_lo)}), vectorized
    over the energy arguments.  Infinite energies are resolved by the
    clamped formula (never NaN); NaN inputs raise.
    """
    if beta_hi <= beta_lo:
        raise ValueError("beta_hi must exceed beta_lo")
    v_lo = np.asarray(v_lo, dtype=float)
    v_hi = np.asarray(v_hi, dtype=float)
    if np.any(np.isnan(v_lo)) or np.any(np.isnan(v_hi)):
        raise ValueError("NaN energy in swap_acceptance")
    gap = beta_hi - beta_lo
    with np.errstate(invalid="ignore", over="ignore"):
        diff = v_hi - v_lo
        # inf - inf: both chains at zero target density; swap is a no-op,
        # accept with probability 1 (states are exchangeable).
        diff = np.where(np.isnan(diff), 0.0, diff)
        logalpha = np.minimum(0.0, gap * diff)
        alpha = np.exp(logalpha)
    return alpha if alpha.ndim else float(alpha)
