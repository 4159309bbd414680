"""Monte Carlo simulators for the four hitting-time processes.

Each simulator draws a batch of independent traversal times: the discrete
persistent walk (non-reversible communication), the lazy reflected walk
(reversible communication), the continuum persistent walk (a piecewise
deterministic process on [0,1] with direction flips at rate Lambda), and
reflected Brownian motion on [0,1].  Batches are vectorized over replicas
with masked updates of the still-alive subset.
"""

from dataclasses import dataclass

import numpy as np

from .rng import make_stream


def sim_persistent_walk(n, r, rng, size=1, t_cap=10_000_000):
    """Hitting times of the persistent walk from (0, +1) to (N, +1).

    Each step the walker at an interior state moves one unit in its current
    direction with probability 1-r, otherwise it stays and flips direction.
    The state (0, -1) spends one deterministic step turning around.  The
    walk is absorbed on arrival at position N (necessarily moving upward).
    """
    if n < 1 or not 0.0 <= r < 1.0:
        raise ValueError("need n >= 1 and r in [0, 1)")
    # live arrays stay compacted; ids maps live slots back to output slots
    ids = np.arange(size)
    pos = np.zeros(size, dtype=np.int32)
    eps = np.ones(size, dtype=np.int32)
    times = np.zeros(size, dtype=np.int64)
    q = np.float32(1.0 - r)
    t = 0
    while ids.size:
        t += 1
        if t > t_cap:
            raise RuntimeError("walk exceeded step cap")
        turning = (pos == 0) & (eps == -1)
        move = rng.random(ids.size, dtype=np.float32) < q
        move &= ~turning
        pos += np.where(move, eps, 0)
        np.copyto(eps, np.where(move, eps, -eps))
        eps[turning] = 1
        hit = pos == n
        if hit.any():
            times[ids[hit]] = t
            keep = ~hit
            ids, pos, eps = ids[keep], pos[keep], eps[keep]
    return times


def sim_seo_walk(n, r, rng, size=1, t_cap=10_000_000):
    """Hitting times of the lazy reflected walk from 0 to N.

    Each step the walker moves +-1 with probability (1-r)/2 each and holds
    with probability r; a downward move at 0 is a hold, so the boundary
    holds with total probability (1+r)/2.
    """
    if n < 1 or not 0.0 <= r < 1.0:
        raise ValueError("need n >= 1 and r in [0, 1)")
    ids = np.arange(size)
    pos = np.zeros(size, dtype=np.int32)
    times = np.zeros(size, dtype=np.int64)
    half = np.float32((1.0 - r) / 2.0)
    hi = np.float32(1.0 - half)
    t = 0
    while ids.size:
        t += 1
        if t > t_cap:
            raise RuntimeError("walk exceeded step cap")
        u = rng.random(ids.size, dtype=np.float32)
        pos += u < half
        pos -= u >= hi
        np.maximum(pos, 0, out=pos)
        hit = pos == n
        if hit.any():
            times[ids[hit]] = t
            keep = ~hit
            ids, pos = ids[keep], pos[keep]
    return times


def sim_pdmp(lam, rng, size=1):
    """Traversal times of the continuum persistent walk on [0, 1].

    Unit speed, direction flips at exponential rate lam, reflection at 0,
    absorption on arrival at 1.  Simulated exactly event-by-event (no
    discretization error).  lam = 0 gives exactly 1.0.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    pos = np.zeros(size)
    direction = np.ones(size)
    times = np.zeros(size)
    alive = np.ones(size, dtype=bool)
    while alive.any():
        idx = np.flatnonzero(alive)
        if lam == 0.0:
            times[idx] += 1.0 - pos[idx]
            alive[idx] = False
            break
        flip = rng.exponential(1.0 / lam, idx.size)
        d = direction[idx]
        dist = np.where(d > 0, 1.0 - pos[idx], pos[idx])
        reaches = flip >= dist
        # reaches upper boundary -> absorbed; lower boundary -> reflect
        up = reaches & (d > 0)
        down = reaches & (d < 0)
        mid = ~reaches
        times[idx] += np.where(reaches, dist, flip)
        sub = idx[up]
        alive[sub] = False
        sub = idx[down]
        pos[sub] = 0.0
        direction[sub] = 1.0
        sub = idx[mid]
        pos[sub] = pos[sub] + direction[sub] * flip[mid]
        direction[sub] = -direction[sub]
    return times


def sim_reflected_bm(rng, size=1, dt=1e-4, t_max=10.0):
    """First-passage times to 1 of reflected Brownian motion from 0.

    Euler steps of variance dt with folding reflection at 0 and a
    Brownian-bridge crossing correction at the absorbing boundary 1.
    Trajectories still alive at t_max are reported as +inf.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    sdt = np.float32(np.sqrt(dt))
    x = np.zeros(size, dtype=np.float32)
    times = np.full(size, np.inf)
    alive_idx = np.arange(size)
    n_steps = int(round(t_max / dt))
    for step in range(1, n_steps + 1):
        m = alive_idx.size
        if m == 0:
            break
        z = rng.standard_normal(m, dtype=np.float32)
        x_new = np.abs(x + sdt * z)
        hit = x_new >= 1.0
        # bridge correction: crossing probability between sub-1 endpoints.
        # exp(-2(1-x)(1-x')/dt) underflows unless both endpoints sit within
        # a few step widths of the boundary, so only that fringe is tested.
        fringe = 20.0 * sdt
        sub = np.flatnonzero(~hit & (x_new > 1.0 - fringe) & (x > 1.0 - fringe))
        if sub.size:
            p = np.exp(-2.0 * (1.0 - x[sub]) * (1.0 - x_new[sub]) / np.float32(dt))
            hit[sub] = rng.random(sub.size) < p
        if hit.any():
            times[alive_idx[hit]] = step * dt
            keep = ~hit
            alive_idx = alive_idx[keep]
            x = x_new[keep]
        else:
            x = x_new
    return times


@dataclass(frozen=True)
class SurvivalCurve:
    """Empirical Pr(tau > t) on a time grid with binomial standard errors."""

    t_grid: np.ndarray
    survival: np.ndarray
    stderr: np.ndarray
    n_rep: int


def survival_curve(simulator, t_grid, n_rep, seed, chunk=200_000):
    """Estimate a survival curve from a batch simulator.

    Parameters
    ----------
    simulator : callable
        (rng, size) -> array of hitting times.
    t_grid : array
        Times at which Pr(tau > t) is evaluated.
    n_rep : int
        Total number of replicates (>= 100).
    seed : int
        Master seed; replicate blocks use independent substreams keyed by
        block index, so a (seed, chunk) pair fully determines the curve.
    """
    if n_rep < 100:
        raise ValueError("need at least 100 replicates")
    t_grid = np.asarray(t_grid, dtype=float)
    counts = np.zeros(t_grid.size, dtype=np.int64)
    done = 0
    block = 0
    while done < n_rep:
        m = min(chunk, n_rep - done)
        rng = make_stream(seed, chain=0, replica=block)
        samples = np.sort(np.asarray(simulator(rng, m), dtype=float))
        # number of samples strictly greater than each grid time
        counts += m - np.searchsorted(samples, t_grid, side="right")
        done += m
        block += 1
    surv = counts / n_rep
    se = np.sqrt(np.maximum(surv * (1.0 - surv), 0.0) / n_rep)
    return SurvivalCurve(t_grid=t_grid, survival=surv, stderr=se, n_rep=n_rep)
