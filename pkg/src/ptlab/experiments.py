"""Desk-scale experiment recipes wiring the modules together.

Each function returns a plain dict of arrays/floats so the CLI can dump it
as JSON/CSV and the test-suite can assert on it directly.
"""

import numpy as np

from .core import AnnealingSchedule
from .diagnostics import empirical_tv_discrete
from .engine import PTConfig, rejection_rates, run_pt
from .explorers import (
    GaussianPathExplorer,
    IIDReferenceExplorer,
    IdealGridExplorer,
    IdealIsingExplorer,
    IsingGibbsExplorer,
)
from .gcb import estimate_gcb, tune_schedule, tuning_rounds
from .models import (
    N_SITES,
    bimodal_pair,
    codes_from_spins,
    ising_exact_distribution,
    ising_model,
)
from . import bounds, walks
from .rng import make_stream


# ---------------------------------------------------------------------------
# Ising total-variation experiment
# ---------------------------------------------------------------------------


def _ising_kernels(n_chains, explorer, sweeps=3):
    if explorer == "gibbs":
        shared = IsingGibbsExplorer(sweeps=sweeps)
        kernels = [shared] * n_chains
    elif explorer == "ideal":
        shared = IdealIsingExplorer()
        kernels = [shared] * n_chains
    else:
        raise ValueError(f"unknown explorer {explorer!r}")
    model = ising_model()
    kernels = [IIDReferenceExplorer(model)] + kernels[1:]
    return model, kernels


def tune_ising_schedule(n=5, explorer="gibbs", rounds=3, base_iters=128,
                        tune_replicas=256, seed=0):
    """Equi-acceptance schedule for the Ising path via budget-doubling rounds."""
    model, kernels = _ising_kernels(n + 1, explorer)

    def run_fn(schedule, n_iters, run_seed):
        cfg = PTConfig("nrpt", schedule, n_iters=n_iters,
                       n_replicas=tune_replicas, seed=run_seed,
                       record_indices=False, record_energies=False)
        trace = run_pt(cfg, model, kernels)
        return rejection_rates(trace, burn_in=0.2)

    schedule, lam_hat, barrier = tuning_rounds(run_fn, n, rounds=rounds,
                                               base_iters=base_iters, seed=seed)
    return schedule, lam_hat, barrier


def ising_tv_experiment(n=5, n_iters=25, n_replicas=50_000, init="all-minus",
                        explorer="gibbs", schedule=None, seed=0):
    """The finite-chain TV validation on the 4x4 Ising target.

    Runs `n_replicas` independent NRPT instances, compares the empirical
    distribution of the target chain at every iteration to the exact
    enumeration of the target, and reports the hitting-time TV bound
    computed from the run's own mean rejection rate.
    """
    if schedule is None:
        schedule, _, _ = tune_ising_schedule(n=n, explorer=explorer, seed=seed)
    model, kernels = _ising_kernels(n + 1, explorer)
    if init == "all-minus":
        init_states = [np.full((n_replicas, N_SITES), -1, dtype=np.int8)
                       for _ in range(n + 1)]
    elif init == "random":
        rng = make_stream(seed, chain=999)
        init_states = [model.sample_reference(rng, n_replicas)
                       for _ in range(n + 1)]
    else:
        raise ValueError(f"unknown init {init!r}")
    cfg = PTConfig("nrpt", schedule, n_iters=n_iters, n_replicas=n_replicas,
                   seed=seed + 1, record_indices=True, record_energies=True,
                   record_target_states=True)
    trace = run_pt(cfg, model, kernels, init_states=init_states)
    stats = rejection_rates(trace, burn_in=0.2)
    r_bar = float(np.mean(stats.rejection))
    exact = ising_exact_distribution(1.0)
    ts = np.arange(1, n_iters + 1)
    tv = np.empty(ts.size)
    floor = np.empty(ts.size)
    for i, t in enumerate(ts):
        codes = codes_from_spins(trace.target_states[t - 1])
        tv[i], floor[i] = empirical_tv_discrete(codes, exact)
    bound = bounds.tv_bound_finite("nrpt", n, r_bar, ts)
    return {
        "t": ts,
        "tv": tv,
        "noise_floor": floor,
        "bound": bound,
        "rejection_rates": stats.rejection,
        "r_bar": r_bar,
        "lambda_hat": stats.barrier_estimate,
        "schedule": schedule.betas,
        "n_replicas": n_replicas,
        "init": init,
        "explorer": explorer,
    }


# ---------------------------------------------------------------------------
# Bimodal Gaussian experiments
# ---------------------------------------------------------------------------


def bimodal_explorer():
    """Exact grid sampler along the bimodal path (idealized exploration)."""
    model = bimodal_pair()
    return model, IdealGridExplorer(model, lo=-600.0, hi=600.0)


def tune_bimodal_schedule(n=12, rounds=6, base_iters=64, tune_replicas=1000,
                          seed=0):
    """Equi-acceptance schedule for the bimodal path."""
    model, grid = bimodal_explorer()
    kernels = [IIDReferenceExplorer(model)] + [grid] * n

    def run_fn(schedule, n_iters, run_seed):
        cfg = PTConfig("nrpt", schedule, n_iters=n_iters,
                       n_replicas=tune_replicas, seed=run_seed,
                       record_indices=False, record_energies=False)
        trace = run_pt(cfg, model, kernels)
        return rejection_rates(trace, burn_in=0.2)

    schedule, lam_hat, barrier = tuning_rounds(run_fn, n, rounds=rounds,
                                               base_iters=base_iters, seed=seed)
    return schedule, lam_hat, barrier


def bimodal_gcb_estimate(n=12, n_iters=256, n_replicas=5000, seed=0):
    """Barrier estimate for the bimodal pair from a tuned equi-acceptance run."""
    schedule, _, _ = tune_bimodal_schedule(n=n, seed=seed)
    model, grid = bimodal_explorer()
    kernels = [IIDReferenceExplorer(model)] + [grid] * n
    cfg = PTConfig("nrpt", schedule, n_iters=n_iters, n_replicas=n_replicas,
                   seed=seed + 100, record_indices=False, record_energies=False)
    trace = run_pt(cfg, model, kernels)
    stats = rejection_rates(trace, burn_in=0.2)
    lam_hat, barrier = estimate_gcb(stats, schedule)
    return {
        "lambda_hat": lam_hat,
        "rejection_rates": stats.rejection,
        "schedule": schedule.betas,
        "barrier_knots": barrier.knots,
        "barrier_values": barrier.values,
    }


def bimodal_clt_runs(n_runs=500, n=6, n_iters=2000, seed=0, schedule=None):
    """Standardized batch-mean statistics of sign(x) on the target chain.

    Runs `n_runs` independent NRPT instances (as the replica dimension) and
    returns one standardized statistic per run:
    z = sqrt(T) * mean(f) / sigma_hat with sigma_hat from batch means.
    """
    from .diagnostics import asymptotic_variance

    model, grid = bimodal_explorer()
    kernels = [IIDReferenceExplorer(model)] + [grid] * n
    if schedule is None:
        schedule, _, _ = tune_bimodal_schedule(n=n, seed=seed)
    cfg = PTConfig("nrpt", schedule, n_iters=n_iters, n_replicas=n_runs,
                   seed=seed + 200, record_indices=False,
                   record_energies=False, record_target_states=True)
    trace = run_pt(cfg, model, kernels)
    f = np.sign(trace.target_states)  # (T, runs); target is symmetric, E f = 0
    zs = np.empty(n_runs)
    for r in range(n_runs):
        sig2 = asymptotic_variance(f[:, r])
        zs[r] = np.sqrt(n_iters) * f[:, r].mean() / np.sqrt(sig2)
    return zs


# ---------------------------------------------------------------------------
# Finite-chain to infinite-chain convergence
# ---------------------------------------------------------------------------


def finite_vs_infinite(lam=4.0, n_values=(10, 30, 100), t_grid=None,
                       n_rep=200_000, seed=0):
    """Scaled finite-chain tails against the continuum limits.

    Non-reversible: exact tail at floor(t N) with r = lam/N versus the
    Monte Carlo survival of the continuum persistent walk; reversible:
    exact tail at floor(t N^2) versus the Brownian series.
    Returns sup-differences per N for both schemes.
    """
    if t_grid is None:
        t_grid = np.linspace(1.0, 20.0, 39)
    pdmp = walks.survival_curve(
        lambda rng, size: walks.sim_pdmp(lam, rng, size), t_grid, n_rep, seed
    )
    out = {"t": t_grid, "pdmp_survival": pdmp.survival,
           "pdmp_stderr": pdmp.stderr, "lam": lam}
    t_bm = np.linspace(0.05, 3.0, 30)
    series = bounds.rpt_infinite_tail(t_bm)
    out["t_bm"] = t_bm
    out["bm_series"] = series
    for n in n_values:
        r = lam / n
        steps = np.floor(t_grid * n).astype(int)
        tails = bounds.hitting_tail("nrpt", n, r, steps)
        out[f"nrpt_sup_diff_N{n}"] = float(np.max(np.abs(tails - pdmp.survival)))
        steps2 = np.floor(t_bm * n * n).astype(int)
        tails2 = bounds.hitting_tail("rpt", n, r, steps2)
        out[f"rpt_sup_diff_N{n}"] = float(np.max(np.abs(tails2 - series)))
    return out


# ---------------------------------------------------------------------------
# Idealized-exploration engine validation
# ---------------------------------------------------------------------------


def gaussian_equal_rate_mu(n, r):
    """Mean shift giving per-pair rejection r on the uniform N-interval
    schedule of the N(0,1) -> N(mu,1) path: r = 1 - 2 Phi(-mu/(N sqrt(2)))."""
    from scipy.special import ndtri

    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    return -n * np.sqrt(2.0) * ndtri((1.0 - r) / 2.0)


def index_process_hitting_times(scheme, n, r, n_replicas, n_iters, seed=0):
    """First times the machine starting at the reference reaches the target
    slot, from a PT run with exact path samplers (idealized exploration).

    Unfinished replicas are reported as n_iters + 1.
    """
    mu = gaussian_equal_rate_mu(n, r)
    from .models import gaussian_shift_pair

    model = gaussian_shift_pair(mu)
    kernels = [GaussianPathExplorer(mu)] * (n + 1)
    cfg = PTConfig(scheme, AnnealingSchedule.uniform(n), n_iters=n_iters,
                   n_replicas=n_replicas, seed=seed, record_indices=True,
                   record_energies=False)
    trace = run_pt(cfg, model, kernels)
    slot0 = trace.index[:, 0, :]  # (T+1, R)
    hit = slot0 == n
    first = np.where(hit.any(axis=0), hit.argmax(axis=0), n_iters + 1)
    return first.astype(np.int64), trace
