"""ptlab: a parallel-tempering laboratory.

Non-reversible and reversible parallel tempering with schedule tuning,
communication-barrier estimation, exact hitting-time tails, infinite-chain
limits, and Monte Carlo validation experiments.
"""

__version__ = "0.1.0"
