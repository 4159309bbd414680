"""Reproducible random number streams.

Every stochastic routine in this package draws from a stream created here.
Streams are keyed by (master seed, chain index, replica index) through
``numpy.random.SeedSequence`` spawn keys, so distinct (chain, replica)
pairs are statistically independent and any run is bit-reproducible from
its seed alone, regardless of how work is scheduled.
"""

import numpy as np


def make_stream(seed, chain=0, replica=0):
    """Return a Generator for the (chain, replica) substream of `seed`.

    Parameters
    ----------
    seed : int
        Master seed (any non-negative integer; 64-bit range is fine).
    chain : int
        Chain index of the stream.
    replica : int
        Replica (or replica-block) index of the stream.

    Returns
    -------
    numpy.random.Generator
        Philox-backed generator; counter-based, so substreams are cheap.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(chain, replica))
    return np.random.Generator(np.random.Philox(ss))


def replica_streams(seed, chain, n_blocks):
    """Streams for `n_blocks` replica blocks of one chain.

    Blocks are independent, so batched simulations are reproducible no
    matter how replicas are grouped into vectorized blocks.
    """
    return [make_stream(seed, chain, b) for b in range(n_blocks)]
