"""Seed plumbing built on numpy's counter-based Philox generator.

Every random draw in the package flows through ``make_rng`` so that any
operation is reproducible from (seed, stream path) alone.  Substreams are
split with ``SeedSequence`` spawn keys, which keeps trial-level work
order-independent under any worker pool.
"""

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Return a Generator for ``seed``, optionally split into a substream.

    The same (seed, stream) pair always yields the same draws; distinct
    stream paths are statistically independent.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *stream: int) -> int:
    """Deterministic child seed for (seed, stream), as a plain uint64 value."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
