"""Deterministic random-stream derivation.

All randomness in the package flows through numpy's PCG64 bit generator,
which is platform independent. Experiments derive one child seed per
(replicate, purpose) pair from the master seed with ``child_seed``, so any
replicate can be rerun in isolation and parallel execution cannot change
results.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int | np.random.Generator) -> np.random.Generator:
    """Return a PCG64 generator; an existing Generator passes through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def child_seed(master_seed: int, *key: int) -> int:
    """Derive a 64-bit child seed from a master seed and an index path.

    The derivation is ``SeedSequence((master_seed, *key))``, so distinct key
    tuples give statistically independent streams.
    """
    ss = np.random.SeedSequence(tuple(int(k) for k in (master_seed, *key)))
    return int(ss.generate_state(1, np.uint64)[0])
