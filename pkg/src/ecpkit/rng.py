"""Seeded random streams.

Every randomized routine takes a ``numpy.random.Generator``.  Streams are
derived from an explicit integer seed plus optional stream indices (e.g. a
trial number) through ``SeedSequence``, so the same ``(seed, index)`` always
yields the same PCG64 stream.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


def sample_error(F, n: int, t: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform support of size ``t`` with uniform nonzero values."""
    e = np.zeros(n, dtype=np.int64)
    support = rng.choice(n, size=t, replace=False)
    e[support] = F.random(rng, t, nonzero=True)
    return e
