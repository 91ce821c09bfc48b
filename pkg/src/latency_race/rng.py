"""Explicitly seeded, splittable random streams.

Every stochastic operation takes a ``numpy.random.Generator``. Workers never
share a generator; they derive independent children with :func:`spawn`.
"""
from __future__ import annotations

import numpy as np


def make_stream(seed: int) -> np.random.Generator:
    """Root stream for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn(stream: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Derive ``n`` independent child streams from ``stream``."""
    return stream.spawn(n)
