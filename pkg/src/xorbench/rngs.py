"""Seeded randomness used across the package.

Every stochastic operation draws from numpy's PCG64 generator
(``numpy.random.default_rng``), seeded with a 64-bit integer or a small
sequence of integers (used to derive independent streams, e.g.
``[model_seed, stream_id]``).

Gaussian variates are produced with the classic Box-Muller transform rather
than the generator's built-in normal sampler, so the exact draw order is
pinned down by this module alone:

    u1, u2 ~ U[0, 1)   (one uniform pair per Gaussian pair)
    r  = sqrt(-2 ln u1)        (u1 nudged away from 0)
    z0 = r sin(2 pi u2)
    z1 = r cos(2 pi u2)

Determinism is guaranteed within this implementation; bit-exactness across
other implementations is not a goal.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

SeedLike = Union[int, Sequence[int], np.random.Generator]


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Return a PCG64 generator; pass a Generator through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def normal_box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    """Draw ``n`` standard normals via Box-Muller (see module docstring).

    Pairs are generated from ``rng.random((ceil(n/2), 2))``; for odd ``n``
    the trailing cosine variate of the last pair is discarded.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return np.empty(0)
    m = (n + 1) // 2
    u = rng.random((m, 2))
    u1 = np.where(u[:, 0] > 0.0, u[:, 0], np.nextafter(0.0, 1.0))
    r = np.sqrt(-2.0 * np.log(u1))
    a = 2.0 * np.pi * u[:, 1]
    z = np.empty(2 * m)
    z[0::2] = r * np.sin(a)
    z[1::2] = r * np.cos(a)
    return z[:n]
