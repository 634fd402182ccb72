"""Reproducible random streams keyed by (seed, realization index)."""

from __future__ import annotations

import numpy as np

__all__ = ["make_rng", "realization_seeds"]

_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, index: int | None = None) -> np.random.Generator:
    """PCG64 generator for ``seed``; ``index`` selects an independent child stream."""
    seed = int(seed) & _SEED_MASK
    ss = np.random.SeedSequence(seed) if index is None else np.random.SeedSequence(seed, spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def realization_seeds(seed: int, count: int) -> list[int]:
    """64-bit per-realization seeds derived from a master seed.

    The list is a pure function of ``seed``; the first ``k`` entries do not
    depend on ``count``.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    ss = np.random.SeedSequence(int(seed) & _SEED_MASK)
    return [int(child.generate_state(1, np.uint64)[0]) for child in ss.spawn(count)]
