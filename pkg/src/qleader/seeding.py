"""Deterministic seed derivation for reproducible trial batches."""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer: a fixed, well-mixed 64-bit hash."""
    z = x & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def trial_seed(seed: int, index: int) -> int:
    """Per-trial seed: element ``index`` of the SplitMix64 stream started at ``seed``.

    Stable across runs and platforms, so trials can execute in any order (or
    in parallel) and still reproduce bit-identical transcripts.
    """
    return splitmix64((seed + (index + 1) * _GOLDEN) & _MASK64)


def as_generator(rng: np.random.Generator | int) -> tuple[np.random.Generator, int | None]:
    """Accept a Generator or a plain integer seed.

    Returns the generator plus the seed when one was given (recorded in
    transcripts for reproducibility bookkeeping; None for opaque generators).
    """
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        return np.random.default_rng(seed), seed
    return rng, None
