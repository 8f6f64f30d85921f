"""Classical randomized leader election: the contrast case.

Every eligible processor flips a fair coin each round; heads stay eligible
unless nobody flipped heads (a wasted round, nobody eliminated — which also
covers the all-heads case, where the eligible set is unchanged). Expected
round count is O(log n) but there is no deterministic bound, so the runner
takes an explicit round budget and reports exhaustion as data, not as an
exception.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .election import Algorithm, ElectionTranscript
from .seeding import as_generator

DEFAULT_ROUND_BUDGET = 10_000


@dataclass(frozen=True)
class ClassicalRound:
    """One coin-flip round; flips are 1 for heads, 0 for tails, in slot order."""

    round_index: int
    k_before: int
    flips: tuple[int, ...]
    k_after: int

    def __post_init__(self):
        heads = sum(self.flips)
        expected = heads if heads >= 1 else self.k_before
        if self.k_after != expected:
            raise ValueError(
                f"k_after={self.k_after} inconsistent with {heads} heads of {self.k_before}"
            )


def run_classical_election(
    n: int,
    rng: np.random.Generator | int,
    max_rounds: int = DEFAULT_ROUND_BUDGET,
) -> ElectionTranscript:
    """Flip coins until one eligible processor remains or the budget runs out.

    A budget-exhausted transcript has ``leader_index=None`` and
    ``budget_exhausted=True``; all rounds played are still recorded.
    """
    if n < 1:
        raise ValueError(f"need at least one processor, got n={n}")
    if max_rounds < 1:
        raise ValueError(f"round budget must be >= 1, got {max_rounds}")
    rng, seed = as_generator(rng)
    eligible = list(range(n))
    rounds: list[ClassicalRound] = []

    while len(eligible) > 1 and len(rounds) < max_rounds:
        flips = tuple(int(f) for f in rng.integers(0, 2, size=len(eligible)))
        heads = [proc for proc, flip in zip(eligible, flips) if flip == 1]
        k_after = len(heads) if heads else len(eligible)
        rounds.append(
            ClassicalRound(
                round_index=len(rounds) + 1,
                k_before=len(eligible),
                flips=flips,
                k_after=k_after,
            )
        )
        if heads:
            eligible = heads

    exhausted = len(eligible) > 1
    return ElectionTranscript(
        n=n,
        algorithm=Algorithm.CLASSICAL,
        seed=seed,
        rounds=tuple(rounds),
        leader_index=None if exhausted else eligible[0],
        budget_exhausted=exhausted,
    )
