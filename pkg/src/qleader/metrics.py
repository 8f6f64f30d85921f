"""Consensus checking and trial-batch statistics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .election import Algorithm, ElectionTranscript
from .qsim import StateVector, expectation_z

CONSENSUS_TOL = 1e-9


@dataclass(frozen=True)
class TrialStats:
    """Aggregate over a homogeneous batch of seeded elections."""

    algorithm: Algorithm
    n: int
    trials: int
    mean_rounds: float
    max_rounds: int
    winner_histogram: tuple[int, ...]
    chi_square_uniformity: float
    budget_exhausted_count: int

    def __post_init__(self):
        if sum(self.winner_histogram) != self.trials - self.budget_exhausted_count:
            raise ValueError("histogram must count exactly the terminated trials")


def sigma_z_consensus(
    state: StateVector, tol: float = CONSENSUS_TOL
) -> tuple[bool, list[float]]:
    """Check whether every qubit carries the same Z expectation.

    Returns the verdict (max pairwise difference within ``tol``) together
    with the per-qubit expectation vector.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    expectations = [expectation_z(state, q) for q in range(state.num_qubits)]
    spread = max(expectations) - min(expectations) if expectations else 0.0
    return spread <= tol, expectations


def summarize_trials(transcripts: Sequence[ElectionTranscript]) -> TrialStats:
    """Exact counts and moments over a batch, order-independent.

    The chi-square statistic compares the winner histogram against the
    uniform distribution over the n processors (terminated trials only).
    """
    if not transcripts:
        raise ValueError("cannot summarize an empty batch")
    algorithm = transcripts[0].algorithm
    n = transcripts[0].n
    for t in transcripts:
        if t.algorithm is not algorithm or t.n != n:
            raise ValueError("batch must be homogeneous in algorithm and n")

    round_counts = [len(t.rounds) for t in transcripts]
    histogram = [0] * n
    exhausted = 0
    for t in transcripts:
        if t.budget_exhausted:
            exhausted += 1
        else:
            histogram[t.leader_index] += 1

    terminated = len(transcripts) - exhausted
    chi_square = 0.0
    if terminated:
        expected = terminated / n
        chi_square = sum((c - expected) ** 2 / expected for c in histogram)

    return TrialStats(
        algorithm=algorithm,
        n=n,
        trials=len(transcripts),
        mean_rounds=sum(round_counts) / len(round_counts),
        max_rounds=max(round_counts),
        winner_histogram=tuple(histogram),
        chi_square_uniformity=chi_square,
        budget_exhausted_count=exhausted,
    )
