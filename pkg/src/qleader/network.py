"""Simulated anonymous network.

Processors have no identities: they share one global quantum register
("sending a qubit" is index assignment, not state transfer) and a reliable
synchronous broadcast channel that delivers a multiset, never sender
information. Rounds are barriers; everything here is pure bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError
from .qsim import QUBIT_CAPACITY


@dataclass(frozen=True)
class NetworkConfig:
    n: int
    seed: int = 0
    qubits_per_processor: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one processor, got n={self.n}")
        if not 1 <= self.qubits_per_processor <= 3:
            raise ValueError(
                f"qubits_per_processor must be 1-3, got {self.qubits_per_processor}"
            )
        if self.n * self.qubits_per_processor > QUBIT_CAPACITY:
            raise CapacityError(
                f"{self.n} processors x {self.qubits_per_processor} qubits "
                f"exceeds the cap of {QUBIT_CAPACITY}"
            )


@dataclass(frozen=True)
class ProcessorRegisters:
    """Global-register indices of one processor's qubits for a round."""

    r: int
    s: int | None = None
    t: int | None = None


@dataclass(frozen=True)
class RegisterLayout:
    """Role-contiguous qubit assignment for the eligible processors of a round."""

    assignments: dict[int, ProcessorRegisters]
    num_qubits: int


@dataclass(frozen=True)
class BroadcastRound:
    """One anonymized broadcast: the delivered multiset, nothing else."""

    payload: tuple[int, ...]
    round_index: int

    def __post_init__(self):
        if tuple(sorted(self.payload)) != self.payload:
            raise ValueError("payload must be in canonical (sorted) multiset form")


def assign_registers(
    config: NetworkConfig, eligible: Sequence[int], registers_per_processor: int
) -> RegisterLayout:
    """Lay out qubit indices for the eligible set, one contiguous block per role.

    With k eligible processors the i-th one gets R = i, S = k + i, T = 2k + i
    (S and T only when ``registers_per_processor`` covers them).
    """
    if not 1 <= registers_per_processor <= 3:
        raise ValueError(
            f"registers_per_processor must be 1-3, got {registers_per_processor}"
        )
    k = len(eligible)
    total = k * registers_per_processor
    if total > QUBIT_CAPACITY:
        raise CapacityError(
            f"{k} processors x {registers_per_processor} registers "
            f"exceeds the cap of {QUBIT_CAPACITY}"
        )
    assignments = {}
    for slot, proc in enumerate(eligible):
        assignments[proc] = ProcessorRegisters(
            r=slot,
            s=k + slot if registers_per_processor >= 2 else None,
            t=2 * k + slot if registers_per_processor >= 3 else None,
        )
    return RegisterLayout(assignments=assignments, num_qubits=total)


def broadcast(values: Iterable[int]) -> tuple[int, ...]:
    """Deliver one value per eligible processor as an anonymous multiset.

    The result is canonically sorted, so any permutation of senders yields
    the identical object, and every processor receives the same multiset.
    """
    return tuple(sorted(values))
