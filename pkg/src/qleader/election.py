"""Leader-election protocols as round-based state machines.

Three quantum protocols over the simulated anonymous network:

* one-shot W-state election (every processor measures one qubit of W_n),
* the consistency-check election (repeated rounds of consistency oracle +
  symmetry breaking until one candidate remains),
* a pairwise tournament whose coin is the two-party consistency election.

Every protocol decision a processor makes is a function of its local
measurement and the broadcast multiset only — no processor index ever
enters a transition, which is what makes the protocols anonymous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .circuits import (
    PhaseParams,
    build_even_symmetry_breaker,
    build_odd_symmetry_breaker,
    consistency_oracle,
    prepare_uniform_register,
    prepare_w_state,
)
from .errors import CapacityError, ProtocolViolation
from .network import NetworkConfig, assign_registers, broadcast
from .qsim import (
    StateVector,
    UnitaryMatrix,
    apply_basis_permutation,
    apply_unitary,
    basis_state,
    measure_qubits,
    tensor_product,
)
from .seeding import as_generator

TANI_CAPACITY = 8  # 3 qubits per processor worst case on a 24-qubit backend
W_STATE_CAPACITY = 20
TOURNAMENT_CAPACITY = 64

# |r t> -> |r, t XOR r>; first target (R) is the control.
_CNOT = UnitaryMatrix(
    np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    )
)


class Status(Enum):
    ELIGIBLE = "eligible"
    INELIGIBLE = "ineligible"


class Algorithm(Enum):
    W_STATE = "w-state"
    TANI2 = "tani2"
    CLASSICAL = "classical"
    TOURNAMENT = "tournament"


class Branch(Enum):
    INCONSISTENT = "inconsistent"
    CONSISTENT_EVEN = "consistent_even"
    CONSISTENT_ODD = "consistent_odd"
    W_STATE = "w_state"


_TANI_BRANCHES = (Branch.INCONSISTENT, Branch.CONSISTENT_EVEN, Branch.CONSISTENT_ODD)


@dataclass
class ProcessorState:
    """One processor's local view: candidacy plus its current register indices."""

    status: Status = Status.ELIGIBLE
    r_qubit: int | None = None
    s_qubit: int | None = None
    t_qubit: int | None = None
    last_measured: int | None = None


@dataclass(frozen=True)
class RoundRecord:
    """Auditable record of a single protocol round."""

    round_index: int
    k_before: int
    branch: Branch
    s_bit: int | None
    measured_values: tuple[int, ...]
    k_after: int

    def __post_init__(self):
        if self.branch in _TANI_BRANCHES:
            if not 1 <= self.k_after < self.k_before:
                raise ProtocolViolation(
                    f"round {self.round_index}: k went {self.k_before} -> {self.k_after}, "
                    "expected a strict decrease to a nonempty set"
                )
            if (self.branch is Branch.INCONSISTENT) != (self.s_bit == 0):
                raise ValueError("inconsistent branch must coincide with s_bit = 0")
        if len(self.measured_values) != self.k_before:
            raise ValueError("one measured value per eligible processor required")


@dataclass(frozen=True)
class TournamentRound:
    """One pairing round: a batch of two-party matches plus at most one bye."""

    round_index: int
    k_before: int
    matches: tuple[RoundRecord, ...]
    byes: int
    k_after: int

    def __post_init__(self):
        if self.k_before != 2 * len(self.matches) + self.byes:
            raise ValueError("pairing does not cover the active set")
        if self.k_after != len(self.matches) + self.byes:
            raise ValueError("each match must produce exactly one winner")


@dataclass(frozen=True)
class ElectionTranscript:
    """Full history of one election, sufficient to replay every decision."""

    n: int
    algorithm: Algorithm
    seed: int | None
    rounds: tuple
    leader_index: int | None
    budget_exhausted: bool = False

    def __post_init__(self):
        if (self.leader_index is None) != self.budget_exhausted:
            raise ValueError("a transcript has a leader exactly when it terminated")
        if self.algorithm is Algorithm.W_STATE and len(self.rounds) != 1:
            raise ValueError("W-state elections take exactly one round")
        if self.algorithm is Algorithm.TANI2 and len(self.rounds) > max(self.n - 1, 0):
            raise ValueError(f"round count {len(self.rounds)} exceeds the n-1 bound")


def survives(value: int, branch: Branch, payload: tuple[int, ...]) -> bool:
    """Per-processor survival rule: a pure function of (local value, multiset).

    Odd consistent branch keeps the holders of the largest measured pair
    value (R is the high bit, so 11 > 10 > 01 > 00); every other branch
    keeps the processors that measured 1.
    """
    if branch is Branch.CONSISTENT_ODD:
        return value == max(payload)
    return value == 1


def count_survivors(payload: tuple[int, ...], branch: Branch) -> int:
    """Eligible count after the round, derived from the broadcast multiset alone."""
    return sum(1 for value in payload if survives(value, branch, payload))


def run_w_state_election(
    n: int, rng: np.random.Generator | int
) -> ElectionTranscript:
    """One-shot election: share W_n, measure, the processor that sees 1 leads."""
    if n < 1:
        raise ValueError(f"need at least one processor, got n={n}")
    if n > W_STATE_CAPACITY:
        raise CapacityError(f"W-state election capped at {W_STATE_CAPACITY} processors")
    rng, seed = as_generator(rng)
    config = NetworkConfig(n=n, seed=seed or 0, qubits_per_processor=1)
    layout = assign_registers(config, range(n), 1)
    processors = [ProcessorState(r_qubit=layout.assignments[p].r) for p in range(n)]

    outcome = measure_qubits(prepare_w_state(n), [p.r_qubit for p in processors], rng)
    values = tuple(int(b) for b in outcome.bits)
    if sum(values) != 1:
        raise ProtocolViolation(f"W-state measurement yielded {sum(values)} ones")
    payload = broadcast(values)
    for proc, value in zip(processors, values):
        proc.last_measured = value
        if not survives(value, Branch.W_STATE, payload):
            proc.status = Status.INELIGIBLE

    record = RoundRecord(
        round_index=1,
        k_before=n,
        branch=Branch.W_STATE,
        s_bit=None,
        measured_values=values,
        k_after=1,
    )
    return ElectionTranscript(
        n=n,
        algorithm=Algorithm.W_STATE,
        seed=seed,
        rounds=(record,),
        leader_index=values.index(1),
    )


def run_tani_round(
    k: int, rng: np.random.Generator | int, *, round_index: int = 1
) -> RoundRecord:
    """One consistency-check round over k eligible processors.

    Builds the uniform R register with a zeroed S register, applies the
    consistency oracle, and measures S (all bits agree by construction).
    On the inconsistent branch the R bits are measured directly; on the
    consistent branch the even or odd symmetry breaker runs first. The
    measured values are broadcast and the survivor count is strictly
    between 0 and k — guaranteed by the zero-amplitude identities.
    """
    if k < 2:
        raise ValueError(f"a round needs at least 2 eligible processors, got k={k}")
    rng, _ = as_generator(rng)
    registers = 3 if k % 2 else 2
    config = NetworkConfig(n=k, qubits_per_processor=registers)
    layout = assign_registers(config, range(k), registers)
    regs = [layout.assignments[slot] for slot in range(k)]

    state = tensor_product(prepare_uniform_register(k), basis_state(k))
    state = apply_basis_permutation(state, consistency_oracle(k))

    s_outcome = measure_qubits(state, [p.s for p in regs], rng)
    if len(set(s_outcome.bits)) != 1:
        raise ProtocolViolation(f"S register disagrees: {s_outcome.bits}")
    s_bit = int(s_outcome.bits[0])
    state = s_outcome.post_state

    if s_bit == 0:
        branch = Branch.INCONSISTENT
        values = _measure_r_bits(state, regs, rng)
    elif k % 2 == 0:
        branch = Branch.CONSISTENT_EVEN
        u = build_even_symmetry_breaker(PhaseParams(k))
        for p in regs:
            state = apply_unitary(state, u, [p.r])
        values = _measure_r_bits(state, regs, rng)
    else:
        branch = Branch.CONSISTENT_ODD
        state = tensor_product(state, basis_state(k))  # T block, |0...0>
        for p in regs:
            state = apply_unitary(state, _CNOT, [p.r, p.t])
        v = build_odd_symmetry_breaker(PhaseParams(k))
        for p in regs:
            state = apply_unitary(state, v, [p.r, p.t])
        outcome = measure_qubits(state, [q for p in regs for q in (p.r, p.t)], rng)
        values = tuple(int(outcome.bits[2 * i : 2 * i + 2], 2) for i in range(k))

    payload = broadcast(values)
    k_after = count_survivors(payload, branch)
    if not 1 <= k_after < k:
        raise ProtocolViolation(
            f"symmetry breaking failed: {k_after} of {k} survivors on branch {branch.value}"
        )
    return RoundRecord(
        round_index=round_index,
        k_before=k,
        branch=branch,
        s_bit=s_bit,
        measured_values=values,
        k_after=k_after,
    )


def _measure_r_bits(state: StateVector, regs, rng) -> tuple[int, ...]:
    outcome = measure_qubits(state, [p.r for p in regs], rng)
    return tuple(int(b) for b in outcome.bits)


def run_tani_election(
    n: int, rng: np.random.Generator | int
) -> ElectionTranscript:
    """Repeat consistency-check rounds over the shrinking eligible set.

    Terminates in at most n-1 rounds on every seed: each round eliminates
    at least one processor and keeps at least one.
    """
    if n < 1:
        raise ValueError(f"need at least one processor, got n={n}")
    if n > TANI_CAPACITY:
        raise CapacityError(
            f"full protocol capped at {TANI_CAPACITY} processors (3 qubits each)"
        )
    rng, seed = as_generator(rng)
    processors = [ProcessorState() for _ in range(n)]
    eligible = list(range(n))
    rounds: list[RoundRecord] = []

    while len(eligible) > 1:
        k = len(eligible)
        registers = 3 if k % 2 else 2
        config = NetworkConfig(n=n, seed=seed or 0, qubits_per_processor=registers)
        layout = assign_registers(config, eligible, registers)
        for proc in eligible:
            assigned = layout.assignments[proc]
            processors[proc].r_qubit = assigned.r
            processors[proc].s_qubit = assigned.s
            processors[proc].t_qubit = assigned.t

        record = run_tani_round(k, rng, round_index=len(rounds) + 1)
        payload = broadcast(record.measured_values)
        survivors = []
        for slot, proc in enumerate(eligible):
            value = record.measured_values[slot]
            processors[proc].last_measured = value
            if survives(value, record.branch, payload):
                survivors.append(proc)
            else:
                processors[proc].status = Status.INELIGIBLE
                processors[proc].r_qubit = None
                processors[proc].s_qubit = None
                processors[proc].t_qubit = None
        rounds.append(record)
        eligible = survivors

    return ElectionTranscript(
        n=n,
        algorithm=Algorithm.TANI2,
        seed=seed,
        rounds=tuple(rounds),
        leader_index=eligible[0],
    )


def run_tournament(
    n: int, rng: np.random.Generator | int
) -> ElectionTranscript:
    """Bracket election: pair up, eliminate one per pair with a two-party match.

    Each match is a single two-party consistency round (both of its branches
    resolve to exactly one winner). An unpaired processor receives a bye, so
    a field of n resolves in ceil(log2(n)) pairing rounds. Pairings and the
    bye are drawn uniformly at random every round: a fixed positional bracket
    would hand the bye to the same slots and skew the winner distribution
    (n=3 would give the bye-holder probability 1/2 instead of 1/3).
    """
    if n < 2:
        raise ValueError(f"a tournament needs at least 2 processors, got n={n}")
    if n > TOURNAMENT_CAPACITY:
        raise CapacityError(f"tournament capped at {TOURNAMENT_CAPACITY} processors")
    rng, seed = as_generator(rng)
    active = list(range(n))
    rounds: list[TournamentRound] = []

    while len(active) > 1:
        matches = []
        next_active = []
        order = [active[i] for i in rng.permutation(len(active))]
        for first, second in zip(order[0::2], order[1::2]):
            record = run_tani_round(2, rng, round_index=len(rounds) + 1)
            matches.append(record)
            next_active.append(first if record.measured_values[0] == 1 else second)
        byes = len(active) % 2
        if byes:
            next_active.append(order[-1])
        rounds.append(
            TournamentRound(
                round_index=len(rounds) + 1,
                k_before=len(active),
                matches=tuple(matches),
                byes=byes,
                k_after=len(next_active),
            )
        )
        active = next_active

    return ElectionTranscript(
        n=n,
        algorithm=Algorithm.TOURNAMENT,
        seed=seed,
        rounds=tuple(rounds),
        leader_index=active[0],
    )
