"""Deterministic dense statevector simulator.

Conventions used throughout the package:

* Qubit 0 is the *most significant* bit of a basis index, so a ket written
  left-to-right maps directly onto qubit indices (|q0 q1 ... q(m-1)>).
* All operations are pure: the input state is never mutated, a new
  ``StateVector`` is returned.
* Randomness is always an explicit ``numpy.random.Generator`` argument,
  and a measurement consumes exactly one uniform draw, regardless of how
  many qubits it covers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError

QUBIT_CAPACITY = 24
ATOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over ``2**num_qubits`` basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 0:
            raise ValueError(f"num_qubits must be >= 0, got {self.num_qubits}")
        if self.num_qubits > QUBIT_CAPACITY:
            raise CapacityError(
                f"{self.num_qubits} qubits exceeds the dense cap of {QUBIT_CAPACITY}"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.num_qubits,):
            raise ValueError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits


@dataclass(frozen=True)
class UnitaryMatrix:
    """Dense square matrix with verified unitarity and power-of-2 dimension."""

    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"entries must be a square matrix, got shape {entries.shape}")
        dim = entries.shape[0]
        if dim & (dim - 1) or dim == 0:
            raise ValueError(f"dimension must be a power of 2, got {dim}")
        deviation = np.max(np.abs(entries.conj().T @ entries - np.eye(dim)))
        if deviation > ATOL:
            raise ValueError(f"matrix is not unitary: max |U^H U - I| = {deviation:.3e}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.entries.conj().T)


@dataclass(frozen=True)
class MeasurementOutcome:
    """Result of a collapsing measurement: observed bits plus the conditional state.

    ``bits[i]`` is the value of the i-th measured qubit, in target order.
    """

    bits: str
    post_state: StateVector

    @property
    def value(self) -> int:
        """The bits read as an integer (first measured qubit is the high bit)."""
        return int(self.bits, 2)


def basis_state(num_qubits: int, index: int = 0) -> StateVector:
    """The computational basis state |index> on ``num_qubits`` qubits."""
    if num_qubits > QUBIT_CAPACITY:
        raise CapacityError(f"{num_qubits} qubits exceeds the dense cap of {QUBIT_CAPACITY}")
    if not 0 <= index < (1 << num_qubits):
        raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(num_qubits, amps)


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Combined state |a>|b>; a's qubits become the high-order block."""
    total = a.num_qubits + b.num_qubits
    if total > QUBIT_CAPACITY:
        raise CapacityError(
            f"tensor product needs {total} qubits, cap is {QUBIT_CAPACITY}"
        )
    return StateVector(total, np.kron(a.amplitudes, b.amplitudes))


def _check_targets(state: StateVector, targets: Sequence[int]) -> list[int]:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target qubits in {targets}")
    for q in targets:
        if not 0 <= q < state.num_qubits:
            raise ValueError(f"target qubit {q} out of range for {state.num_qubits} qubits")
    return targets


def apply_unitary(state: StateVector, u: UnitaryMatrix, targets: Sequence[int]) -> StateVector:
    """Apply ``u`` to the listed qubits (identity on the rest).

    ``targets[0]`` is the most significant bit of u's index space, matching
    the global qubit-0-is-MSB convention.
    """
    targets = _check_targets(state, targets)
    if u.dim != 1 << len(targets):
        raise ValueError(
            f"unitary of dim {u.dim} cannot act on {len(targets)} qubits"
        )
    m = state.num_qubits
    psi = state.amplitudes.reshape([2] * m)
    psi = np.moveaxis(psi, targets, range(len(targets)))
    moved_shape = psi.shape
    flat = psi.reshape(u.dim, -1)
    flat = u.entries @ flat
    psi = flat.reshape(moved_shape)
    psi = np.moveaxis(psi, range(len(targets)), targets)
    return StateVector(m, psi.reshape(state.dim))


def apply_basis_permutation(state: StateVector, perm: Sequence[int]) -> StateVector:
    """Relabel basis states: the output amplitude at ``perm[i]`` is the input at ``i``."""
    perm = np.asarray(perm)
    if perm.shape != (state.dim,):
        raise ValueError(f"permutation must have length {state.dim}, got {perm.shape}")
    seen = np.zeros(state.dim, dtype=bool)
    seen[perm] = True
    if not seen.all():
        raise ValueError("permutation is not a bijection (duplicate image detected)")
    out = np.empty_like(state.amplitudes)
    out[perm] = state.amplitudes
    return StateVector(state.num_qubits, out)


def measure_qubits(
    state: StateVector, targets: Sequence[int], rng: np.random.Generator
) -> MeasurementOutcome:
    """Measure the target qubits jointly in the computational basis.

    The outcome is one sample from the exact joint marginal, drawn with a
    single uniform variate against the cumulative distribution. Amplitudes
    inconsistent with the outcome are zeroed exactly and the rest renormalized.
    """
    targets = _check_targets(state, targets)
    m = state.num_qubits
    probs = np.abs(state.amplitudes) ** 2

    grid = probs.reshape([2] * m)
    grid = np.moveaxis(grid, targets, range(len(targets)))
    marginal = grid.reshape(1 << len(targets), -1).sum(axis=1)
    marginal = marginal / marginal.sum()

    cumulative = np.cumsum(marginal)
    draw = rng.random()
    outcome = int(np.searchsorted(cumulative, draw, side="right"))
    outcome = min(outcome, len(marginal) - 1)
    while marginal[outcome] == 0.0:  # rounding pushed the draw past the support
        outcome -= 1

    post = state.amplitudes.copy().reshape([2] * m)
    bits = []
    for pos, q in enumerate(targets):
        bit = (outcome >> (len(targets) - 1 - pos)) & 1
        bits.append(str(bit))
        selector = [slice(None)] * m
        selector[q] = 1 - bit
        post[tuple(selector)] = 0.0
    post = post.reshape(state.dim)
    post = post / np.linalg.norm(post)
    return MeasurementOutcome("".join(bits), StateVector(m, post))


def probability_of_basis_state(state: StateVector, index: int) -> float:
    """Born probability |<index|state>|^2."""
    if not 0 <= index < state.dim:
        raise ValueError(f"basis index {index} out of range")
    return float(np.abs(state.amplitudes[index]) ** 2)


def expectation_z(state: StateVector, qubit: int) -> float:
    """<Z> on one qubit, with the |0> eigenvalue taken as +1."""
    if not 0 <= qubit < state.num_qubits:
        raise ValueError(f"qubit {qubit} out of range")
    probs = np.abs(state.amplitudes) ** 2
    bit = (np.arange(state.dim) >> (state.num_qubits - 1 - qubit)) & 1
    return float(probs[bit == 0].sum() - probs[bit == 1].sum())


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2 — state comparison insensitive to global phase."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("states have different qubit counts")
    return float(np.abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)
