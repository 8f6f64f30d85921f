"""Protocol-specific states and unitaries.

Builders for the shared entangled resources (W_n, uniform product register,
GHZ form), the consistency-check oracle over paired R/S registers, and the
two symmetry-breaking unitaries: a 2x2 matrix for an even number of eligible
processors and a 4x4 matrix for an odd number.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError
from .qsim import QUBIT_CAPACITY, StateVector, UnitaryMatrix


@dataclass(frozen=True)
class PhaseParams:
    """Real/imaginary parts of e^{i*pi/k} for the current eligible count k."""

    k: int
    r_k: float = field(init=False)
    i_k: float = field(init=False)

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"eligible count must be >= 2, got {self.k}")
        object.__setattr__(self, "r_k", math.cos(math.pi / self.k))
        object.__setattr__(self, "i_k", math.sin(math.pi / self.k))

    @property
    def phase(self) -> complex:
        """e^{i*pi/k} on the principal branch."""
        return complex(self.r_k, self.i_k)


def _as_params(params: PhaseParams | int) -> PhaseParams:
    return params if isinstance(params, PhaseParams) else PhaseParams(params)


def prepare_w_state(n: int) -> StateVector:
    """The n-qubit state with amplitude 1/sqrt(n) on every weight-1 string."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if n > QUBIT_CAPACITY:
        raise CapacityError(f"n={n} exceeds the dense cap of {QUBIT_CAPACITY}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[[1 << j for j in range(n)]] = 1.0 / math.sqrt(n)
    return StateVector(n, amps)


def prepare_uniform_register(k: int) -> StateVector:
    """Product of k |+> qubits: every basis string with amplitude 2^(-k/2)."""
    if k < 1:
        raise ValueError(f"need at least one qubit, got k={k}")
    if k > QUBIT_CAPACITY:
        raise CapacityError(f"k={k} exceeds the dense cap of {QUBIT_CAPACITY}")
    dim = 1 << k
    return StateVector(k, np.full(dim, 1.0 / math.sqrt(dim), dtype=np.complex128))


def prepare_ghz_state(n: int) -> StateVector:
    """(|0...0> + |1...1>)/sqrt(2) — the consistent branch of the protocol."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    if n > QUBIT_CAPACITY:
        raise CapacityError(f"n={n} exceeds the dense cap of {QUBIT_CAPACITY}")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2)
    return StateVector(n, amps)


def consistency_oracle(k: int) -> np.ndarray:
    """Basis permutation on 2k qubits flagging all-equal R strings into S.

    Layout: qubits 0..k-1 are the R block, k..2k-1 the S block. The
    permutation maps |x>|s> to |x>|s XOR C(x)...C(x)> where C(x) = 1 iff
    all bits of x are equal, so an all-zero S register picks up |1...1>
    exactly on consistent x. Applying the permutation twice is the identity.

    The returned array is cached and read-only.
    """
    if k < 2:
        raise ValueError(f"consistency check needs k >= 2, got k={k}")
    if 2 * k > QUBIT_CAPACITY:
        raise CapacityError(f"oracle on 2k={2 * k} qubits exceeds the cap of {QUBIT_CAPACITY}")
    return _consistency_oracle_cached(k)


@functools.lru_cache(maxsize=None)
def _consistency_oracle_cached(k: int) -> np.ndarray:
    indices = np.arange(1 << (2 * k))
    ones = (1 << k) - 1
    x = indices >> k
    s = indices & ones
    consistent = (x == 0) | (x == ones)
    perm = np.where(consistent, (x << k) | (s ^ ones), indices)
    perm.setflags(write=False)
    return perm


def build_even_symmetry_breaker(params: PhaseParams | int) -> UnitaryMatrix:
    """2x2 symmetry breaker for an even eligible count k.

    (1/sqrt(2)) [[1, e^{-i*pi/k}], [-e^{i*pi/k}, 1]]: applied to every R
    qubit of a GHZ-form state, the all-zeros and all-ones amplitudes cancel
    exactly because (e^{i*pi/k})^k = -1.
    """
    params = _as_params(params)
    if params.k % 2:
        raise ValueError(f"even-count builder called with odd k={params.k}")
    phase = params.phase
    entries = np.array(
        [[1.0, phase.conjugate()], [-phase, 1.0]], dtype=np.complex128
    ) / math.sqrt(2)
    return UnitaryMatrix(entries)


def build_odd_symmetry_breaker(params: PhaseParams | int) -> UnitaryMatrix:
    """4x4 symmetry breaker acting on an (R, T) qubit pair, for odd k >= 3.

    Only the |00> and |11> columns are ever exercised by the protocol (T is
    CNOT-initialized from R), and those columns make the four all-equal pair
    patterns cancel: the |00>/|01> rows via (e^{±i*pi/k})^k = -1, the |10>
    row via opposite signs raised to an odd power. Column 1 sends |01> to
    |11>; column 2 is completed by Gram-Schmidt from |10> against the other
    three, phase-fixed so its largest-magnitude entry is real positive.
    """
    params = _as_params(params)
    if params.k % 2 == 0 or params.k < 3:
        raise ValueError(f"odd-count builder needs odd k >= 3, got k={params.k}")
    r = params.r_k
    phase = params.phase
    scale = 1.0 / math.sqrt(r + 1.0)
    sqrt_r = math.sqrt(r)
    inv_sqrt2 = 1.0 / math.sqrt(2)

    col0 = scale * np.array([inv_sqrt2, inv_sqrt2, sqrt_r, 0.0], dtype=np.complex128)
    col1 = np.array([0.0, 0.0, 0.0, 1.0], dtype=np.complex128)
    col3 = scale * np.array(
        [phase * inv_sqrt2, phase.conjugate() * inv_sqrt2, -sqrt_r, 0.0],
        dtype=np.complex128,
    )

    col2 = np.array([0.0, 0.0, 1.0, 0.0], dtype=np.complex128)
    for other in (col0, col1, col3):
        col2 = col2 - np.vdot(other, col2) * other
    col2 = col2 / np.linalg.norm(col2)
    anchor = col2[np.argmax(np.abs(col2))]
    col2 = col2 * (anchor.conjugate() / abs(anchor))

    return UnitaryMatrix(np.column_stack([col0, col1, col2, col3]))
