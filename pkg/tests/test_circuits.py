import math

import numpy as np
import pytest

from qleader.circuits import (
    PhaseParams,
    build_even_symmetry_breaker,
    build_odd_symmetry_breaker,
    consistency_oracle,
    prepare_ghz_state,
    prepare_uniform_register,
    prepare_w_state,
)
from qleader.errors import CapacityError
from qleader.qsim import (
    UnitaryMatrix,
    apply_unitary,
    basis_state,
    tensor_product,
)

CNOT = UnitaryMatrix(
    np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
)


def breaker_applied_to_ghz(k: int):
    """U^(x)k acting on (|0^k> + |1^k>)/sqrt(2)."""
    state = prepare_ghz_state(k)
    u = build_even_symmetry_breaker(PhaseParams(k))
    for q in range(k):
        state = apply_unitary(state, u, [q])
    return state


def odd_breaker_applied_to_pairs(k: int):
    """CNOT-initialize the T block from a GHZ R block, then V_k per pair."""
    state = tensor_product(prepare_ghz_state(k), basis_state(k))
    for i in range(k):
        state = apply_unitary(state, CNOT, [i, k + i])
    v = build_odd_symmetry_breaker(PhaseParams(k))
    for i in range(k):
        state = apply_unitary(state, v, [i, k + i])
    return state


class TestPhaseParams:
    def test_components_square_to_one(self):
        for k in range(2, 13):
            p = PhaseParams(k)
            assert abs(p.r_k**2 + p.i_k**2 - 1.0) < 1e-12

    def test_real_part_strictly_inside_unit_interval_for_k_ge_3(self):
        for k in range(3, 13):
            assert 0 < PhaseParams(k).r_k < 1

    def test_rejects_k_below_two(self):
        with pytest.raises(ValueError):
            PhaseParams(1)


class TestStatePreparation:
    def test_w1_is_one(self):
        np.testing.assert_allclose(prepare_w_state(1).amplitudes, [0, 1])

    def test_w2_matches_two_party_resource(self):
        np.testing.assert_allclose(
            prepare_w_state(2).amplitudes, [0, 1, 1, 0] / np.sqrt(2)
        )

    def test_w5_support_and_weights(self):
        state = prepare_w_state(5)
        support = np.flatnonzero(state.amplitudes)
        np.testing.assert_array_equal(sorted(support), [1, 2, 4, 8, 16])
        for idx in support:
            assert abs(abs(state.amplitudes[idx]) ** 2 - 1 / 5) < 1e-12

    def test_w_rejects_zero_and_overflow(self):
        with pytest.raises(ValueError):
            prepare_w_state(0)
        with pytest.raises(CapacityError):
            prepare_w_state(25)

    def test_uniform_register_small(self):
        np.testing.assert_allclose(
            prepare_uniform_register(1).amplitudes, [1, 1] / np.sqrt(2)
        )
        np.testing.assert_allclose(prepare_uniform_register(2).amplitudes, [0.5] * 4)

    def test_uniform_register_k6(self):
        np.testing.assert_allclose(
            prepare_uniform_register(6).amplitudes, np.full(64, 1 / 8), atol=1e-15
        )

    def test_ghz_form(self):
        state = prepare_ghz_state(4)
        np.testing.assert_allclose(state.amplitudes[0], 1 / np.sqrt(2))
        np.testing.assert_allclose(state.amplitudes[15], 1 / np.sqrt(2))
        assert np.count_nonzero(state.amplitudes) == 2


class TestConsistencyOracle:
    def test_flags_consistent_pair(self):
        perm = consistency_oracle(2)
        assert perm[0b1100] == 0b1111  # |11>|00> -> |11>|11>
        assert perm[0b0000] == 0b0011  # |00>|00> -> |00>|11>

    def test_leaves_inconsistent_pair_alone(self):
        perm = consistency_oracle(2)
        assert perm[0b0100] == 0b0100  # |01>|00> stays
        assert perm[0b1000] == 0b1000

    def test_leaves_inconsistent_quad_alone(self):
        perm = consistency_oracle(4)
        idx = 0b0101 << 4  # |0101>|0000>
        assert perm[idx] == idx

    def test_flag_value_for_every_input_string(self):
        k = 3
        perm = consistency_oracle(k)
        for x in range(1 << k):
            image = perm[x << k]
            expected_s = (1 << k) - 1 if x in (0, (1 << k) - 1) else 0
            assert image == (x << k) | expected_s

    def test_is_an_involution(self):
        for k in range(2, 7):
            perm = consistency_oracle(k)
            np.testing.assert_array_equal(perm[perm], np.arange(perm.size))

    def test_rejects_k_below_two(self):
        with pytest.raises(ValueError):
            consistency_oracle(1)


class TestEvenSymmetryBreaker:
    def test_k2_matches_two_party_matrix(self):
        u = build_even_symmetry_breaker(PhaseParams(2))
        expected = np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2)
        np.testing.assert_allclose(u.entries, expected, atol=1e-15)

    def test_k4_unitarity_deviation(self):
        u = build_even_symmetry_breaker(PhaseParams(4))
        deviation = np.max(np.abs(u.entries.conj().T @ u.entries - np.eye(2)))
        assert deviation < 1e-12

    def test_k6_kills_all_zeros_string(self):
        state = breaker_applied_to_ghz(6)
        assert abs(state.amplitudes[0]) < 1e-10

    @pytest.mark.parametrize("k", [2, 4, 6, 8, 10, 12])
    def test_consistent_strings_vanish_and_mixed_carry_everything(self, k):
        state = breaker_applied_to_ghz(k)
        assert abs(state.amplitudes[0]) < 1e-10
        assert abs(state.amplitudes[-1]) < 1e-10
        mixed = np.abs(state.amplitudes[1:-1]) ** 2
        assert abs(mixed.sum() - 1.0) < 1e-10

    def test_rejects_odd_count(self):
        with pytest.raises(ValueError, match="odd"):
            build_even_symmetry_breaker(PhaseParams(3))

    def test_accepts_plain_integer(self):
        u = build_even_symmetry_breaker(2)
        np.testing.assert_allclose(
            u.entries, np.array([[1, -1j], [-1j, 1]]) / np.sqrt(2), atol=1e-15
        )


class TestOddSymmetryBreaker:
    def test_k3_first_column_is_uniform_real(self):
        # R_3 = cos(pi/3) = 1/2, so every nonzero entry collapses to 1/sqrt(3)
        v = build_odd_symmetry_breaker(PhaseParams(3))
        np.testing.assert_allclose(
            v.entries[:, 0], [1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3), 0],
            atol=1e-15,
        )

    def test_second_column_routes_01_to_11(self):
        for k in (3, 5, 7):
            v = build_odd_symmetry_breaker(PhaseParams(k))
            np.testing.assert_allclose(v.entries[:, 1], [0, 0, 0, 1], atol=1e-15)

    def test_outer_columns_are_orthogonal(self):
        for k in (3, 5, 7, 9):
            v = build_odd_symmetry_breaker(PhaseParams(k))
            assert abs(np.vdot(v.entries[:, 0], v.entries[:, 3])) < 1e-12

    def test_sign_cancellation_row_is_exact(self):
        # the |10> row carries +a and -a, so a^k + (-a)^k = 0 exactly for odd k
        for k in (3, 5, 7, 9):
            v = build_odd_symmetry_breaker(PhaseParams(k))
            a, b = v.entries[2, 0], v.entries[2, 3]
            assert a == -b
            assert a**k + b**k == 0.0

    @pytest.mark.parametrize("k", [3, 5, 7, 9])
    def test_all_four_consistent_patterns_vanish(self, k):
        state = odd_breaker_applied_to_pairs(k)
        ones = (1 << k) - 1
        for idx in (0, ones, ones << k, (ones << k) | ones):
            assert abs(state.amplitudes[idx]) < 1e-10

    @pytest.mark.parametrize("k", [3, 5, 7, 9])
    def test_unitarity(self, k):
        v = build_odd_symmetry_breaker(PhaseParams(k))
        deviation = np.max(np.abs(v.entries.conj().T @ v.entries - np.eye(4)))
        assert deviation <= 1e-10

    def test_rejects_even_count(self):
        with pytest.raises(ValueError, match="odd"):
            build_odd_symmetry_breaker(PhaseParams(4))
