import random

import numpy as np
import pytest

from qleader.circuits import prepare_ghz_state, prepare_w_state
from qleader.election import run_tani_election, run_w_state_election
from qleader.metrics import TrialStats, sigma_z_consensus, summarize_trials
from qleader.qsim import StateVector, apply_basis_permutation


def qubit_relabeling(m: int, mapping: list[int]) -> np.ndarray:
    """Basis permutation that sends qubit q to position mapping[q]."""
    perm = np.zeros(1 << m, dtype=int)
    for idx in range(1 << m):
        out = 0
        for q in range(m):
            bit = (idx >> (m - 1 - q)) & 1
            out |= bit << (m - 1 - mapping[q])
        perm[idx] = out
    return perm


class TestSigmaZConsensus:
    def test_w3_is_in_consensus_at_one_third(self):
        ok, expectations = sigma_z_consensus(prepare_w_state(3))
        assert ok
        np.testing.assert_allclose(expectations, [1 / 3] * 3, atol=1e-12)

    def test_opposite_eigenstates_fail_with_spread_two(self):
        state = StateVector(2, np.array([0, 1, 0, 0], dtype=complex))  # |01>
        ok, expectations = sigma_z_consensus(state)
        assert not ok
        np.testing.assert_allclose(expectations, [1.0, -1.0])

    def test_ghz_reaches_consensus_at_zero(self):
        for n in (2, 4, 6):
            ok, expectations = sigma_z_consensus(prepare_ghz_state(n))
            assert ok
            np.testing.assert_allclose(expectations, [0.0] * n, atol=1e-12)

    def test_requires_positive_tolerance(self):
        with pytest.raises(ValueError):
            sigma_z_consensus(prepare_w_state(2), tol=0.0)

    def test_invariant_under_relabeling_of_symmetric_state(self):
        state = prepare_w_state(4)
        mapping = [2, 0, 3, 1]
        relabeled = apply_basis_permutation(state, qubit_relabeling(4, mapping))
        ok_a, exp_a = sigma_z_consensus(state)
        ok_b, exp_b = sigma_z_consensus(relabeled)
        assert ok_a == ok_b
        np.testing.assert_allclose(exp_b, exp_a, atol=1e-12)

    def test_expectations_permute_with_the_qubits(self):
        state = StateVector(2, np.array([0, 1, 0, 0], dtype=complex))  # |01>
        swapped = apply_basis_permutation(state, qubit_relabeling(2, [1, 0]))
        ok, expectations = sigma_z_consensus(swapped)
        assert not ok
        np.testing.assert_allclose(expectations, [-1.0, 1.0])


class TestSummarizeTrials:
    def test_degenerate_batch_has_large_chi_square(self):
        transcripts = [run_w_state_election(4, seed) for seed in range(2000)]
        fixed = [t for t in transcripts if t.leader_index == 0][:100]
        stats = summarize_trials(fixed)
        assert stats.winner_histogram == (100, 0, 0, 0)
        expected = 100 / 4
        assert stats.chi_square_uniformity == pytest.approx(
            (100 - expected) ** 2 / expected + 3 * expected**2 / expected
        )

    def test_w_state_round_moments_are_exactly_one(self):
        stats = summarize_trials([run_w_state_election(5, s) for s in range(200)])
        assert stats.mean_rounds == 1.0
        assert stats.max_rounds == 1

    def test_tani_n4_round_bound(self):
        stats = summarize_trials([run_tani_election(4, s) for s in range(400)])
        assert stats.max_rounds <= 3
        assert stats.budget_exhausted_count == 0

    def test_order_independent(self):
        transcripts = [run_tani_election(3, s) for s in range(100)]
        shuffled = transcripts.copy()
        random.Random(5).shuffle(shuffled)
        assert summarize_trials(transcripts) == summarize_trials(shuffled)

    def test_rejects_empty_batch(self):
        with pytest.raises(ValueError):
            summarize_trials([])

    def test_rejects_mixed_batches(self):
        mixed = [run_w_state_election(3, 1), run_tani_election(3, 1)]
        with pytest.raises(ValueError):
            summarize_trials(mixed)
        sizes = [run_w_state_election(3, 1), run_w_state_election(4, 1)]
        with pytest.raises(ValueError):
            summarize_trials(sizes)

    def test_budget_exhausted_trials_kept_out_of_histogram(self):
        from qleader.baseline import run_classical_election

        transcripts = [
            run_classical_election(4, seed, max_rounds=1) for seed in range(300)
        ]
        stats = summarize_trials(transcripts)
        assert stats.budget_exhausted_count > 0
        assert sum(stats.winner_histogram) == 300 - stats.budget_exhausted_count

    def test_histogram_invariant_enforced(self):
        from qleader.election import Algorithm

        with pytest.raises(ValueError):
            TrialStats(
                algorithm=Algorithm.TANI2,
                n=2,
                trials=10,
                mean_rounds=1.0,
                max_rounds=1,
                winner_histogram=(4, 4),
                chi_square_uniformity=0.0,
                budget_exhausted_count=0,
            )
