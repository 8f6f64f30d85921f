import numpy as np
import pytest

from qleader.baseline import ClassicalRound, run_classical_election
from qleader.election import Algorithm


def test_single_processor_wins_without_flipping():
    t = run_classical_election(1, 0)
    assert t.leader_index == 0
    assert t.rounds == ()
    assert not t.budget_exhausted


def test_two_party_round_count_is_geometric_with_mean_two():
    # each round resolves iff the flips differ: probability 1/2, so the
    # round count is geometric with mean 2
    trials = 10_000
    total = sum(len(run_classical_election(2, seed).rounds) for seed in range(trials))
    mean = total / trials
    assert abs(mean - 2.0) < 0.1


def test_wasted_rounds_are_recorded():
    # scan a batch for all-tails and all-heads rounds; both waste the round
    saw_all_tails = saw_all_heads = False
    for seed in range(2000):
        for record in run_classical_election(2, seed).rounds:
            if record.flips == (0, 0):
                saw_all_tails = True
                assert record.k_after == record.k_before
            if record.flips == (1, 1):
                saw_all_heads = True
                assert record.k_after == record.k_before
    assert saw_all_tails and saw_all_heads


def test_k_never_increases_and_decreases_iff_mixed():
    for seed in range(500):
        t = run_classical_election(7, seed)
        for record in t.rounds:
            assert record.k_after <= record.k_before
            mixed = 0 < sum(record.flips) < record.k_before
            assert (record.k_after < record.k_before) == mixed


def test_unbounded_tail_observed():
    longest = max(len(run_classical_election(2, seed).rounds) for seed in range(10_000))
    assert longest > 10


def test_mean_rounds_grows_with_n():
    trials = 10_000
    mean_2 = np.mean([len(run_classical_election(2, s).rounds) for s in range(trials)])
    mean_8 = np.mean(
        [len(run_classical_election(8, 10 * trials + s).rounds) for s in range(trials)]
    )
    assert mean_8 > mean_2
    longest_8 = max(len(run_classical_election(8, s).rounds) for s in range(trials))
    assert longest_8 > 7  # no deterministic n-1 bound, unlike the quantum case


def test_budget_exhaustion_is_data_not_an_exception():
    exhausted = 0
    for seed in range(200):
        t = run_classical_election(4, seed, max_rounds=1)
        assert t.algorithm is Algorithm.CLASSICAL
        assert len(t.rounds) == 1
        if t.budget_exhausted:
            exhausted += 1
            assert t.leader_index is None
        else:
            assert t.leader_index is not None
    assert exhausted > 0


def test_invalid_arguments():
    with pytest.raises(ValueError):
        run_classical_election(0, 1)
    with pytest.raises(ValueError):
        run_classical_election(2, 1, max_rounds=0)


def test_classical_round_validates_count():
    ClassicalRound(1, 3, (1, 0, 0), 1)
    ClassicalRound(2, 3, (0, 0, 0), 3)
    with pytest.raises(ValueError):
        ClassicalRound(1, 3, (1, 0, 0), 2)
