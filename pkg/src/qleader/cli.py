"""Command-line entry point.

Two subcommands:

* ``run`` executes a seeded batch of elections, writes a JSONL trace (one
  line per round) and a one-row CSV summary, optionally renders figures,
  and prints the batch statistics.
* ``verify`` runs the analytic identity suite (unitarity, zero-amplitude
  symmetry breaking, oracle involution, consistency probability) and
  reports pass/fail per identity.

Exit codes: 0 success, 1 usage, 2 capacity, 3 I/O, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence, TextIO

import numpy as np

from .baseline import DEFAULT_ROUND_BUDGET, ClassicalRound, run_classical_election
from .circuits import (
    PhaseParams,
    build_even_symmetry_breaker,
    build_odd_symmetry_breaker,
    consistency_oracle,
    prepare_ghz_state,
    prepare_uniform_register,
)
from .election import (
    Algorithm,
    ElectionTranscript,
    TournamentRound,
    run_tani_election,
    run_tournament,
    run_w_state_election,
)
from .errors import CapacityError
from .metrics import TrialStats, summarize_trials
from .qsim import (
    StateVector,
    UnitaryMatrix,
    apply_basis_permutation,
    apply_unitary,
    basis_state,
    fidelity,
    tensor_product,
)
from .seeding import trial_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPACITY = 2
EXIT_IO = 3
EXIT_VERIFY = 4

IDENTITY_TOL = 1e-10

DEFAULT_EVEN_KS = (2, 4, 6, 8, 10, 12)
DEFAULT_ODD_KS = (3, 5, 7, 9)
_ORACLE_CHECK_CAP = 8  # involution/probability checks build 2^(2k) permutations


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to reproduce a batch byte-for-byte."""

    algorithm: Algorithm
    n: int
    trials: int = 1
    seed: int = 0
    trace_path: str | None = None
    summary_path: str | None = None
    figures_dir: str | None = None
    max_rounds: int = DEFAULT_ROUND_BUDGET

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.max_rounds < 1:
            raise ValueError(f"max-rounds must be >= 1, got {self.max_rounds}")


def _dispatch(spec: RunSpec, seed: int) -> ElectionTranscript:
    if spec.algorithm is Algorithm.W_STATE:
        return run_w_state_election(spec.n, seed)
    if spec.algorithm is Algorithm.TANI2:
        return run_tani_election(spec.n, seed)
    if spec.algorithm is Algorithm.CLASSICAL:
        return run_classical_election(spec.n, seed, spec.max_rounds)
    return run_tournament(spec.n, seed)


def _trace_rows(trial: int, transcript: ElectionTranscript) -> Iterator[dict]:
    """Flatten a transcript into schema rows; round indices contiguous from 1."""
    index = 0

    def row(k, branch, s_bit, values, k_after):
        nonlocal index
        index += 1
        return {
            "trial": trial,
            "round": index,
            "k": k,
            "branch": branch,
            "s_bit": s_bit,
            "values": list(values),
            "k_after": k_after,
        }

    for rnd in transcript.rounds:
        if isinstance(rnd, TournamentRound):
            for match in rnd.matches:
                yield row(
                    match.k_before,
                    match.branch.value,
                    match.s_bit,
                    match.measured_values,
                    match.k_after,
                )
        elif isinstance(rnd, ClassicalRound):
            yield row(rnd.k_before, "classical", None, rnd.flips, rnd.k_after)
        else:
            yield row(
                rnd.k_before,
                rnd.branch.value,
                rnd.s_bit,
                rnd.measured_values,
                rnd.k_after,
            )


def _write_trace(path: str, transcripts: Sequence[ElectionTranscript]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for trial, transcript in enumerate(transcripts):
            for row in _trace_rows(trial, transcript):
                fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def _write_summary(path: str, stats: TrialStats) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["algorithm", "n", "trials", "mean_rounds", "max_rounds",
             "chi_square", "budget_exhausted"]
        )
        writer.writerow(
            [stats.algorithm.value, stats.n, stats.trials, stats.mean_rounds,
             stats.max_rounds, stats.chi_square_uniformity,
             stats.budget_exhausted_count]
        )


def _print_stats(stats: TrialStats, out: TextIO) -> None:
    print(f"algorithm: {stats.algorithm.value}", file=out)
    print(f"n: {stats.n}", file=out)
    print(f"trials: {stats.trials}", file=out)
    print(f"mean_rounds: {stats.mean_rounds}", file=out)
    print(f"max_rounds: {stats.max_rounds}", file=out)
    print(f"chi_square_uniformity: {stats.chi_square_uniformity}", file=out)
    print(f"budget_exhausted: {stats.budget_exhausted_count}", file=out)
    print(f"winner_histogram: {list(stats.winner_histogram)}", file=out)


def run(spec: RunSpec, out: TextIO | None = None) -> int:
    """Execute the batch and emit trace/summary/figures as requested."""
    out = out if out is not None else sys.stdout
    transcripts = [
        _dispatch(spec, trial_seed(spec.seed, i)) for i in range(spec.trials)
    ]
    stats = summarize_trials(transcripts)
    if spec.trace_path:
        _write_trace(spec.trace_path, transcripts)
    if spec.summary_path:
        _write_summary(spec.summary_path, stats)
    if spec.figures_dir:
        from .report import render_figures

        render_figures(stats, transcripts, spec.figures_dir)
    _print_stats(stats, out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify: the analytic identity suite
# ---------------------------------------------------------------------------

Builder = Callable[[PhaseParams], object]


def _as_unitary(candidate: object) -> UnitaryMatrix:
    """Accept a UnitaryMatrix or raw entries (validated on wrapping)."""
    if isinstance(candidate, UnitaryMatrix):
        return candidate
    return UnitaryMatrix(np.asarray(candidate))


def _max_unitarity_deviation(candidate: object) -> float:
    entries = np.asarray(getattr(candidate, "entries", candidate), dtype=np.complex128)
    return float(np.max(np.abs(entries.conj().T @ entries - np.eye(entries.shape[0]))))


def _check_unitarity(builder: Builder, k: int) -> str | None:
    deviation = _max_unitarity_deviation(builder(PhaseParams(k)))
    if deviation > IDENTITY_TOL:
        return f"max |M^H M - I| = {deviation:.3e}"
    return None


def _check_even_zero_amplitude(builder: Builder, k: int) -> str | None:
    u = _as_unitary(builder(PhaseParams(k)))
    state = prepare_ghz_state(k)
    for q in range(k):
        state = apply_unitary(state, u, [q])
    residuals = [abs(state.amplitudes[0]), abs(state.amplitudes[-1])]
    if max(residuals) > IDENTITY_TOL:
        return f"|amp| on consistent strings up to {max(residuals):.3e}"
    return None


def _check_odd_zero_amplitude(builder: Builder, k: int) -> str | None:
    v = _as_unitary(builder(PhaseParams(k)))
    cnot = UnitaryMatrix(
        np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    )
    state = tensor_product(prepare_ghz_state(k), basis_state(k))
    for i in range(k):
        state = apply_unitary(state, cnot, [i, k + i])
    for i in range(k):
        state = apply_unitary(state, v, [i, k + i])
    ones = (1 << k) - 1
    patterns = {
        "|00>^k": 0,
        "|01>^k": ones,
        "|10>^k": ones << k,
        "|11>^k": (ones << k) | ones,
    }
    worst = max(abs(state.amplitudes[idx]) for idx in patterns.values())
    if worst > IDENTITY_TOL:
        return f"|amp| on consistent pair patterns up to {worst:.3e}"
    return None


def _check_two_party_identity(builder: Builder) -> str | None:
    u = _as_unitary(builder(PhaseParams(2)))
    state = prepare_ghz_state(2)
    state = apply_unitary(state, u, [0])
    state = apply_unitary(state, u, [1])
    target = StateVector(
        2, np.array([0, -1j / math.sqrt(2), -1j / math.sqrt(2), 0])
    )
    f = fidelity(state, target)
    if f < 1.0 - IDENTITY_TOL:
        return f"fidelity to -i(|01>+|10>)/sqrt(2) is {f:.12f}"
    return None


def _check_oracle_involution(k: int) -> str | None:
    perm = consistency_oracle(k)
    if not np.array_equal(perm[perm], np.arange(perm.size)):
        return "applying the oracle twice is not the identity"
    return None


def _check_consistency_probability(k: int) -> str | None:
    state = tensor_product(prepare_uniform_register(k), basis_state(k))
    state = apply_basis_permutation(state, consistency_oracle(k))
    ones = (1 << k) - 1
    indices = np.arange(state.dim)
    p_consistent = float(np.sum(np.abs(state.amplitudes[(indices & ones) == ones]) ** 2))
    expected = 2.0 ** (1 - k)
    if abs(p_consistent - expected) > IDENTITY_TOL:
        return f"P(S=1) = {p_consistent!r}, expected 2^(1-{k}) = {expected!r}"
    return None


def verify(
    even_ks: Iterable[int] = DEFAULT_EVEN_KS,
    odd_ks: Iterable[int] = DEFAULT_ODD_KS,
    *,
    even_builder: Builder = build_even_symmetry_breaker,
    odd_builder: Builder = build_odd_symmetry_breaker,
    out: TextIO | None = None,
) -> int:
    """Run every analytic identity at tolerance 1e-10; one line per identity.

    Builders are injectable so a corrupted matrix can be shown to produce a
    named failure (negative control). Returns 0 or the verification exit code.
    """
    out = out if out is not None else sys.stdout
    checks: list[tuple[str, Callable[[], str | None]]] = []
    for k in even_ks:
        checks.append((f"unitarity[U,k={k}]", lambda k=k: _check_unitarity(even_builder, k)))
        checks.append(
            (f"zero_amplitude_even[k={k}]",
             lambda k=k: _check_even_zero_amplitude(even_builder, k))
        )
        if k == 2:
            checks.append(
                ("two_party_identity", lambda: _check_two_party_identity(even_builder))
            )
    for k in odd_ks:
        checks.append((f"unitarity[V,k={k}]", lambda k=k: _check_unitarity(odd_builder, k)))
        checks.append(
            (f"zero_amplitude_odd[k={k}]",
             lambda k=k: _check_odd_zero_amplitude(odd_builder, k))
        )
    for k in sorted(set(even_ks) | set(odd_ks)):
        if 2 <= k <= _ORACLE_CHECK_CAP:
            checks.append((f"oracle_involution[k={k}]", lambda k=k: _check_oracle_involution(k)))
            checks.append(
                (f"consistency_probability[k={k}]",
                 lambda k=k: _check_consistency_probability(k))
            )

    failures = 0
    for name, fn in checks:
        try:
            problem = fn()
        except Exception as exc:
            problem = str(exc)
        if problem is None:
            print(f"PASS {name}", file=out)
        else:
            print(f"FAIL {name}: {problem}", file=out)
            failures += 1
    if failures:
        print(f"{failures} of {len(checks)} identities failed", file=out)
        return EXIT_VERIFY
    print(f"all {len(checks)} identities passed", file=out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # map argparse failures onto exit code 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="qleader", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    runp = sub.add_parser("run", help="run a seeded batch of elections")
    runp.add_argument("--algorithm", "-a", required=True,
                      help="w-state | tani2 | classical | tournament")
    runp.add_argument("--n", type=int, required=True, help="number of processors")
    runp.add_argument("--trials", type=int, default=1)
    runp.add_argument("--seed", type=int, default=0)
    runp.add_argument("--trace", help="JSONL trace output path (one line per round)")
    runp.add_argument("--summary", help="CSV summary output path (one row)")
    runp.add_argument("--figures-dir", help="directory for winners.png / rounds.png")
    runp.add_argument("--max-rounds", type=int, default=DEFAULT_ROUND_BUDGET,
                      help="round budget (classical only)")

    verp = sub.add_parser("verify", help="run the analytic identity suite")
    verp.add_argument("--k-range", help="MIN..MAX eligible counts "
                      "(default: even 2-12 and odd 3-9)")
    return parser


def _parse_k_range(text: str) -> tuple[list[int], list[int]]:
    try:
        low_text, high_text = text.split("..", 1)
        low, high = int(low_text), int(high_text)
    except ValueError:
        raise _UsageError(f"--k-range must look like 2..12, got {text!r}")
    if low < 2 or high < low:
        raise _UsageError(f"--k-range needs 2 <= MIN <= MAX, got {text!r}")
    ks = range(low, high + 1)
    return [k for k in ks if k % 2 == 0], [k for k in ks if k % 2 and k >= 3]


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            try:
                algorithm = Algorithm(args.algorithm)
            except ValueError:
                raise _UsageError(
                    f"unknown algorithm {args.algorithm!r} "
                    f"(choose from {', '.join(a.value for a in Algorithm)})"
                )
            spec = RunSpec(
                algorithm=algorithm,
                n=args.n,
                trials=args.trials,
                seed=args.seed,
                trace_path=args.trace,
                summary_path=args.summary,
                figures_dir=args.figures_dir,
                max_rounds=args.max_rounds,
            )
            return run(spec)
        if args.k_range:
            even_ks, odd_ks = _parse_k_range(args.k_range)
        else:
            even_ks, odd_ks = list(DEFAULT_EVEN_KS), list(DEFAULT_ODD_KS)
        return verify(even_ks, odd_ks)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
