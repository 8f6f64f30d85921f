"""Figure rendering for trial batches.

Renders the winner histogram and the per-trial round-count distribution as
PNG files next to the delimited outputs. Uses the Agg backend so the report
path works headless.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .election import ElectionTranscript
from .metrics import TrialStats


def render_figures(
    stats: TrialStats,
    transcripts: Sequence[ElectionTranscript],
    out_dir: str | Path,
) -> list[Path]:
    """Write winners.png and rounds.png under ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    label = f"{stats.algorithm.value}, n={stats.n}, {stats.trials} trials"

    winners_path = out_dir / "winners.png"
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(stats.n), stats.winner_histogram, color="tab:blue")
    terminated = stats.trials - stats.budget_exhausted_count
    ax.axhline(terminated / stats.n, color="tab:red", linestyle="--", label="uniform")
    ax.set_xlabel("winning processor")
    ax.set_ylabel("trials won")
    ax.set_title(f"Winner distribution ({label})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(winners_path, dpi=150)
    plt.close(fig)

    rounds_path = out_dir / "rounds.png"
    counts = [len(t.rounds) for t in transcripts]
    fig, ax = plt.subplots(figsize=(6, 4))
    bins = range(min(counts), max(counts) + 2)
    ax.hist(counts, bins=bins, align="left", rwidth=0.8, color="tab:green")
    ax.set_xlabel("rounds per trial")
    ax.set_ylabel("trials")
    ax.set_title(f"Round counts ({label})")
    fig.tight_layout()
    fig.savefig(rounds_path, dpi=150)
    plt.close(fig)

    return [winners_path, rounds_path]
