"""Rank samples by reasoning length and report mean length and Sem@1 per rank.

Reads the results log of a validated workspace and writes ranks.csv, plus a
PNG plot when matplotlib is available.

    python scripts/rank_length_analysis.py runs/toy
"""

import argparse
import sys
from pathlib import Path

from specgen import metrics, runner


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("workspace")
    ap.add_argument("--exclude-harness-errors", action="store_true")
    ap.add_argument("--plot", help="PNG output path (default: <workspace>/reports/ranks.png)")
    args = ap.parse_args()

    ws = Path(args.workspace)
    outcomes = runner.ResultsLog(ws / "validation" / "results.jsonl").outcomes()
    if not outcomes:
        print(f"no results under {ws}", file=sys.stderr)
        return 4
    rows = metrics.from_outcomes(outcomes, args.exclude_harness_errors)
    series = metrics.reasoning_rank_analysis(rows)
    report = metrics.MetricsReport({}, {}, metrics.bug_distinguish_rate(rows), len(rows), rows[0].n, series)
    out = ws / "reports" / "ranks.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.ranks_csv(), encoding="utf-8")
    print(report.ranks_csv(), end="")

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return 0
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot([p.rank for p in series], [p.mean_tokens for p in series], marker="o", label="mean tokens")
    ax.set_xlabel("rank by reasoning length")
    ax.set_ylabel("mean reasoning tokens")
    ax2 = ax.twinx()
    ax2.plot([p.rank for p in series], [p.sem_at_1 for p in series], color="tab:red", marker="s", label="Sem@1")
    ax2.set_ylabel("Sem@1")
    ax2.set_ylim(0, 1)
    fig.tight_layout()
    png = Path(args.plot) if args.plot else ws / "reports" / "ranks.png"
    fig.savefig(png, dpi=120)
    print(f"plot -> {png}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
