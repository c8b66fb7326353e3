"""Report rendering: per-day statistics as CSV plus matplotlib figures.

The report path always writes the delimited data and the figures side by
side in one output directory, so a run can be inspected in a spreadsheet
or at a glance.
"""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import DayStats, all_day_stats
from .engine import GameEngine

STATS_COLUMNS = [
    "date",
    "idiom",
    "literal_meaning",
    "idiomatic_meaning",
    "idiomatic",
    "nonidiomatic",
    "total",
    "avg_reviews",
    "dislike_pct",
]

TYPE_COLORS = {"A": "#2a7fba", "B": "#74b3e3", "C": "#d95f02", "D": "#f4aa5f"}


def write_stats_csv(engine: GameEngine, stats: list[DayStats], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(STATS_COLUMNS)
        for day in stats:
            idiom = engine.idioms.get(day.idiom_id)
            writer.writerow(
                [
                    day.date,
                    idiom.text if idiom else day.idiom_id,
                    idiom.literal_gloss if idiom else "",
                    idiom.gloss if idiom else "",
                    day.idiomatic_count,
                    day.nonidiomatic_count,
                    day.total,
                    f"{day.avg_reviews_per_submission:.2f}",
                    f"{day.dislike_pct:.1f}",
                ]
            )
    return path


def write_review_histogram_csv(stats: list[DayStats], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["date", "review_count", "submissions"])
        for day in stats:
            for count in sorted(day.review_histogram):
                writer.writerow([day.date, count, day.review_histogram[count]])
    return path


def render_figures(engine: GameEngine, stats: list[DayStats], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [
        _daily_samples_figure(stats, out_dir / "daily_samples.png"),
        _type_distribution_figure(stats, out_dir / "type_distribution.png"),
        _review_histogram_figure(stats, out_dir / "review_histogram.png"),
        _hourly_interactions_figure(stats, out_dir / "hourly_interactions.png"),
    ]
    return paths


def _labels(stats: list[DayStats]) -> list[str]:
    return [d.date[5:] for d in stats]  # drop the year for axis room


def _daily_samples_figure(stats: list[DayStats], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(max(6, len(stats) * 0.6), 4))
    xs = range(len(stats))
    idio = [d.idiomatic_count for d in stats]
    nonidio = [d.nonidiomatic_count for d in stats]
    ax.bar(xs, idio, label="idiomatic", color="#2a7fba")
    ax.bar(xs, nonidio, bottom=idio, label="nonidiomatic", color="#d95f02")
    ax.set_xticks(list(xs), _labels(stats), rotation=45, ha="right")
    ax.set_ylabel("submissions")
    ax.set_title("Daily submissions by class")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

def _type_distribution_figure(stats: list[DayStats], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(max(6, len(stats) * 0.6), 4))
    xs = range(len(stats))
    bottoms = [0.0] * len(stats)
    for t in ("A", "B", "C", "D"):
        shares = [
            100.0 * d.type_counts[t] / d.total if d.total else 0.0 for d in stats
        ]
        ax.bar(xs, shares, bottom=bottoms, label=f"{t}-type", color=TYPE_COLORS[t])
        bottoms = [b + s for b, s in zip(bottoms, shares)]
    ax.set_xticks(list(xs), _labels(stats), rotation=45, ha="right")
    ax.set_ylabel("% of samples")
    ax.set_title("Daily sample type distribution")
    ax.legend(ncol=4, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _review_histogram_figure(stats: list[DayStats], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    merged: dict[int, int] = {}
    for day in stats:
        for count, n in day.review_histogram.items():
            merged[count] = merged.get(count, 0) + n
    counts = sorted(merged)
    ax.bar(counts, [merged[c] for c in counts], color="#2a7fba")
    ax.set_xlabel("reviews per submission")
    ax.set_ylabel("submissions")
    ax.set_title("Review frequency per submission")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _hourly_interactions_figure(stats: list[DayStats], path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    totals = [0] * 24
    for day in stats:
        for hour, n in enumerate(day.hourly_interactions):
            totals[hour] += n
    ax.bar(range(24), totals, color="#2a7fba")
    ax.set_xlabel("hour of day")
    ax.set_ylabel("interactions")
    ax.set_title("Interaction times (submissions + reviews)")
    ax.set_xticks(range(0, 24, 2))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(engine: GameEngine, out_dir: str | Path) -> dict[str, Path]:
    """CSV tables and figures for every recorded day, in one directory."""
    out_dir = Path(out_dir)
    stats = all_day_stats(engine)
    outputs = {
        "stats": write_stats_csv(engine, stats, out_dir / "day_stats.csv"),
        "histogram": write_review_histogram_csv(stats, out_dir / "review_histogram.csv"),
    }
    for figure_path in render_figures(engine, stats, out_dir):
        outputs[figure_path.stem] = figure_path
    return outputs
