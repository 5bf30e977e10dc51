"""Figure rendering for benchmark reports.

Writes PNG charts next to the delimited report output: per-question
response times (baseline vs indexed) and, when references were supplied,
mean BLEU per mode.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import BenchReport


def render_time_figure(report: BenchReport, path: str) -> bool:
    """Grouped bars of per-question wall time for both modes, log scale."""
    rows = [r for r in report.rows if r.error is None
            and r.t_baseline_s is not None and r.t_indexed_s is not None]
    if not rows:
        return False
    ids = [r.id for r in rows]
    xs = range(len(rows))
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(6.0, 0.9 * len(rows) + 2), 4.0))
    ax.bar([x - width / 2 for x in xs], [r.t_baseline_s for r in rows],
           width, label="baseline (full scan)", color="#c44e52")
    ax.bar([x + width / 2 for x in xs], [r.t_indexed_s for r in rows],
           width, label="indexed", color="#4c72b0")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(ids, rotation=30, ha="right")
    ax.set_ylabel("response time (s)")
    ax.set_yscale("log")
    if report.aggregates.mean_improvement_pct is not None:
        ax.set_title("Response time per question "
                     f"(mean improvement {report.aggregates.mean_improvement_pct:.2f}%)")
    else:
        ax.set_title("Response time per question")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return True


def render_bleu_figure(report: BenchReport, path: str) -> bool:
    """Mean BLEU per mode; skipped when no row carries BLEU scores."""
    agg = report.aggregates
    if agg.mean_bleu_indexed is None and agg.mean_bleu_baseline is None:
        return False
    labels, values = [], []
    if agg.mean_bleu_baseline is not None:
        labels.append("baseline")
        values.append(agg.mean_bleu_baseline)
    if agg.mean_bleu_indexed is not None:
        labels.append("indexed")
        values.append(agg.mean_bleu_indexed)
    fig, ax = plt.subplots(figsize=(4.5, 4.0))
    ax.bar(labels, values, color=["#c44e52", "#4c72b0"][: len(labels)], width=0.55)
    for i, v in enumerate(values):
        ax.annotate(f"{v:.3f}", (i, v), ha="center", va="bottom")
    ax.set_ylabel("mean BLEU")
    ax.set_ylim(0, 1.05)
    title = "Answer quality by mode"
    if agg.bleu_delta is not None:
        title += f" (delta {agg.bleu_delta:+.3f})"
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return True


def render_report_figures(report: BenchReport, report_path: str) -> list[str]:
    """Render all applicable figures next to report_path; returns paths written."""
    stem_path, _ = os.path.splitext(report_path)
    written = []
    time_path = stem_path + "_times.png"
    if render_time_figure(report, time_path):
        written.append(time_path)
    bleu_path = stem_path + "_bleu.png"
    if render_bleu_figure(report, bleu_path):
        written.append(bleu_path)
    return written
