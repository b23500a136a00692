"""Matplotlib renderings written next to the CLI's JSON reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_outcome_histogram(counts: dict, path, title: str = "control-qubit outcomes"):
    """Bar chart of the measured 0/1 tallies of the control qubit."""
    path = Path(path)
    labels = ["0", "1"]
    values = [counts.get("0", 0), counts.get("1", 0)]
    fig, ax = plt.subplots(figsize=(4.0, 3.0))
    bars = ax.bar(labels, values, color=["#4878cf", "#d65f5f"], width=0.55)
    total = sum(values)
    for bar, v in zip(bars, values):
        frac = v / total if total else 0.0
        ax.annotate(f"{frac:.4f}", (bar.get_x() + bar.get_width() / 2, v),
                    ha="center", va="bottom", fontsize=9)
    ax.set_xlabel("outcome")
    ax.set_ylabel("shots")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_knn_scores(score_estimates, analytic_scores, selected, path):
    """Per-index estimated vs analytic neighbor scores; picks highlighted."""
    path = Path(path)
    estimates = np.asarray(score_estimates, dtype=float)
    analytic = np.asarray(analytic_scores, dtype=float)
    idx = np.arange(estimates.size)
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(4.0, 0.8 * estimates.size + 2), 3.2))
    ax.bar(idx - width / 2, estimates, width, label="estimated", color="#4878cf")
    ax.bar(idx + width / 2, analytic, width, label="analytic", color="#6acc65")
    for i in selected:
        ax.axvspan(i - 0.5, i + 0.5, color="gold", alpha=0.2, zorder=0)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(idx)
    ax.set_xlabel("training index")
    ax.set_ylabel("P(i|0) - P(i|1)")
    ax.set_title("neighbor scores (selected indexes shaded)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
