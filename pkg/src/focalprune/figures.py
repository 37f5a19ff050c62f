"""Matplotlib figures rendered next to the delimited reports.

All renderers write straight to a file through the Agg backend, so they work
headless; callers pass plain numbers and paths.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def score_accuracy_scatter(
    path,
    points: Sequence[tuple[float, float, int]],
    *,
    threshold: float | None = None,
    reference_accuracy: float | None = None,
    title: str = "",
    xlabel: str = "diversity score",
) -> Path:
    """Score-vs-accuracy scatter colored by team size (mean-threshold view)."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if points:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        sizes = [p[2] for p in points]
        sc = ax.scatter(xs, ys, c=sizes, cmap="viridis", s=14, alpha=0.8)
        fig.colorbar(sc, ax=ax, label="team size")
    if threshold is not None:
        ax.axvline(threshold, color="red", linestyle="--", linewidth=1, label="mean threshold")
    if reference_accuracy is not None:
        ax.axhline(reference_accuracy, color="black", linestyle="--", linewidth=1,
                   label="reference accuracy")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("ensemble accuracy")
    if title:
        ax.set_title(title)
    if threshold is not None or reference_accuracy is not None:
        ax.legend(loc="lower right", fontsize=8)
    return _finish(fig, path)


def pruning_scatter(
    path,
    selected: Sequence[tuple[float, float]],
    pruned: Sequence[tuple[float, float]],
    *,
    reference_accuracy: float | None = None,
    title: str = "",
) -> Path:
    """Selected (red) vs pruned (black) teams in score/accuracy space."""
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    if pruned:
        ax.scatter([p[0] for p in pruned], [p[1] for p in pruned],
                   color="black", s=14, alpha=0.7, label="pruned")
    if selected:
        ax.scatter([p[0] for p in selected], [p[1] for p in selected],
                   color="red", s=16, alpha=0.9, label="selected")
    if reference_accuracy is not None:
        ax.axhline(reference_accuracy, color="black", linestyle="--", linewidth=1,
                   label="reference accuracy")
    ax.set_xlabel("focal diversity score")
    ax.set_ylabel("ensemble accuracy")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    return _finish(fig, path)


def simulation_curves(path, rows: Sequence[Mapping], *, title: str = "") -> Path:
    """Predicted added-error ratio curves with empirical points per team size.

    Rows carry team_size, delta, predicted, empirical, stderr.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    by_size: dict[int, list[Mapping]] = {}
    for row in rows:
        by_size.setdefault(int(row["team_size"]), []).append(row)
    for size, group in sorted(by_size.items()):
        group = sorted(group, key=lambda r: r["delta"])
        deltas = [r["delta"] for r in group]
        ax.plot(deltas, [r["predicted"] for r in group], "-", linewidth=1,
                label=f"S={size} predicted")
        ax.errorbar(deltas, [r["empirical"] for r in group],
                    yerr=[3 * r["stderr"] for r in group],
                    fmt="o", markersize=3.5, capsize=2, label=f"S={size} empirical")
    ax.set_xlabel("pairwise error correlation")
    ax.set_ylabel("added-error ratio")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)
