"""Ensemble voting, the exhaustive accuracy oracle, and pruning quality.

The oracle evaluates every candidate team's ensemble accuracy and labels a
team "good" when it meets the full ensemble's reference accuracy, which is
what pruning precision and recall are measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dataset import PredictionDataset, Team, enumerate_teams, member_accuracies

VOTING_METHODS = ("plurality", "soft_average")

#: Oracle guard: 2^20 candidate teams is the default exhaustive-search limit.
MAX_ORACLE_MODELS = 20

FLAG_EMPTY_SELECTION = "empty_selection"
FLAG_NO_GOOD_TEAMS = "no_good_teams"


def _check_method(method: str) -> None:
    if method not in VOTING_METHODS:
        raise ValueError(f"unknown voting method {method!r}; expected one of {VOTING_METHODS}")


def ensemble_predictions(ds: PredictionDataset, team: Sequence[int], method: str = "plurality") -> np.ndarray:
    """Consensus label per sample for the whole dataset.

    Plurality ties go to the tied class whose voters have the largest summed
    accuracy, then to the lowest class index.  Soft averaging takes the
    argmax of the mean confidence vector and requires confidences.
    """
    _check_method(method)
    members = list(team)
    if not members:
        raise ValueError("empty team")
    if method == "soft_average":
        if ds.confidences is None:
            raise ValueError("soft_average voting requires confidences")
        return ds.confidences[members].mean(axis=0).argmax(axis=1)

    n = ds.num_samples
    cols = np.arange(n)
    counts = np.zeros((ds.num_classes, n), dtype=np.int64)
    acc_sum = np.zeros((ds.num_classes, n), dtype=np.float64)
    accs = member_accuracies(ds)
    for m in members:
        counts[ds.predictions[m], cols] += 1
        acc_sum[ds.predictions[m], cols] += accs[m]

    best = np.zeros(n, dtype=np.int64)
    for c in range(1, ds.num_classes):
        bc = counts[best, cols]
        ba = acc_sum[best, cols]
        take = (counts[c] > bc) | ((counts[c] == bc) & (acc_sum[c] > ba))
        best[take] = c
    return best


def ensemble_predict(ds: PredictionDataset, team: Sequence[int], sample: int, method: str = "plurality") -> int:
    """Consensus label for one sample."""
    if not 0 <= sample < ds.num_samples:
        raise ValueError(f"sample index {sample} out of range")
    return int(ensemble_predictions(ds, team, method)[sample])


def ensemble_accuracy(ds: PredictionDataset, team: Sequence[int], method: str = "plurality") -> float:
    """Fraction of samples where the consensus label equals the truth."""
    return float((ensemble_predictions(ds, team, method) == ds.truth).mean())


@dataclass(frozen=True)
class OracleTable:
    """Exhaustive team accuracies plus the reference-beating good set."""

    method: str
    num_models: int
    size_range: tuple[int, int]
    reference_accuracy: float
    accuracies: dict[Team, float]
    good: frozenset[Team]

    def good_of_size(self, size: int) -> frozenset[Team]:
        return frozenset(t for t in self.good if len(t) == size)


def brute_force_oracle(
    ds: PredictionDataset,
    method: str = "plurality",
    size_range: tuple[int, int] | None = None,
    *,
    allow_large: bool = False,
) -> OracleTable:
    """Evaluate every candidate team and label the good ones.

    The reference accuracy is the full M-model ensemble under the same voting
    method; "good" means accuracy >= reference.  Refuses M > 20 without
    ``allow_large``.
    """
    _check_method(method)
    m = ds.num_models
    if m > MAX_ORACLE_MODELS and not allow_large:
        raise ValueError(
            f"M={m} exceeds the oracle guard of {MAX_ORACLE_MODELS}; "
            "pass allow_large=True (CLI: --allow-large) to override"
        )
    size_range = size_range if size_range is not None else (2, m - 1)
    reference = ensemble_accuracy(ds, tuple(range(m)), method)
    accuracies: dict[Team, float] = {}
    for team in enumerate_teams(m, size_range, allow_large=True):
        accuracies[team] = ensemble_accuracy(ds, team, method)
    good = frozenset(t for t, acc in accuracies.items() if acc >= reference)
    return OracleTable(
        method=method,
        num_models=m,
        size_range=size_range,
        reference_accuracy=reference,
        accuracies=accuracies,
        good=good,
    )


def cost_reduction(num_models: int, team_size: int) -> float:
    """Relative ensemble-execution saving of a size-S team: (M - S) / M."""
    return (num_models - team_size) / num_models


@dataclass(frozen=True)
class PruneQuality:
    """Precision/recall of a selection against the oracle, with cost stats."""

    precision: float
    recall: float
    accuracy_range: tuple[float, float] | None
    cost_reduction_range: tuple[float, float] | None
    selected_count: int
    good_count: int
    true_positive_count: int
    flags: tuple[str, ...] = ()


def prune_quality(
    selected: Iterable[Team],
    oracle: OracleTable,
    scope: int | None = None,
) -> PruneQuality:
    """Score a selection against the oracle's good set.

    ``scope`` restricts the recall denominator to good teams of one size (the
    fixed-target-size regime); with scope None every oracle-covered size
    counts (the mean-threshold regime).  Precision over an empty selection is
    0 and flagged.
    """
    teams = sorted(set(tuple(t) for t in selected))
    missing = [t for t in teams if t not in oracle.accuracies]
    if missing:
        raise ValueError(f"oracle does not cover selected team {missing[0]}")
    good = oracle.good_of_size(scope) if scope is not None else oracle.good
    if scope is not None:
        lo, hi = oracle.size_range
        if not lo <= scope <= hi:
            raise ValueError(f"scope size {scope} outside oracle range {oracle.size_range}")

    flags = []
    hits = [t for t in teams if t in good]
    if teams:
        precision = len(hits) / len(teams)
    else:
        precision = 0.0
        flags.append(FLAG_EMPTY_SELECTION)
    if good:
        recall = len(hits) / len(good)
    else:
        recall = 0.0
        flags.append(FLAG_NO_GOOD_TEAMS)

    if teams:
        accs = [oracle.accuracies[t] for t in teams]
        reductions = [cost_reduction(oracle.num_models, len(t)) for t in teams]
        acc_range = (min(accs), max(accs))
        cost_range = (min(reductions), max(reductions))
    else:
        acc_range = None
        cost_range = None

    return PruneQuality(
        precision=precision,
        recall=recall,
        accuracy_range=acc_range,
        cost_reduction_range=cost_range,
        selected_count=len(teams),
        good_count=len(good),
        true_positive_count=len(hits),
        flags=tuple(flags),
    )
