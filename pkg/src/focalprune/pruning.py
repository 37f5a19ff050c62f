"""Pruning engines: mean-threshold baseline, hierarchical pruning, consensus.

Hierarchical pruning walks team sizes 2..S_d.  At each size it skips every
candidate that contains an already-pruned subset, scores the survivors with
the focal diversity table, and moves the lowest-diversity fraction into the
prune set, so their supersets are never scored at larger sizes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .dataset import PredictionDataset, Team
from .focal import compute_focal_table

DEFAULT_PRUNE_FRACTION = 0.10  # conservative per-level removal fraction


def default_target_size(num_models: int) -> int:
    """Recommended desired team size: half the entire ensemble."""
    return max(2, num_models // 2)


class PruneSet:
    """Minimal antichain of pruned teams, stored as bitmasks for subset tests."""

    def __init__(self, entries: Iterable[Team] = ()):  # entries in canonical form
        self._teams: list[Team] = []
        self._masks: list[int] = []
        for team in entries:
            self.add(team)

    @staticmethod
    def _mask(team: Team) -> int:
        mask = 0
        for m in team:
            mask |= 1 << m
        return mask

    def add(self, team: Team) -> None:
        """Insert a team, keeping the antichain minimal: drop the new entry if
        a stored subset already covers it, and evict stored supersets of it."""
        mask = self._mask(team)
        keep_teams, keep_masks = [], []
        for t, m in zip(self._teams, self._masks):
            if m & mask == m:        # existing subset of the new team
                return
            if m & mask != mask:     # not a superset of the new team
                keep_teams.append(t)
                keep_masks.append(m)
        keep_teams.append(tuple(team))
        keep_masks.append(mask)
        self._teams, self._masks = keep_teams, keep_masks

    def covers(self, team: Team) -> bool:
        """True iff some pruned entry is a subset of the team (equality counts)."""
        mask = self._mask(team)
        return any(m & mask == m for m in self._masks)

    def entries(self) -> tuple[Team, ...]:
        return tuple(sorted(self._teams, key=lambda t: (len(t), t)))

    def __len__(self) -> int:
        return len(self._teams)


def contains_pruned_subset(team: Team, prune_set: PruneSet) -> bool:
    return prune_set.covers(team)


@dataclass(frozen=True)
class MeanThresholdResult:
    threshold: float
    selected: tuple[Team, ...]


def mean_threshold_prune(scores: Mapping[Team, float]) -> MeanThresholdResult:
    """Baseline selection: keep teams scoring strictly above the mean score."""
    if not scores:
        raise ValueError("empty score table")
    threshold = sum(scores.values()) / len(scores)
    selected = tuple(sorted(t for t, v in scores.items() if v > threshold))
    return MeanThresholdResult(threshold=threshold, selected=selected)


@dataclass
class SelectionResult:
    """Outcome and per-level accounting of one hierarchical pruning run."""

    metric: str
    target_size: int
    prune_fraction: float
    selected: tuple[Team, ...]
    scored_counts: dict[int, int]
    pruned_counts: dict[int, int]
    skipped_counts: dict[int, int]
    level_seconds: dict[int, float]
    prune_set: PruneSet
    scores_by_size: dict[int, dict[Team, float]]
    flags_by_size: dict[int, dict[Team, tuple[str, ...]]]
    pruned_by_size: dict[int, tuple[Team, ...]]

    @property
    def final_scores(self) -> dict[Team, float]:
        return self.scores_by_size.get(self.target_size, {})


def hq_prune(
    metric: str,
    ds: PredictionDataset,
    target_size: int,
    prune_fraction: float = DEFAULT_PRUNE_FRACTION,
    *,
    scale_over_full: bool = False,
    neg_sets=None,
) -> SelectionResult:
    """Hierarchical pruning to the desired team size.

    At each size, n = floor(prune_fraction * survivors) lowest-diversity
    teams are pruned, ties broken by lexicographic team order so runs are
    deterministic.  With ``scale_over_full`` the per-group min-max scaling
    spans every size-S candidate rather than only the surviving ones.
    """
    num_models = ds.num_models
    if not 2 <= target_size <= num_models - 1:
        raise ValueError(f"target size {target_size} out of range [2, {num_models - 1}]")
    if not 0.0 <= prune_fraction < 1.0:
        raise ValueError(f"prune fraction {prune_fraction} out of range [0, 1)")

    prune_set = PruneSet()
    scored_counts: dict[int, int] = {}
    pruned_counts: dict[int, int] = {}
    skipped_counts: dict[int, int] = {}
    level_seconds: dict[int, float] = {}
    scores_by_size: dict[int, dict[Team, float]] = {}
    flags_by_size: dict[int, dict[Team, tuple[str, ...]]] = {}
    pruned_by_size: dict[int, tuple[Team, ...]] = {}
    selected: tuple[Team, ...] = ()

    for size in range(2, target_size + 1):
        started = time.perf_counter()
        candidates = list(combinations(range(num_models), size))
        survivors = [t for t in candidates if not prune_set.covers(t)]
        skipped_counts[size] = len(candidates) - len(survivors)
        scored_counts[size] = len(survivors)

        if survivors:
            score_pool = candidates if scale_over_full else survivors
            table = compute_focal_table(metric, ds, {size: score_pool}, neg_sets=neg_sets)
            scores = {t: table.scores[t] for t in survivors}
            flags = {t: table.flags[t] for t in survivors}
        else:
            scores, flags = {}, {}
        scores_by_size[size] = scores
        flags_by_size[size] = flags

        ranked = sorted(survivors, key=lambda t: (scores[t], t))
        n_prune = math.floor(prune_fraction * len(survivors))
        doomed = ranked[:n_prune]
        pruned_counts[size] = len(doomed)
        pruned_by_size[size] = tuple(sorted(doomed))
        if size < target_size:
            for team in doomed:
                prune_set.add(team)
        else:
            # Final level: removal only affects the selection; supersets of
            # these teams are never examined, so they stay out of the set.
            selected = tuple(sorted(ranked[n_prune:]))
        level_seconds[size] = time.perf_counter() - started

    return SelectionResult(
        metric=metric,
        target_size=target_size,
        prune_fraction=prune_fraction,
        selected=selected,
        scored_counts=scored_counts,
        pruned_counts=pruned_counts,
        skipped_counts=skipped_counts,
        level_seconds=level_seconds,
        prune_set=prune_set,
        scores_by_size=scores_by_size,
        flags_by_size=flags_by_size,
        pruned_by_size=pruned_by_size,
    )


def consensus_vote(selections: Sequence[SelectionResult], quorum: int = 3) -> tuple[Team, ...]:
    """Teams kept by at least ``quorum`` of the per-metric selections."""
    if quorum < 1:
        raise ValueError("quorum must be positive")
    if len(selections) < quorum:
        raise ValueError(f"need at least {quorum} selections, got {len(selections)}")
    sizes = {sel.target_size for sel in selections}
    if len(sizes) != 1:
        raise ValueError(f"mismatched target sizes across selections: {sorted(sizes)}")
    votes: dict[Team, int] = {}
    for sel in selections:
        for team in set(sel.selected):
            votes[team] = votes.get(team, 0) + 1
    return tuple(sorted(t for t, v in votes.items() if v >= quorum))
