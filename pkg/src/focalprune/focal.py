"""Focal diversity scoring: negative-correlation groups, scaling, aggregation.

For every (team size, focal model) group, each candidate team containing the
focal model gets a raw focal negative correlation score, i.e. the baseline
metric evaluated only on the samples the focal model misclassifies.  Raw
scores are min-max scaled within the group, then each team's scaled scores
are combined into one focal diversity score using accuracy-rank weights.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .dataset import (
    NegativeSampleSet,
    PredictionDataset,
    Team,
    member_accuracies,
    negative_sample_sets,
    team_label,
)
from .diversity import BASELINE_METRICS, team_diversity

FOCAL_METRICS = ("f-ck", "f-bd", "f-kw", "f-gd")

#: Scaled score assigned to every team of a group whose raw scores all tie,
#: and to teams whose members are all error-free: neutral, never best/worst.
NEUTRAL_SCORE = 0.5

FLAG_SCALE_DEGENERATE = "scale_degenerate"
FLAG_METRIC_DEGENERATE = "metric_degenerate"
FLAG_ALL_PERFECT = "all_members_perfect"


def base_metric_of(metric: str) -> str:
    """Map a focal metric id (f-gd, ...) to its baseline metric id (gd, ...)."""
    metric = metric.lower()
    if metric in FOCAL_METRICS:
        return metric[2:]
    raise ValueError(f"unknown focal metric {metric!r}; expected one of {FOCAL_METRICS}")


def focal_negative_correlation(
    metric: str,
    cm: np.ndarray,
    team: Team,
    focal: int,
    neg: NegativeSampleSet,
) -> float:
    """Baseline metric for the team restricted to the focal model's negative set."""
    if focal not in team:
        raise ValueError(f"focal model {focal} is not a member of team {team}")
    if len(neg) == 0:
        raise ValueError(f"perfect focal model {focal}: empty negative sample set")
    base = metric if metric in BASELINE_METRICS else base_metric_of(metric)
    value, _ = team_diversity(base, cm, team, neg.as_array)
    return value


@dataclass
class FocalGroup:
    """Raw and scaled focal negative correlation scores for one
    (metric, size, focal) group of candidate teams."""

    metric: str
    size: int
    focal: int
    raw: dict[Team, float]
    scaled: dict[Team, float] = field(default_factory=dict)
    degenerate: bool = False
    metric_degenerate_teams: frozenset[Team] = frozenset()


def scale_group(group: FocalGroup) -> FocalGroup:
    """Populate min-max scaled scores in [0, 1]; an all-equal group maps every
    team to the neutral 0.5 and is flagged degenerate."""
    if not group.raw:
        raise ValueError("cannot scale an empty focal group")
    lo = min(group.raw.values())
    hi = max(group.raw.values())
    if hi == lo:
        group.scaled = {team: NEUTRAL_SCORE for team in group.raw}
        group.degenerate = True
    else:
        span = hi - lo
        group.scaled = {team: float((value - lo) / span) for team, value in group.raw.items()}
        group.degenerate = False
    return group


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ascending ranks starting at 1; exact ties share the mean of their ranks."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def accuracy_rank_weights(team: Team, accuracies: Sequence[float]) -> np.ndarray:
    """Normalized accuracy-rank weights for the team's members.

    The least accurate member ranks 1 and the most accurate ranks S (ties get
    the average of their ranks); weights are ranks normalized to sum to 1, so
    more accurate members weigh more.
    """
    if len(team) < 2:
        raise ValueError("need a team of at least 2 models")
    accs = np.asarray([accuracies[m] for m in team], dtype=np.float64)
    ranks = _average_ranks(accs)
    return ranks / ranks.sum()


class FocalContribution(NamedTuple):
    """One focal model's share of a team's focal diversity score."""

    focal: int
    scaled: float
    weight: float


@dataclass
class FocalScoreTable:
    """Focal diversity scores for a candidate set, with provenance and flags."""

    metric: str
    num_models: int
    scores: dict[Team, float]
    flags: dict[Team, tuple[str, ...]]
    provenance: dict[Team, tuple[FocalContribution, ...]]
    groups: dict[tuple[int, int], FocalGroup]

    def to_rows(self) -> list[tuple[str, str, float, str]]:
        """CSV rows (metric, team, fq, degenerate_flags), teams sorted."""
        rows = []
        for team in sorted(self.scores):
            rows.append((
                self.metric,
                team_label(team, self.num_models),
                self.scores[team],
                ";".join(self.flags.get(team, ())),
            ))
        return rows


def compute_focal_table(
    metric: str,
    ds: PredictionDataset,
    candidates_by_size: Mapping[int, Iterable[Team]],
    *,
    neg_sets: Mapping[int, NegativeSampleSet] | None = None,
) -> FocalScoreTable:
    """Run the focal diversity calculation over grouped candidate teams.

    For each size S and focal model f with a non-empty negative set, the
    group holds every candidate of size S containing f; raw scores are scaled
    per group.  A team's score is the accuracy-rank weighted average of its
    members' scaled scores, skipping error-free members and renormalizing the
    remaining weights.  Teams whose members are all error-free score the
    neutral 0.5 and are flagged.
    """
    base = base_metric_of(metric)
    cm = ds.correctness
    accs = member_accuracies(ds)
    if neg_sets is None:
        neg_sets = negative_sample_sets(ds)

    groups: dict[tuple[int, int], FocalGroup] = {}
    for size in sorted(candidates_by_size):
        teams = [tuple(t) for t in candidates_by_size[size]]
        if any(len(t) != size for t in teams):
            raise ValueError(f"candidate list for size {size} contains a team of another size")
        for focal in range(ds.num_models):
            neg = neg_sets[focal]
            if len(neg) == 0:
                continue
            subset = neg.as_array
            raw: dict[Team, float] = {}
            degenerate_teams = set()
            for team in teams:
                if focal not in team:
                    continue
                value, metric_degenerate = team_diversity(base, cm, team, subset)
                raw[team] = value
                if metric_degenerate:
                    degenerate_teams.add(team)
            if not raw:
                continue
            group = FocalGroup(
                metric=metric,
                size=size,
                focal=focal,
                raw=raw,
                metric_degenerate_teams=frozenset(degenerate_teams),
            )
            groups[(size, focal)] = scale_group(group)

    scores: dict[Team, float] = {}
    flags: dict[Team, tuple[str, ...]] = {}
    provenance: dict[Team, tuple[FocalContribution, ...]] = {}
    for size in sorted(candidates_by_size):
        for team in candidates_by_size[size]:
            team = tuple(team)
            weights = accuracy_rank_weights(team, accs)
            team_flags = set()
            entries = []
            for focal, weight in zip(team, weights):
                if len(neg_sets[focal]) == 0:
                    continue
                group = groups[(size, focal)]
                # A team containing its focal model always fails somewhere on
                # the focal negative set, so GD's no-failure branch cannot
                # trigger here; kappa pairs may still degenerate.
                assert team in group.scaled
                entries.append((focal, group.scaled[team], weight))
                if group.degenerate:
                    team_flags.add(FLAG_SCALE_DEGENERATE)
                if team in group.metric_degenerate_teams:
                    team_flags.add(FLAG_METRIC_DEGENERATE)
            if not entries:
                scores[team] = NEUTRAL_SCORE
                team_flags.add(FLAG_ALL_PERFECT)
                provenance[team] = ()
            else:
                weight_sum = sum(w for _, _, w in entries)
                scores[team] = float(sum(s * w for _, s, w in entries) / weight_sum)
                provenance[team] = tuple(
                    FocalContribution(f, float(s), float(w / weight_sum)) for f, s, w in entries
                )
            flags[team] = tuple(sorted(team_flags))

    return FocalScoreTable(
        metric=metric,
        num_models=ds.num_models,
        scores=scores,
        flags=flags,
        provenance=provenance,
        groups=groups,
    )
