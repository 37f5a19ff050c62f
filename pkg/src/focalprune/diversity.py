"""Baseline ensemble-diversity metrics over a correctness matrix.

All four metrics are computed from the boolean correctness matrix restricted
to an arbitrary subset of sample indices, so the same kernels serve both the
whole-validation-set baseline scores and the focal negative-correlation
scores.  Counts are exact integers; scores are double precision.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .dataset import Team

BASELINE_METRICS = ("ck", "bd", "kw", "gd")


class PairwiseCounts(NamedTuple):
    """2x2 correctness contingency for a model pair over a sample subset."""

    n11: int  # both correct
    n10: int  # first only
    n01: int  # second only
    n00: int  # both wrong


def _subset_index(subset) -> np.ndarray:
    idx = np.asarray(subset, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty sample set")
    return idx


def pairwise_counts(cm: np.ndarray, a: int, b: int, subset) -> PairwiseCounts:
    """Exact both/first-only/second-only/neither counts over the subset."""
    if a == b:
        raise ValueError("pairwise counts need two distinct models")
    idx = _subset_index(subset)
    ra = cm[a, idx]
    rb = cm[b, idx]
    n11 = int(np.count_nonzero(ra & rb))
    n10 = int(np.count_nonzero(ra & ~rb))
    n01 = int(np.count_nonzero(~ra & rb))
    n00 = idx.size - n11 - n10 - n01
    return PairwiseCounts(n11, n10, n01, n00)


def kappa_pair_diversity(counts: PairwiseCounts) -> tuple[float, bool]:
    """1 - kappa for one pair; a zero contingency denominator (no variation)
    yields diversity 0 with the degenerate flag set."""
    n11, n10, n01, n00 = counts
    denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00)
    if denom == 0:
        return 0.0, True
    kappa = 2.0 * (n11 * n00 - n01 * n10) / denom
    return 1.0 - kappa, False


def _check_team(team: Sequence[int]) -> list[int]:
    members = list(team)
    if len(members) < 2:
        raise ValueError("diversity metrics need a team of at least 2 models")
    return members


def _ck_kernel(cm, team, subset) -> tuple[float, bool]:
    members = _check_team(team)
    idx = _subset_index(subset)
    total = 0.0
    degenerate = False
    pairs = list(combinations(members, 2))
    for a, b in pairs:
        value, flag = kappa_pair_diversity(pairwise_counts(cm, a, b, idx))
        total += value
        degenerate = degenerate or flag
    return float(total / len(pairs)), degenerate


def _bd_kernel(cm, team, subset) -> tuple[float, bool]:
    members = _check_team(team)
    idx = _subset_index(subset)
    total = 0.0
    pairs = list(combinations(members, 2))
    for a, b in pairs:
        c = pairwise_counts(cm, a, b, idx)
        total += (c.n10 + c.n01) / idx.size
    return float(total / len(pairs)), False


def _kw_kernel(cm, team, subset) -> tuple[float, bool]:
    members = _check_team(team)
    idx = _subset_index(subset)
    size = len(members)
    correct = cm[members][:, idx].sum(axis=0, dtype=np.int64)
    total = int((correct * (size - correct)).sum())
    return float(total / (idx.size * size * size)), False


def _gd_kernel(cm, team, subset) -> tuple[float, bool]:
    members = _check_team(team)
    idx = _subset_index(subset)
    size = len(members)
    wrong = size - cm[members][:, idx].sum(axis=0, dtype=np.int64)
    counts = [int(c) for c in np.bincount(wrong, minlength=size + 1)]
    n = idx.size
    p1 = sum((i / size) * (counts[i] / n) for i in range(1, size + 1))
    if p1 == 0.0:
        return 1.0, True
    p2 = sum((i / size) * ((i - 1) / (size - 1)) * (counts[i] / n) for i in range(2, size + 1))
    return float(1.0 - p2 / p1), False


_KERNELS = {"ck": _ck_kernel, "bd": _bd_kernel, "kw": _kw_kernel, "gd": _gd_kernel}


def cohens_kappa_diversity(cm: np.ndarray, team: Team, subset) -> float:
    """Mean over pairs of (1 - kappa); range [0, 2]."""
    return _ck_kernel(cm, team, subset)[0]


def binary_disagreement(cm: np.ndarray, team: Team, subset) -> float:
    """Mean over pairs of the disagreement rate; range [0, 1]."""
    return _bd_kernel(cm, team, subset)[0]


def kw_variance(cm: np.ndarray, team: Team, subset) -> float:
    """Kohavi-Wolpert variance of the per-sample correct-vote count; range [0, 0.25]."""
    return _kw_kernel(cm, team, subset)[0]


def generalized_diversity(cm: np.ndarray, team: Team, subset) -> float:
    """1 - p(2)/p(1) over the coincident-failure distribution; range [0, 1].

    A team with no failures at all on the subset has p(1) = 0 and scores 1.0
    (degenerate; see team_diversity for the flag).
    """
    return _gd_kernel(cm, team, subset)[0]


def team_diversity(metric: str, cm: np.ndarray, team: Team, subset) -> tuple[float, bool]:
    """Dispatch a baseline metric; returns (score, degenerate_flag)."""
    try:
        kernel = _KERNELS[metric]
    except KeyError:
        raise ValueError(f"unknown baseline metric {metric!r}; expected one of {BASELINE_METRICS}") from None
    return kernel(cm, team, subset)


def baseline_score_table(metric: str, cm: np.ndarray, teams) -> dict[Team, float]:
    """Baseline metric over the full sample set for each candidate team."""
    num_samples = cm.shape[1]
    subset = np.arange(num_samples)
    return {tuple(team): team_diversity(metric, cm, tuple(team), subset)[0] for team in teams}
