"""Monte-Carlo check of the ensemble added-error ratio and synthetic data.

The added-error model predicts that averaging S members whose errors have
exchangeable pairwise correlation delta scales the error variance by
(1 + (S-1)*delta) / S.  ``simulate_correlated_errors`` verifies this with
Gaussian errors built from a shared component:

    eps_k = sqrt(base_variance) * (sqrt(delta) * z + sqrt(1 - delta) * u_k)

The synthetic prediction generator draws per-model correctness with exact
target marginals and a shared-latent coupling: per sample, with probability
``overlap`` every model reads one shared uniform (coincident errors), else
each model reads its own.  The resulting pairwise correctness correlation is
the derived quantity

    corr(a, b) = overlap * (min(e_a, e_b) - e_a * e_b)
                 / sqrt(e_a (1 - e_a) e_b (1 - e_b)),      e_m = 1 - accuracy_m

so overlap = 0 gives independent errors and overlap = 1 with equal
accuracies gives identical correctness rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataset import PredictionDataset

_SHARD_TRIALS = 1 << 14  # trials per seeded substream


@dataclass(frozen=True)
class CorrelatedErrorSpec:
    """Monte-Carlo setup for the added-error ratio check."""

    team_size: int
    delta: float
    trials: int
    seed: int
    base_variance: float = 1.0

    def __post_init__(self):
        if self.team_size < 1:
            raise ValueError("team_size must be >= 1")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.base_variance <= 0.0:
            raise ValueError("base_variance must be positive")


def predicted_error_ratio(team_size: int, delta: float) -> float:
    """Added-error ratio of an S-member averaging ensemble: (1 + (S-1)d) / S."""
    if team_size < 1:
        raise ValueError("team_size must be >= 1")
    return (1.0 + (team_size - 1) * delta) / team_size


class _RunningVariance:
    """Streaming mean/variance accumulator with batch (Chan) merging."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def merge_batch(self, values: np.ndarray) -> None:
        n = values.size
        if n == 0:
            return
        mean = float(values.mean())
        m2 = float(((values - mean) ** 2).sum())
        if self.count == 0:
            self.count, self.mean, self.m2 = n, mean, m2
            return
        delta = mean - self.mean
        total = self.count + n
        self.m2 += m2 + delta * delta * self.count * n / total
        self.mean += delta * n / total
        self.count = total

    def population_variance(self) -> float:
        return self.m2 / self.count


@dataclass(frozen=True)
class SimulationResult:
    spec: CorrelatedErrorSpec
    predicted: float
    empirical: float
    stderr: float


def simulate_correlated_errors(spec: CorrelatedErrorSpec) -> SimulationResult:
    """Estimate the added-error ratio of ensemble averaging by simulation.

    Trials are drawn in fixed-size shards, each from its own seeded
    substream, and merged with streaming variance aggregation, so the result
    depends only on (spec, seed).  The ratio is the variance of the per-trial
    ensemble mean over the pooled variance of the individual member errors;
    estimating the denominator from the same draws makes the degenerate cases
    (S = 1, delta = 1) come out at exactly 1.  The reported standard error
    combines both estimates' uncertainty, ignoring their positive coupling,
    so it is mildly conservative.
    """
    size = spec.team_size
    shared_scale = math.sqrt(spec.delta)
    own_scale = math.sqrt(1.0 - spec.delta)
    amplitude = math.sqrt(spec.base_variance)

    mean_stats = _RunningVariance()
    member_stats = _RunningVariance()
    remaining = spec.trials
    shard = 0
    while remaining > 0:
        batch = min(_SHARD_TRIALS, remaining)
        rng = np.random.default_rng([spec.seed, shard])
        z = rng.standard_normal((batch, 1))
        u = rng.standard_normal((batch, size))
        eps = amplitude * (shared_scale * z + own_scale * u)
        mean_stats.merge_batch(eps.mean(axis=1))
        member_stats.merge_batch(eps.reshape(-1))
        remaining -= batch
        shard += 1

    member_var = member_stats.population_variance()
    if member_var == 0.0:
        raise ValueError("degenerate simulation: member errors have zero variance")
    ratio = mean_stats.population_variance() / member_var
    if spec.trials < 2:
        stderr = math.inf
    else:
        stderr = ratio * math.sqrt(2.0 / (spec.trials - 1) + 2.0 / (spec.trials * size - 1))
    return SimulationResult(
        spec=spec,
        predicted=predicted_error_ratio(size, spec.delta),
        empirical=ratio,
        stderr=stderr,
    )


@dataclass(frozen=True)
class SyntheticSpec:
    """Shape and statistics of a generated prediction log."""

    num_models: int
    num_samples: int
    num_classes: int
    accuracies: tuple[float, ...]
    overlap: float
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "accuracies", tuple(float(a) for a in self.accuracies))
        if self.num_models < 2:
            raise ValueError("need at least 2 models")
        if len(self.accuracies) != self.num_models:
            raise ValueError("need one target accuracy per model")
        if self.num_samples < 1:
            raise ValueError("need at least 1 sample")
        if self.num_classes < 2:
            raise ValueError("need at least 2 classes")
        bad = [a for a in self.accuracies if not 0.0 < a <= 1.0]
        if bad:
            raise ValueError(
                f"infeasible accuracy {bad[0]}: target accuracies must lie in the feasible range (0, 1]"
            )
        if not 0.0 <= self.overlap <= 1.0:
            raise ValueError(
                f"infeasible overlap {self.overlap}: the shared-latent construction "
                "admits the feasible range [0, 1]"
            )


def _draw_block(
    rng: np.random.Generator,
    truth: np.ndarray,
    accuracies: np.ndarray,
    overlap: float,
    num_classes: int,
) -> np.ndarray:
    """Predicted labels for one block of models sharing one overlap coin.

    On shared-mode samples both the correctness draw and the wrong-label
    offset come from the sample-level stream, so coincident errors agree on
    the same wrong class the way near-duplicate models do; each model's
    marginal wrong label stays uniform over the non-true classes.
    """
    n = truth.size
    m = accuracies.size
    shared = rng.random(n)
    shared_offsets = rng.integers(1, num_classes, size=n)
    own = rng.random((m, n))
    own_offsets = rng.integers(1, num_classes, size=(m, n))
    use_shared = rng.random(n) < overlap
    draws = np.where(use_shared[None, :], shared[None, :], own)
    offsets = np.where(use_shared[None, :], shared_offsets[None, :], own_offsets)
    wrong = draws < (1.0 - accuracies)[:, None]
    return np.where(wrong, (truth[None, :] + offsets) % num_classes, truth[None, :])


def generate_synthetic(spec: SyntheticSpec) -> PredictionDataset:
    """Seed-deterministic prediction log with controlled accuracy and overlap."""
    rng = np.random.default_rng(spec.seed)
    truth = rng.integers(0, spec.num_classes, size=spec.num_samples)
    preds = _draw_block(
        rng, truth, np.asarray(spec.accuracies), spec.overlap, spec.num_classes
    )
    return PredictionDataset(
        model_names=tuple(f"m{i}" for i in range(spec.num_models)),
        truth=truth,
        predictions=preds,
        num_classes=spec.num_classes,
    )


def generate_clustered(
    num_samples: int,
    num_classes: int,
    groups: Sequence[tuple[Sequence[float], float]],
    seed: int,
) -> PredictionDataset:
    """Prediction log with per-group error coupling over one shared truth.

    ``groups`` is a sequence of (accuracies, overlap) blocks; models within a
    block share that block's overlap coin while blocks are independent, which
    yields cliques of near-duplicates next to independent models.
    """
    if not groups:
        raise ValueError("need at least one group")
    rng = np.random.default_rng([seed, 0])
    truth = rng.integers(0, num_classes, size=num_samples)
    blocks = []
    names = []
    for g, (accs, overlap) in enumerate(groups):
        accs = tuple(float(a) for a in accs)
        probe = SyntheticSpec(  # reuse the domain validation
            num_models=max(2, len(accs)),
            num_samples=num_samples,
            num_classes=num_classes,
            accuracies=accs if len(accs) >= 2 else accs * 2,
            overlap=overlap,
            seed=seed,
        )
        del probe
        block_rng = np.random.default_rng([seed, g + 1])
        blocks.append(
            _draw_block(block_rng, truth, np.asarray(accs), overlap, num_classes)
        )
        names.extend(f"g{g}m{i}" for i in range(len(accs)))
    preds = np.vstack(blocks)
    if preds.shape[0] < 2:
        raise ValueError("need at least 2 models in total")
    return PredictionDataset(
        model_names=tuple(names),
        truth=truth,
        predictions=preds,
        num_classes=num_classes,
    )
