"""Report serialization: deterministic JSON/CSV writers and the audit trail.

Every report embeds the fully resolved run configuration and a SHA-256 of
the input dataset file.  JSON is written with sorted keys and repr-exact
floats, so identical runs produce byte-identical files; wall-clock timings
go to a separate CSV because they can never be reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dataset import Team, team_label
from .evaluation import PruneQuality
from .pruning import SelectionResult

THREADS_ENV_VAR = "FOCALPRUNE_THREADS"


def resolve_threads(flag: int | None) -> int:
    """Worker cap: explicit flag wins, else the FOCALPRUNE_THREADS env var, else 1."""
    if flag is not None:
        value = flag
    else:
        raw = os.environ.get(THREADS_ENV_VAR, "")
        try:
            value = int(raw) if raw else 1
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR}={raw!r} is not an integer") from None
    if value < 1:
        raise ValueError("thread count must be >= 1")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved CLI invocation, embedded verbatim in every report."""

    subcommand: str
    dataset: str | None = None
    confidence_dir: str | None = None
    metrics: tuple[str, ...] = ()
    beta: float | None = None
    target_size: int | None = None
    consensus_quorum: int | None = None
    voting: str = "plurality"
    seed: int | None = None
    output_dir: str = "."
    format: str = "json"
    threads: int = 1
    neg_sample_size: int | None = None
    scale_over_full: bool = False
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        data = asdict(self)
        data["metrics"] = list(self.metrics)
        return data


def dataset_sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def dumps_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def write_json(payload, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(payload), encoding="utf-8")
    return path


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Delimited output with '\\n' line endings for stable bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def team_entry(team: Team, num_models: int, score: float | None = None,
               flags: Sequence[str] = (), accuracy: float | None = None) -> dict:
    """JSON form of one team: compact label plus the explicit index array."""
    entry: dict = {"team": team_label(team, num_models), "members": list(team)}
    if score is not None:
        entry["score"] = score
    if accuracy is not None:
        entry["accuracy"] = accuracy
    if flags:
        entry["flags"] = list(flags)
    return entry


def selection_payload(result: SelectionResult, num_models: int,
                      accuracies: Mapping[Team, float] | None = None) -> dict:
    """Deterministic JSON body for one hierarchical pruning run (no timing)."""
    levels = []
    for size in sorted(result.scored_counts):
        levels.append({
            "size": size,
            "scored": result.scored_counts[size],
            "pruned": result.pruned_counts[size],
            "skipped": result.skipped_counts[size],
        })
    selected = []
    for team in result.selected:
        selected.append(team_entry(
            team,
            num_models,
            score=result.final_scores.get(team),
            flags=result.flags_by_size.get(result.target_size, {}).get(team, ()),
            accuracy=None if accuracies is None else accuracies.get(team),
        ))
    return {
        "metric": result.metric,
        "target_size": result.target_size,
        "beta": result.prune_fraction,
        "levels": levels,
        "selected": selected,
        "prune_set": [team_label(t, num_models) for t in result.prune_set.entries()],
    }


def timing_rows(results: Sequence[SelectionResult]) -> list[tuple]:
    rows = []
    for result in results:
        for size in sorted(result.level_seconds):
            rows.append((
                result.metric, size, result.scored_counts[size],
                result.pruned_counts[size], result.skipped_counts[size],
                result.level_seconds[size],
            ))
    return rows


def quality_payload(quality: PruneQuality, reference_accuracy: float) -> dict:
    return {
        "reference_accuracy": reference_accuracy,
        "precision": quality.precision,
        "recall": quality.recall,
        "accuracy_range": list(quality.accuracy_range) if quality.accuracy_range else None,
        "cost_reduction_range": list(quality.cost_reduction_range) if quality.cost_reduction_range else None,
        "selected_count": quality.selected_count,
        "good_count": quality.good_count,
        "true_positive_count": quality.true_positive_count,
        "flags": list(quality.flags),
    }
