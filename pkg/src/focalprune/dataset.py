"""Prediction-log data model: loading, validation, correctness, and team enumeration.

A dataset is a complete M x N matrix of predicted class labels (one row per
member model) plus the ground-truth labels and, optionally, an M x N x C
tensor of per-class confidences.  Everything downstream (diversity metrics,
focal scoring, pruning, voting) operates on this immutable structure.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

#: Team: canonical form is a strictly increasing tuple of model indices.
Team = tuple[int, ...]

#: Hard ceiling for exhaustive team enumeration (2^25 candidate sets).
MAX_ENUMERATION_MODELS = 25

CONFIDENCE_SUM_TOL = 1e-6

_CLASSES_DIRECTIVE = re.compile(r"^#\s*classes\s*=\s*(\d+)\s*$")


class DataFormatError(ValueError):
    """A malformed prediction log; message carries file and line number."""

    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


def make_team(members: Iterable[int], num_models: int | None = None) -> Team:
    """Canonicalize a collection of model indices into a Team tuple.

    Raises ValueError on duplicates, negative indices, fewer than two
    members, or indices >= num_models when given.
    """
    team = tuple(sorted(int(m) for m in members))
    if len(team) < 2:
        raise ValueError(f"a team needs at least 2 members, got {team}")
    if len(set(team)) != len(team):
        raise ValueError(f"duplicate model indices in team {team}")
    if team[0] < 0:
        raise ValueError(f"negative model index in team {team}")
    if num_models is not None and team[-1] >= num_models:
        raise ValueError(f"model index {team[-1]} out of range for M={num_models}")
    return team


def team_label(team: Sequence[int], num_models: int | None = None) -> str:
    """Render a team as concatenated indices ("0123"); dash-joined once
    indices can exceed one digit."""
    wide = (num_models or (max(team) + 1)) > 10
    return "-".join(str(m) for m in team) if wide else "".join(str(m) for m in team)


@dataclass(frozen=True)
class PredictionDataset:
    """Immutable prediction log for M models over N samples and C classes."""

    model_names: tuple[str, ...]
    truth: np.ndarray                     # (N,) int
    predictions: np.ndarray               # (M, N) int
    num_classes: int
    confidences: np.ndarray | None = None  # (M, N, C) float
    sample_ids: tuple[str, ...] = ()

    def __post_init__(self):
        truth = np.asarray(self.truth, dtype=np.int64)
        preds = np.asarray(self.predictions, dtype=np.int64)
        object.__setattr__(self, "truth", truth)
        object.__setattr__(self, "predictions", preds)
        object.__setattr__(self, "model_names", tuple(self.model_names))

        m, n = preds.shape if preds.ndim == 2 else (0, 0)
        if preds.ndim != 2 or m < 2:
            raise ValueError("predictions must be an M x N matrix with M >= 2")
        if truth.shape != (n,) or n < 1:
            raise ValueError("truth must be a length-N vector with N >= 1")
        if len(self.model_names) != m:
            raise ValueError("model_names must have one entry per model")
        if len(set(self.model_names)) != m:
            raise ValueError("model names must be unique")
        if self.num_classes < 2:
            raise ValueError("need at least 2 classes")
        for name in self.model_names:
            if "," in name or "\n" in name or not name:
                raise ValueError(f"invalid model name {name!r}")

        c = self.num_classes
        if truth.min() < 0 or truth.max() >= c:
            raise ValueError(f"truth labels must lie in [0, {c})")
        if preds.min() < 0 or preds.max() >= c:
            raise ValueError(f"predicted labels must lie in [0, {c})")

        if not self.sample_ids:
            object.__setattr__(self, "sample_ids", tuple(str(i) for i in range(n)))
        elif len(self.sample_ids) != n:
            raise ValueError("sample_ids must have one entry per sample")
        if len(set(self.sample_ids)) != n:
            raise ValueError("sample ids must be unique")

        if self.confidences is not None:
            conf = np.asarray(self.confidences, dtype=np.float64)
            object.__setattr__(self, "confidences", conf)
            if conf.shape != (m, n, c):
                raise ValueError(f"confidences must have shape {(m, n, c)}")
            sums = conf.sum(axis=2)
            if not np.allclose(sums, 1.0, atol=CONFIDENCE_SUM_TOL, rtol=0.0):
                raise ValueError("each confidence row must sum to 1 within 1e-6")
            if not np.array_equal(conf.argmax(axis=2), preds):
                raise ValueError("confidence argmax must equal the predicted label")
            conf.flags.writeable = False
        truth.flags.writeable = False
        preds.flags.writeable = False

    @property
    def num_models(self) -> int:
        return self.predictions.shape[0]

    @property
    def num_samples(self) -> int:
        return self.predictions.shape[1]

    @cached_property
    def correctness(self) -> np.ndarray:
        """M x N boolean matrix; entry (m, n) is True iff model m is right on n."""
        bits = self.predictions == self.truth[None, :]
        bits.flags.writeable = False
        return bits


@dataclass(frozen=True)
class NegativeSampleSet:
    """The samples a focal model misclassifies (possibly none)."""

    focal: int
    samples: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.samples)

    @cached_property
    def as_array(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=np.int64)


def correctness_matrix(ds: PredictionDataset) -> np.ndarray:
    return ds.correctness


def member_accuracies(ds: PredictionDataset) -> np.ndarray:
    """Per-model accuracy: popcount of the correctness row over N."""
    return ds.correctness.sum(axis=1) / ds.num_samples


def negative_sample_set(ds: PredictionDataset, focal: int) -> NegativeSampleSet:
    """All sample indices the focal model gets wrong, in ascending order."""
    if not 0 <= focal < ds.num_models:
        raise ValueError(f"focal index {focal} out of range for M={ds.num_models}")
    idx = np.flatnonzero(~ds.correctness[focal])
    return NegativeSampleSet(focal=focal, samples=tuple(int(i) for i in idx))


def negative_sample_sets(
    ds: PredictionDataset,
    sample_size: int | None = None,
    seed: int | None = None,
) -> dict[int, NegativeSampleSet]:
    """Negative sample sets for every model.

    By default the full (deterministic) sets are returned.  When
    ``sample_size`` is given, each set larger than that is subsampled
    without replacement using a per-focal substream of ``seed``.
    """
    if sample_size is not None and sample_size < 1:
        raise ValueError("sample_size must be positive")
    out: dict[int, NegativeSampleSet] = {}
    for focal in range(ds.num_models):
        full = negative_sample_set(ds, focal)
        if sample_size is not None and len(full) > sample_size:
            rng = np.random.default_rng([0 if seed is None else seed, focal])
            picked = rng.choice(full.as_array, size=sample_size, replace=False)
            full = NegativeSampleSet(focal, tuple(int(i) for i in np.sort(picked)))
        out[focal] = full
    return out


def _check_size_range(num_models: int, lo: int, hi: int) -> None:
    if not 2 <= lo <= hi <= num_models:
        raise ValueError(
            f"size range [{lo}, {hi}] invalid for M={num_models}; need 2 <= lo <= hi <= M"
        )


def enumerate_teams(
    num_models: int,
    size_range: tuple[int, int] | None = None,
    *,
    allow_large: bool = False,
) -> Iterator[Team]:
    """Yield candidate teams, sizes ascending, lexicographic within a size.

    The default range [2, M-1] covers the 2^M - (2 + M) proper sub-ensembles.
    Refuses M > 25 unless ``allow_large`` is set (combinatorial guard).
    """
    if num_models > MAX_ENUMERATION_MODELS and not allow_large:
        raise ValueError(
            f"M={num_models} exceeds the enumeration guard of {MAX_ENUMERATION_MODELS}; "
            "pass allow_large=True (CLI: --allow-large) to override"
        )
    lo, hi = size_range if size_range is not None else (2, num_models - 1)
    _check_size_range(num_models, lo, hi)
    for size in range(lo, hi + 1):
        yield from combinations(range(num_models), size)


def count_teams(num_models: int, size_range: tuple[int, int] | None = None) -> int:
    """Closed-form team count over the size range (full range by default)."""
    lo, hi = size_range if size_range is not None else (2, num_models - 1)
    _check_size_range(num_models, lo, hi)
    return sum(math.comb(num_models, s) for s in range(lo, hi + 1))


# ---------------------------------------------------------------------------
# CSV ingestion / canonical serialization
# ---------------------------------------------------------------------------

def _parse_label(path, line_no: int, token: str, column: str) -> int:
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        raise DataFormatError(path, line_no, f"non-integer label {token!r} in column {column!r}") from None


def load_predictions(path, confidence_dir=None) -> PredictionDataset:
    """Load and validate a wide-form prediction CSV.

    Format: optional ``# classes=C`` directive, a header line
    ``sample_id,truth,<name_0>,...,<name_{M-1}>``, then one row of integer
    labels per sample.  When ``confidence_dir`` is given, one
    ``<model_name>.csv`` per model is loaded and cross-validated against the
    predicted labels.  All violations raise DataFormatError with file/line.
    """
    path = Path(path)
    if not path.is_file():
        raise DataFormatError(path, 0, "file not found")
    declared_classes: int | None = None
    header: list[str] | None = None
    header_line = 0
    sample_ids: list[str] = []
    truth_rows: list[int] = []
    pred_rows: list[list[int]] = []
    seen_ids: set[str] = set()

    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            if line.lstrip().startswith("#"):
                m = _CLASSES_DIRECTIVE.match(line.strip())
                if m:
                    declared_classes = int(m.group(1))
                    if declared_classes < 2:
                        raise DataFormatError(path, line_no, f"classes={declared_classes} must be >= 2")
                continue
            cells = line.split(",")
            if header is None:
                if len(cells) < 4 or cells[0] != "sample_id" or cells[1] != "truth":
                    raise DataFormatError(
                        path, line_no,
                        "header must be 'sample_id,truth,<name_0>,...' with at least two models",
                    )
                header = [c.strip() for c in cells[2:]]
                header_line = line_no
                if any(not name for name in header):
                    raise DataFormatError(path, line_no, "empty model name in header")
                if len(set(header)) != len(header):
                    raise DataFormatError(path, line_no, "duplicate model name in header")
                continue
            if len(cells) != len(header) + 2:
                raise DataFormatError(
                    path, line_no,
                    f"malformed row: expected {len(header) + 2} columns, found {len(cells)}",
                )
            sid = cells[0].strip()
            if sid in seen_ids:
                raise DataFormatError(path, line_no, f"duplicate sample_id {sid!r}")
            seen_ids.add(sid)
            labels = [_parse_label(path, line_no, tok, col)
                      for tok, col in zip(cells[1:], ["truth", *header])]
            for col, lab in zip(["truth", *header], labels):
                if lab < 0:
                    raise DataFormatError(path, line_no, f"negative label {lab} in column {col!r}")
                if declared_classes is not None and lab >= declared_classes:
                    raise DataFormatError(
                        path, line_no,
                        f"label {lab} out of range (classes={declared_classes}) in column {col!r}",
                    )
            sample_ids.append(sid)
            truth_rows.append(labels[0])
            pred_rows.append(labels[1:])

    if header is None:
        raise DataFormatError(path, 0, "missing header line")
    if not pred_rows:
        raise DataFormatError(path, header_line, "no sample rows")

    truth = np.array(truth_rows, dtype=np.int64)
    preds = np.array(pred_rows, dtype=np.int64).T
    num_classes = declared_classes if declared_classes is not None else int(max(truth.max(), preds.max())) + 1
    num_classes = max(num_classes, 2)

    confidences = None
    if confidence_dir is not None:
        confidences = _load_confidences(
            Path(confidence_dir), header, sample_ids, preds, num_classes
        )

    try:
        return PredictionDataset(
            model_names=tuple(header),
            truth=truth,
            predictions=preds,
            num_classes=num_classes,
            confidences=confidences,
            sample_ids=tuple(sample_ids),
        )
    except ValueError as exc:
        raise DataFormatError(path, header_line, str(exc)) from exc


def _load_confidences(directory, names, sample_ids, preds, num_classes) -> np.ndarray:
    if not directory.is_dir():
        raise DataFormatError(directory, 0, "confidence directory not found")
    n = len(sample_ids)
    id_index = {sid: i for i, sid in enumerate(sample_ids)}
    conf = np.zeros((len(names), n, num_classes), dtype=np.float64)
    expected_header = ["sample_id"] + [f"p_{c}" for c in range(num_classes)]
    for m, name in enumerate(names):
        fpath = directory / f"{name}.csv"
        if not fpath.is_file():
            raise DataFormatError(fpath, 0, f"missing confidence file for model {name!r}")
        filled = np.zeros(n, dtype=bool)
        with open(fpath, "r", encoding="utf-8", newline="") as fh:
            header_seen = False
            for line_no, raw in enumerate(fh, start=1):
                line = raw.rstrip("\r\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                cells = [c.strip() for c in line.split(",")]
                if not header_seen:
                    if cells != expected_header:
                        raise DataFormatError(
                            fpath, line_no,
                            f"confidence header must be {','.join(expected_header)!r}",
                        )
                    header_seen = True
                    continue
                if len(cells) != num_classes + 1:
                    raise DataFormatError(
                        fpath, line_no,
                        f"malformed row: expected {num_classes + 1} columns, found {len(cells)}",
                    )
                sid = cells[0]
                if sid not in id_index:
                    raise DataFormatError(fpath, line_no, f"unknown sample_id {sid!r}")
                i = id_index[sid]
                if filled[i]:
                    raise DataFormatError(fpath, line_no, f"duplicate sample_id {sid!r}")
                try:
                    row = np.array([float(c) for c in cells[1:]], dtype=np.float64)
                except ValueError:
                    raise DataFormatError(fpath, line_no, "non-numeric confidence value") from None
                if abs(row.sum() - 1.0) > CONFIDENCE_SUM_TOL:
                    raise DataFormatError(
                        fpath, line_no,
                        f"confidence row sums to {row.sum():.8f}, expected 1 within {CONFIDENCE_SUM_TOL}",
                    )
                if int(row.argmax()) != int(preds[m, i]):
                    raise DataFormatError(
                        fpath, line_no,
                        f"confidence argmax {int(row.argmax())} disagrees with predicted label {int(preds[m, i])}",
                    )
                conf[m, i] = row
                filled[i] = True
        if not filled.all():
            missing = sample_ids[int(np.flatnonzero(~filled)[0])]
            raise DataFormatError(fpath, 0, f"missing confidence row for sample_id {missing!r}")
    return conf


def canonical_csv(ds: PredictionDataset) -> str:
    """Canonical wide-form text: directive, header, then rows in sample order."""
    lines = [f"# classes={ds.num_classes}", "sample_id,truth," + ",".join(ds.model_names)]
    for i, sid in enumerate(ds.sample_ids):
        row = [sid, str(int(ds.truth[i]))] + [str(int(ds.predictions[m, i])) for m in range(ds.num_models)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_predictions(ds: PredictionDataset, path) -> None:
    Path(path).write_text(canonical_csv(ds), encoding="utf-8")


def write_confidences(ds: PredictionDataset, directory) -> None:
    """One canonical CSV per model; requires confidences to be present."""
    if ds.confidences is None:
        raise ValueError("dataset has no confidences")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    header = "sample_id," + ",".join(f"p_{c}" for c in range(ds.num_classes))
    for m, name in enumerate(ds.model_names):
        lines = [header]
        for i, sid in enumerate(ds.sample_ids):
            lines.append(sid + "," + ",".join(repr(float(v)) for v in ds.confidences[m, i]))
        (directory / f"{name}.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
