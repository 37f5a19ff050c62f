import numpy as np
import pytest

from focalprune import PredictionDataset

# Canonical 3-model / 5-sample fixture; every frozen value in the tests was
# re-derived from it with the brute-force oracles in tests/oracles.py.
FIXTURE_TRUTH = [0, 1, 0, 1, 2]
FIXTURE_PREDS = [
    [0, 1, 0, 1, 2],  # m0: all correct
    [0, 1, 0, 0, 0],  # m1: wrong on samples 3, 4
    [1, 1, 0, 1, 2],  # m2: wrong on sample 0
]

FIXTURE_CSV = (
    "# classes=3\n"
    "sample_id,truth,m0,m1,m2\n"
    "0,0,0,0,1\n"
    "1,1,1,1,1\n"
    "2,0,0,0,0\n"
    "3,1,1,0,1\n"
    "4,2,2,0,2\n"
)


@pytest.fixture
def fixture_ds() -> PredictionDataset:
    return PredictionDataset(
        model_names=("m0", "m1", "m2"),
        truth=FIXTURE_TRUTH,
        predictions=FIXTURE_PREDS,
        num_classes=3,
    )


@pytest.fixture
def fixture_csv(tmp_path):
    path = tmp_path / "fixture.csv"
    path.write_text(FIXTURE_CSV, encoding="utf-8")
    return path


def random_dataset(seed, num_models=None, num_samples=None, num_classes=2):
    """Small random dataset for oracle-equivalence sweeps."""
    rng = np.random.default_rng(seed)
    m = int(num_models if num_models is not None else rng.integers(2, 6))
    n = int(num_samples if num_samples is not None else rng.integers(3, 13))
    truth = rng.integers(0, num_classes, size=n)
    preds = rng.integers(0, num_classes, size=(m, n))
    return PredictionDataset(
        model_names=tuple(f"m{i}" for i in range(m)),
        truth=truth,
        predictions=preds,
        num_classes=num_classes,
    )
