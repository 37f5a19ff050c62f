import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focalprune import (
    DataFormatError,
    PredictionDataset,
    canonical_csv,
    count_teams,
    enumerate_teams,
    load_predictions,
    make_team,
    member_accuracies,
    negative_sample_set,
    negative_sample_sets,
    team_label,
    write_confidences,
    write_predictions,
)

from .conftest import FIXTURE_CSV, random_dataset
from . import oracles


class TestLoader:
    def test_fixture_roundtrip(self, fixture_csv, fixture_ds):
        ds = load_predictions(fixture_csv)
        assert ds.num_models == 3
        assert ds.num_samples == 5
        assert ds.num_classes == 3
        assert ds.model_names == ("m0", "m1", "m2")
        assert np.array_equal(ds.truth, fixture_ds.truth)
        assert np.array_equal(ds.predictions, fixture_ds.predictions)

    def test_all_correct_columns(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "sample_id,truth,a,b\n0,1,1,1\n1,0,0,0\n2,1,1,1\n", encoding="utf-8"
        )
        ds = load_predictions(path)
        assert ds.correctness.all()

    def test_label_out_of_declared_range(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "# classes=3\nsample_id,truth,a,b\n0,1,7,1\n", encoding="utf-8"
        )
        with pytest.raises(DataFormatError, match=r"d\.csv:3: label 7 out of range"):
            load_predictions(path)

    def test_inferred_classes(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("sample_id,truth,a,b\n0,4,1,0\n1,0,2,4\n", encoding="utf-8")
        assert load_predictions(path).num_classes == 5

    def test_duplicate_sample_id(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            "sample_id,truth,a,b\ns1,0,0,0\ns1,1,1,1\n", encoding="utf-8"
        )
        with pytest.raises(DataFormatError, match="duplicate sample_id"):
            load_predictions(path)

    def test_malformed_row(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("sample_id,truth,a,b\n0,1,1\n", encoding="utf-8")
        with pytest.raises(DataFormatError, match="malformed row"):
            load_predictions(path)

    def test_non_integer_label(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("sample_id,truth,a,b\n0,1,x,0\n", encoding="utf-8")
        with pytest.raises(DataFormatError, match="non-integer label 'x'"):
            load_predictions(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError, match="file not found"):
            load_predictions(tmp_path / "absent.csv")

    def test_duplicate_model_name(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("sample_id,truth,a,a\n0,1,1,1\n", encoding="utf-8")
        with pytest.raises(DataFormatError, match="duplicate model name"):
            load_predictions(path)

    def test_error_carries_location(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("sample_id,truth,a,b\n0,1,1,0\n1,1,1,oops\n", encoding="utf-8")
        with pytest.raises(DataFormatError) as err:
            load_predictions(path)
        assert err.value.line == 3
        assert err.value.path.endswith("d.csv")


class TestConfidences:
    def _write(self, tmp_path, rows_a, rows_b):
        data = tmp_path / "d.csv"
        data.write_text(
            "# classes=2\nsample_id,truth,a,b\n0,1,1,0\n1,0,0,0\n", encoding="utf-8"
        )
        conf = tmp_path / "conf"
        conf.mkdir()
        (conf / "a.csv").write_text("sample_id,p_0,p_1\n" + rows_a, encoding="utf-8")
        (conf / "b.csv").write_text("sample_id,p_0,p_1\n" + rows_b, encoding="utf-8")
        return data, conf

    def test_happy_path(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.2,0.8\n1,0.9,0.1\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        ds = load_predictions(data, conf)
        assert ds.confidences.shape == (2, 2, 2)
        assert ds.confidences[0, 0, 1] == pytest.approx(0.8)

    def test_bad_sum(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.2,0.9\n1,0.9,0.1\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        with pytest.raises(DataFormatError, match="sums to"):
            load_predictions(data, conf)

    def test_argmax_mismatch(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.8,0.2\n1,0.9,0.1\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        with pytest.raises(DataFormatError, match="argmax"):
            load_predictions(data, conf)

    def test_missing_confidence_file(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.2,0.8\n1,0.9,0.1\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        (conf / "b.csv").unlink()
        with pytest.raises(DataFormatError, match="missing confidence file"):
            load_predictions(data, conf)

    def test_missing_sample_row(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.2,0.8\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        with pytest.raises(DataFormatError, match="missing confidence row"):
            load_predictions(data, conf)

    def test_confidence_roundtrip(self, tmp_path):
        data, conf = self._write(
            tmp_path, "0,0.2,0.8\n1,0.9,0.1\n", "0,0.6,0.4\n1,0.7,0.3\n"
        )
        ds = load_predictions(data, conf)
        out = tmp_path / "out"
        write_confidences(ds, out)
        again = load_predictions(data, out)
        assert np.array_equal(ds.confidences, again.confidences)


class TestCanonicalForm:
    def test_serialize_load_is_identity_on_canonical(self, fixture_csv):
        ds = load_predictions(fixture_csv)
        assert canonical_csv(ds) == FIXTURE_CSV

    def test_normalization_is_idempotent(self, tmp_path):
        messy = tmp_path / "messy.csv"
        messy.write_text(
            "sample_id,truth,a,b\n\n# a comment\nx,1,1,0\ny,0,0,0\n# classes=4\n",
            encoding="utf-8",
        )
        once = canonical_csv(load_predictions(messy))
        norm = tmp_path / "norm.csv"
        norm.write_text(once, encoding="utf-8")
        assert canonical_csv(load_predictions(norm)) == once

    def test_write_predictions(self, tmp_path, fixture_ds):
        path = tmp_path / "out.csv"
        write_predictions(fixture_ds, path)
        assert load_predictions(path).num_classes == 3


class TestValidation:
    def test_single_model_rejected(self):
        with pytest.raises(ValueError, match="M >= 2"):
            PredictionDataset(("a",), [0], [[0]], num_classes=2)

    def test_bad_truth_label(self):
        with pytest.raises(ValueError, match="truth labels"):
            PredictionDataset(("a", "b"), [5], [[0], [1]], num_classes=2)

    def test_immutable_arrays(self, fixture_ds):
        with pytest.raises(ValueError):
            fixture_ds.predictions[0, 0] = 1
        with pytest.raises(ValueError):
            fixture_ds.correctness[0, 0] = False


class TestDerived:
    def test_member_accuracies(self, fixture_ds):
        assert member_accuracies(fixture_ds).tolist() == [1.0, 0.6, 0.8]

    def test_all_correct_and_all_wrong(self):
        ds = PredictionDataset(
            ("good", "bad"), [1, 1, 1], [[1, 1, 1], [0, 0, 0]], num_classes=2
        )
        assert member_accuracies(ds).tolist() == [1.0, 0.0]

    def test_negative_sets(self, fixture_ds):
        assert negative_sample_set(fixture_ds, 1).samples == (3, 4)
        assert negative_sample_set(fixture_ds, 0).samples == ()
        assert negative_sample_set(fixture_ds, 2).samples == (0,)

    def test_all_wrong_focal(self):
        ds = PredictionDataset(
            ("good", "bad"), [1, 1, 1], [[1, 1, 1], [0, 0, 0]], num_classes=2
        )
        assert negative_sample_set(ds, 1).samples == (0, 1, 2)

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_accuracy_popcount_identity(self, seed):
        ds = random_dataset(seed)
        accs = member_accuracies(ds)
        for m in range(ds.num_models):
            scaled = accs[m] * ds.num_samples
            assert scaled == pytest.approx(round(scaled))
            assert round(scaled) == int(ds.correctness[m].sum())
            assert len(negative_sample_set(ds, m)) == ds.num_samples - round(scaled)

    def test_negative_subsampling_deterministic(self):
        ds = random_dataset(7, num_models=4, num_samples=50)
        a = negative_sample_sets(ds, sample_size=5, seed=11)
        b = negative_sample_sets(ds, sample_size=5, seed=11)
        c = negative_sample_sets(ds, sample_size=5, seed=12)
        assert a == b
        assert all(len(a[f]) <= 5 for f in a)
        assert any(a[f] != c[f] for f in a if len(negative_sample_set(ds, f)) > 5)
        full = negative_sample_sets(ds)
        for f in full:
            assert set(a[f].samples) <= set(full[f].samples)
            assert list(a[f].samples) == sorted(a[f].samples)


class TestEnumeration:
    def test_paper_counts(self):
        assert count_teams(3) == 3
        assert count_teams(10) == 1012
        assert sum(1 for _ in enumerate_teams(10)) == 1012

    def test_single_size(self):
        teams = list(enumerate_teams(10, (2, 2)))
        assert len(teams) == 45

    def test_order(self):
        teams = list(enumerate_teams(4))
        assert teams == [
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
            (0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3),
        ]

    def test_guard(self):
        with pytest.raises(ValueError, match="guard"):
            list(enumerate_teams(26))
        gen = enumerate_teams(26, (2, 2), allow_large=True)
        assert next(gen) == (0, 1)

    def test_bad_range(self):
        with pytest.raises(ValueError):
            list(enumerate_teams(5, (1, 3)))
        with pytest.raises(ValueError):
            list(enumerate_teams(5, (4, 2)))

    def test_counts_match_factorial_formula(self):
        for m in range(3, 13):
            for s in range(2, m):
                assert count_teams(m, (s, s)) == oracles.binomial(m, s)
                assert sum(1 for _ in enumerate_teams(m, (s, s))) == oracles.binomial(m, s)

    def test_make_team_and_label(self):
        assert make_team([3, 1, 2]) == (1, 2, 3)
        with pytest.raises(ValueError):
            make_team([1, 1, 2])
        with pytest.raises(ValueError):
            make_team([1])
        with pytest.raises(ValueError):
            make_team([0, 9], num_models=5)
        assert team_label((0, 1, 2, 3), 10) == "0123"
        assert team_label((0, 11), 12) == "0-11"
