"""Sparse/CSV parsing, synthesis, standardization."""
import numpy as np
import pytest

from apportion import (ParseError, SynthSpec, dumps_libsvm,
                       generate_synthetic, parse_csv, parse_libsvm,
                       standardize)
from apportion.models import LabeledDataset


def test_sparse_parse_basic():
    data = parse_libsvm("1 1:0.5 3:-2\n2 2:1\n")
    assert data.n == 2 and data.d == 3 and data.k == 2
    assert np.array_equal(data.features, [[0.5, 0.0, -2.0], [0.0, 1.0, 0.0]])
    assert np.array_equal(data.labels, [0, 1])
    assert data.class_names == ["1", "2"]


def test_sparse_labels_remap_by_first_appearance():
    data = parse_libsvm("7 1:1\n-1 1:2\n7 1:3\n3.5 1:4\n")
    assert np.array_equal(data.labels, [0, 1, 0, 2])
    assert data.class_names == ["7", "-1", "3.5"]


def test_sparse_empty_feature_list_is_an_all_zero_row():
    data = parse_libsvm("3 1:1\n4\n")
    assert np.array_equal(data.features[1], [0.0])


def test_sparse_blank_lines_are_skipped():
    data = parse_libsvm("\n1 1:1\n\n2 1:2\n\n")
    assert data.n == 2


def test_sparse_non_increasing_indices_error_with_line_number():
    with pytest.raises(ParseError, match="line 1"):
        parse_libsvm("1 2:1 1:1")
    try:
        parse_libsvm("1 1:1\n2 3:1 3:2\n")
    except ParseError as exc:
        assert exc.line == 2
        assert "not increasing" in str(exc)
    else:
        pytest.fail("expected a parse error")


def test_sparse_bad_value_and_bad_token_errors():
    with pytest.raises(ParseError, match="line 2"):
        parse_libsvm("1 1:1\n2 1:abc\n")
    with pytest.raises(ParseError, match="line 1"):
        parse_libsvm("1 5\n")
    with pytest.raises(ParseError, match="line 3"):
        parse_libsvm("1 1:1\n2 1:1\n1 0:2\n")
    with pytest.raises(ParseError):
        parse_libsvm("")
    with pytest.raises(ParseError):
        parse_libsvm("1\n2\n")


def test_sparse_round_trip_random_datasets():
    rng = np.random.default_rng(6)
    for _ in range(30):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(k, 30))
        d = int(rng.integers(1, 8))
        X = np.where(rng.random((n, d)) < 0.4, 0.0,
                     np.round(rng.normal(size=(n, d)), 6))
        labels = rng.integers(0, k, size=n)
        labels[:k] = np.arange(k)  # every class appears
        if not X[:, -1].any():
            X[0, -1] = 1.0  # keep the width recoverable
        data = LabeledDataset(features=X, labels=labels, k=k,
                              class_names=[str(c + 1) for c in range(k)])
        back = parse_libsvm(dumps_libsvm(data))
        assert np.array_equal(back.features, data.features)
        assert np.array_equal(back.labels, data.labels)
        assert back.class_names == data.class_names


def test_serialize_uses_original_label_tokens():
    data = parse_libsvm("7.5e0 1:1\n2 1:2\n")
    assert dumps_libsvm(data).splitlines()[0].startswith("7.5e0 ")


def test_csv_parse_with_auto_header():
    text = "a,b,label\n1.0,2.0,7\n3.0,4.0,8\n"
    data = parse_csv(text)
    assert data.n == 2 and data.d == 2
    assert np.array_equal(data.features, [[1.0, 2.0], [3.0, 4.0]])
    assert data.class_names == ["7", "8"]
    headless = parse_csv("1.0,2.0,7\n3.0,4.0,8\n")
    assert headless.n == 2


def test_csv_label_column_override():
    data = parse_csv("7,1.0,2.0\n8,3.0,4.0\n", label_col=0)
    assert np.array_equal(data.features, [[1.0, 2.0], [3.0, 4.0]])
    assert data.class_names == ["7", "8"]


def test_csv_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_csv("1.0,7\n2.0,8\nx,7\n")
    with pytest.raises(ParseError, match="line 2"):
        parse_csv("a,label\n1.0\n")
    with pytest.raises(ValueError):
        parse_csv("1.0,7\n", label_col=5)


def test_synthetic_validation():
    with pytest.raises(ValueError):
        SynthSpec(means=((0.0, 0.0),), stddev=1.0, points_per_class=5)
    with pytest.raises(ValueError):
        SynthSpec(means=((0.0,), (1.0, 2.0)), stddev=1.0, points_per_class=5)
    with pytest.raises(ValueError):
        SynthSpec(means=((0.0,), (1.0,)), stddev=0.0, points_per_class=5)
    with pytest.raises(ValueError):
        SynthSpec(means=((0.0,), (1.0,)), stddev=1.0, points_per_class=0)


def test_synthetic_is_seeded_and_labeled_in_blocks():
    spec = SynthSpec(means=((0.0, 0.0), (5.0, 5.0)), stddev=0.1,
                     points_per_class=10, seed=3)
    a = generate_synthetic(spec)
    b = generate_synthetic(spec)
    assert np.array_equal(a.features, b.features)
    assert np.array_equal(a.labels, np.repeat([0, 1], 10))
    c = generate_synthetic(SynthSpec(means=((0.0, 0.0), (5.0, 5.0)),
                                     stddev=0.1, points_per_class=10, seed=4))
    assert not np.array_equal(a.features, c.features)


def test_synthetic_tiny_stddev_hugs_the_centroids():
    spec = SynthSpec(means=((0.0, 1.0), (-3.0, 2.0)), stddev=1e-12,
                     points_per_class=5, seed=0)
    data = generate_synthetic(spec)
    assert np.allclose(data.features[:5], [0.0, 1.0], atol=1e-10)
    assert np.allclose(data.features[5:], [-3.0, 2.0], atol=1e-10)


def test_standardize_moments():
    rng = np.random.default_rng(9)
    X = rng.normal(loc=10.0, scale=2.0, size=(200, 3))
    data = LabeledDataset(features=X, labels=rng.integers(0, 2, size=200), k=2)
    out, scaler = standardize(data)
    assert np.allclose(out.features.mean(axis=0), 0.0, atol=1e-9)
    assert np.allclose(out.features.std(axis=0), 1.0, atol=1e-9)
    assert np.allclose(scaler.inverse(out.features), X)


def test_standardize_leaves_constant_columns_alone():
    X = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
    data = LabeledDataset(features=X, labels=np.array([0, 1, 0]), k=2)
    out, scaler = standardize(data)
    assert np.array_equal(out.features[:, 1], X[:, 1])
    assert scaler.mean[1] == 0.0 and scaler.scale[1] == 1.0


def test_standardize_is_idempotent():
    rng = np.random.default_rng(10)
    X = rng.normal(size=(50, 2))
    data = LabeledDataset(features=X, labels=rng.integers(0, 2, size=50), k=2)
    once, _ = standardize(data)
    twice, scaler2 = standardize(once)
    assert np.allclose(twice.features, once.features, atol=1e-9)
    assert np.allclose(scaler2.mean, 0.0, atol=1e-9)
    assert np.allclose(scaler2.scale, 1.0, atol=1e-9)
