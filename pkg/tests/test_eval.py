"""Metrics, cross-validation, and the hyperparameter grid."""
import warnings

import numpy as np
import pytest

from apportion import (DEFAULT_C_GRID, DEFAULT_GAMMA_GRID, KernelSpec,
                       LabeledDataset, LinearModel, BaselineModel, KernelModel,
                       MethodSpec, PriorityVector, SynthSpec, evaluate,
                       expected_risk, fit, generate_synthetic, grid_search,
                       kfold_cv, resolve_lambda, stratified_folds)


def test_expected_risk_hand_case():
    # 3 class-0 errors at cost 2 over 20 points
    conf = np.array([[7, 3], [0, 10]])
    theta = PriorityVector(np.array([2.0, 1.0]))
    assert np.isclose(expected_risk(conf, theta), 0.3)


def test_expected_risk_with_uniform_costs_is_the_error_rate():
    rng = np.random.default_rng(0)
    y = rng.integers(0, 3, size=100)
    p = y.copy()
    p[:20] = (p[:20] + 1) % 3
    report = evaluate(y, p, PriorityVector(np.ones(3)))
    assert np.isclose(report.expected_risk, 0.2)


def test_expected_risk_rejects_empty_confusion():
    with pytest.raises(ValueError):
        expected_risk(np.zeros((2, 2)), PriorityVector(np.ones(2)))


def test_evaluate_confusion_and_sensitivity():
    y = np.array([0, 0, 1, 1, 2, 2])
    p = np.array([0, 1, 1, 1, 2, 0])
    report = evaluate(y, p, PriorityVector(np.array([2.0, 1.0, 1.0])))
    assert np.array_equal(report.confusion,
                          [[1, 1, 0], [0, 2, 0], [1, 0, 1]])
    assert np.allclose(report.sensitivity, [0.5, 1.0, 0.5])
    # cost: one class-0 miss (2) + one class-2 miss (1) over 6
    assert np.isclose(report.expected_risk, 0.5)


def test_evaluate_absent_class_sensitivity_is_nan_not_zero():
    report = evaluate(np.array([0, 0]), np.array([0, 1]),
                      PriorityVector(np.ones(3)))
    assert np.isnan(report.sensitivity[1])
    assert np.isnan(report.sensitivity[2])
    assert report.sensitivity[0] == 0.5


def test_stratified_folds_partition_and_determinism():
    rng = np.random.default_rng(1)
    labels = rng.integers(0, 3, size=60)
    a = stratified_folds(labels, 5, seed=4)
    b = stratified_folds(labels, 5, seed=4)
    assert np.array_equal(a, b)
    assert set(a) == set(range(5))
    # per class the fold sizes differ by at most one
    for c in range(3):
        counts = np.bincount(a[labels == c], minlength=5)
        assert counts.max() - counts.min() <= 1
    c = stratified_folds(labels, 5, seed=5)
    assert not np.array_equal(a, c)


def test_stratified_folds_warn_on_scarce_classes():
    labels = np.array([0] * 20 + [1] * 2)
    with pytest.warns(UserWarning):
        stratified_folds(labels, 5, seed=0)


def test_stratified_folds_validation():
    with pytest.raises(ValueError):
        stratified_folds(np.array([0, 1]), 1, seed=0)
    with pytest.raises(ValueError):
        stratified_folds(np.array([0, 1]), 3, seed=0)


def test_resolve_lambda_bridges_C_to_lambda():
    spec = MethodSpec(kind="apportioned", C=2.0)
    assert resolve_lambda(spec, 100) == 1.0 / 200.0
    assert resolve_lambda(MethodSpec(kind="apportioned", lambda_=0.5), 100) == 0.5


def test_method_spec_validation():
    with pytest.raises(ValueError):
        MethodSpec(kind="boosting")
    with pytest.raises(ValueError):
        MethodSpec(kind="csova", kernel=KernelSpec(kind="rbf", gamma=1.0))


def test_default_grids_are_the_documented_octave_ladders():
    assert DEFAULT_C_GRID == tuple(2.0 ** e for e in range(-5, 16, 2))
    assert len(DEFAULT_C_GRID) == 11
    assert DEFAULT_GAMMA_GRID == tuple(2.0 ** e for e in range(-15, 4, 2))
    assert len(DEFAULT_GAMMA_GRID) == 10


def test_fit_routes_every_method_kind(two_blobs):
    theta = PriorityVector(np.ones(2))
    cases = [
        (MethodSpec(kind="apportioned", iterations=200), LinearModel),
        (MethodSpec(kind="apportioned", iterations=200,
                    kernel=KernelSpec(kind="rbf", gamma=0.5)), KernelModel),
        (MethodSpec(kind="csova", iterations=200), BaselineModel),
        (MethodSpec(kind="cscs", iterations=200), BaselineModel),
        (MethodSpec(kind="csovo", iterations=200), BaselineModel),
    ]
    for spec, cls in cases:
        pred = fit(two_blobs, theta, spec, seed=0)
        assert isinstance(pred.model, cls)
        assert pred.predict(two_blobs.features).shape == (two_blobs.n,)


def test_fit_standardize_stores_the_scaler_and_still_predicts_raw(two_blobs):
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=20_000, standardize=True)
    pred = fit(two_blobs, theta, spec, seed=0)
    assert pred.scaler is not None
    assert pred.model.scaler is not None
    acc = float(np.mean(pred.predict(two_blobs.features) == two_blobs.labels))
    assert acc >= 0.98


def test_kfold_cv_is_deterministic_and_pools_the_confusion(two_blobs):
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=2000)
    a = kfold_cv(two_blobs, theta, spec, folds=5, seed=3)
    b = kfold_cv(two_blobs, theta, spec, folds=5, seed=3)
    assert a.mean_expected_risk == b.mean_expected_risk
    assert np.array_equal(a.confusion, b.confusion)
    assert a.confusion.sum() == two_blobs.n
    assert len(a.fold_risks) == 5
    assert np.isclose(a.mean_expected_risk, np.mean(a.fold_risks))


def test_kfold_cv_scores_well_on_separable_data(two_blobs):
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=20_000)
    cv = kfold_cv(two_blobs, theta, spec, folds=5, seed=0)
    assert cv.mean_expected_risk <= 0.05


def _tiny_blobs():
    return generate_synthetic(SynthSpec(means=((-2.0, 0.0), (2.0, 0.0)),
                                        stddev=0.5, points_per_class=20,
                                        seed=2))


def test_grid_search_returns_the_best_cell_and_full_table():
    data = _tiny_blobs()
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=1000)
    res = grid_search(data, theta, spec, C_grid=(0.1, 1.0), folds=3, seed=0)
    assert len(res.table) == 2
    assert res.gamma is None
    assert (res.C, res.gamma, res.risk) in res.table
    assert res.risk == min(r for _, _, r in res.table)


def test_grid_search_result_is_enumeration_order_invariant():
    data = _tiny_blobs()
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=500,
                      kernel=KernelSpec(kind="rbf", gamma=1.0))
    fwd = grid_search(data, theta, spec, C_grid=(0.5, 2.0),
                      gamma_grid=(0.25, 1.0), folds=3, seed=1)
    rev = grid_search(data, theta, spec, C_grid=(2.0, 0.5),
                      gamma_grid=(1.0, 0.25), folds=3, seed=1)
    assert (fwd.C, fwd.gamma, fwd.risk) == (rev.C, rev.gamma, rev.risk)


def test_grid_search_ties_prefer_the_smaller_C():
    # separable data scores 0 for every cell, so the tie rule decides
    data = _tiny_blobs()
    theta = PriorityVector(np.ones(2))
    spec = MethodSpec(kind="apportioned", iterations=5000)
    res = grid_search(data, theta, spec, C_grid=(8.0, 2.0, 32.0), folds=4,
                      seed=0)
    risks = sorted(r for _, _, r in res.table)
    if risks[0] == risks[1]:
        tied = [c for c, _, r in res.table if r == risks[0]]
        assert res.C == min(tied)


def test_grid_search_ignores_gamma_for_linear_models():
    data = _tiny_blobs()
    res = grid_search(data, PriorityVector(np.ones(2)),
                      MethodSpec(kind="csova", iterations=500),
                      C_grid=(1.0,), gamma_grid=(0.1, 1.0), folds=3, seed=0)
    assert res.gamma is None
    assert len(res.table) == 1
