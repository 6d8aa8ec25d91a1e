"""Scoring, cross-validation, and hyperparameter search.

The headline score is the expected risk: each test error is charged the
priority of its true class, and the total is divided by the test size.
Sensitivity rows with no test examples stay absent (NaN), never zero.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .baselines import predict_baseline, train_csova, train_cscs, train_csovo
from .data import standardize
from .kernel import predict_kernel_batch, train_kernel
from .linear import train_linear
from .models import (KernelModel, KernelSpec, LabeledDataset, LinearModel,
                     PriorityVector, Scaler, TrainConfig)

DEFAULT_C_GRID = tuple(2.0 ** e for e in range(-5, 16, 2))
DEFAULT_GAMMA_GRID = tuple(2.0 ** e for e in range(-15, 4, 2))

METHOD_KINDS = ("apportioned", "csova", "cscs", "csovo")


@dataclass
class EvalReport:
    confusion: np.ndarray
    expected_risk: float
    sensitivity: np.ndarray


def expected_risk(confusion: np.ndarray, theta: PriorityVector) -> float:
    """Priority-weighted error count over the total count."""
    confusion = np.asarray(confusion, dtype=float)
    total = confusion.sum()
    if total == 0:
        raise ValueError("empty confusion matrix")
    off = confusion.sum(axis=1) - np.diag(confusion)
    return float((theta.costs * off).sum() / total)


def evaluate(y_true: np.ndarray, y_pred: np.ndarray, theta: PriorityVector
             ) -> EvalReport:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1 or y_true.size == 0:
        raise ValueError("labels must be matching non-empty 1-D vectors")
    k = theta.k
    conf = np.zeros((k, k), dtype=np.int64)
    np.add.at(conf, (y_true, y_pred), 1)
    counts = conf.sum(axis=1)
    with np.errstate(invalid="ignore"):
        sens = np.where(counts > 0, np.diag(conf) / np.maximum(counts, 1), np.nan)
    return EvalReport(confusion=conf, expected_risk=expected_risk(conf, theta),
                      sensitivity=sens)


@dataclass(frozen=True)
class MethodSpec:
    """What to train: a method kind, an optional kernel (apportioned only),
    and solver settings. C, when set, overrides lambda_ via lambda = 1/(nC)
    with n the size of the split actually fitted."""

    kind: str = "apportioned"
    kernel: KernelSpec | None = None
    C: float | None = None
    lambda_: float = 1e-3
    iterations: int = 20_000
    standardize: bool = False

    def __post_init__(self):
        if self.kind not in METHOD_KINDS:
            raise ValueError(f"unknown method {self.kind!r}")
        if self.kind != "apportioned" and self.kernel is not None:
            raise ValueError("kernels are only supported for the apportioned method")


@dataclass
class Predictor:
    """A trained model plus the transform its training data went through."""

    model: LinearModel | KernelModel | object
    scaler: Scaler | None = None

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.scaler is not None:
            X = self.scaler.transform(X)
        if isinstance(self.model, LinearModel):
            from .models import predict_linear
            return predict_linear(self.model, X)
        if isinstance(self.model, KernelModel):
            return predict_kernel_batch(self.model, X)
        return predict_baseline(self.model, X)


def resolve_lambda(spec: MethodSpec, n: int) -> float:
    return 1.0 / (n * spec.C) if spec.C is not None else spec.lambda_


def fit(data: LabeledDataset, theta: PriorityVector, spec: MethodSpec,
        seed: int = 0) -> Predictor:
    """Train one model per the spec; standardization is fitted on this data."""
    scaler = None
    if spec.standardize:
        data, scaler = standardize(data)
    cfg = TrainConfig(lambda_=resolve_lambda(spec, data.n),
                      iterations=spec.iterations, seed=seed)
    if spec.kind == "apportioned":
        if spec.kernel is None:
            model, _ = train_linear(data, theta, cfg)
        else:
            model = train_kernel(data, theta, cfg, spec.kernel)
    elif spec.kind == "csova":
        model = train_csova(data, theta, cfg)
    elif spec.kind == "cscs":
        model = train_cscs(data, theta, cfg)
    else:
        model = train_csovo(data, theta, cfg)
    model.scaler = scaler
    model.class_names = data.class_names
    return Predictor(model=model, scaler=scaler)


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> np.ndarray:
    """Fold id per example: a seeded shuffle within each class, then dealt
    round-robin. Classes smaller than the fold count get a warning; their
    points simply land in a seeded subset of folds."""
    labels = np.asarray(labels, dtype=np.int64)
    if folds < 2:
        raise ValueError("need at least two folds")
    if folds > labels.size:
        raise ValueError("more folds than examples")
    rng = np.random.default_rng(seed)
    out = np.empty(labels.size, dtype=np.int64)
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if idx.size < folds:
            warnings.warn(f"class {c} has {idx.size} points for {folds} folds; "
                          "stratification degenerates for it", stacklevel=2)
        idx = rng.permutation(idx)
        start = int(rng.integers(folds))
        out[idx] = (start + np.arange(idx.size)) % folds
    return out


@dataclass
class CVResult:
    mean_expected_risk: float
    mean_sensitivity: np.ndarray
    confusion: np.ndarray
    fold_risks: list[float]


def _subset(data: LabeledDataset, mask: np.ndarray) -> LabeledDataset:
    return LabeledDataset(features=data.features[mask], labels=data.labels[mask],
                          k=data.k, class_names=data.class_names)


def _fold_seed(seed: int, fold: int) -> int:
    return int(np.random.SeedSequence([seed, fold]).generate_state(1)[0])


def kfold_cv(data: LabeledDataset, theta: PriorityVector, spec: MethodSpec,
             folds: int = 10, seed: int = 0) -> CVResult:
    """Stratified k-fold estimate; deterministic in (data order, seed)."""
    assign = stratified_folds(data.labels, folds, seed)
    k = theta.k
    pooled = np.zeros((k, k), dtype=np.int64)
    risks: list[float] = []
    sens: list[np.ndarray] = []
    for f in range(folds):
        test = assign == f
        if not test.any() or test.all():
            continue
        pred = fit(_subset(data, ~test), theta, spec, seed=_fold_seed(seed, f))
        report = evaluate(data.labels[test], pred.predict(data.features[test]), theta)
        pooled += report.confusion
        risks.append(report.expected_risk)
        sens.append(report.sensitivity)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mean_sens = np.nanmean(np.vstack(sens), axis=0)
    return CVResult(mean_expected_risk=float(np.mean(risks)),
                    mean_sensitivity=mean_sens, confusion=pooled,
                    fold_risks=risks)


@dataclass
class GridSearchResult:
    C: float
    gamma: float | None
    risk: float
    table: list[tuple[float, float | None, float]]


def grid_search(data: LabeledDataset, theta: PriorityVector, spec: MethodSpec,
                C_grid=DEFAULT_C_GRID, gamma_grid=None, folds: int = 5,
                seed: int = 0) -> GridSearchResult:
    """Exhaustive (C, gamma) search scored by inner stratified CV expected
    risk. Ties go to the smaller C, then the smaller gamma; the outcome does
    not depend on enumeration order."""
    needs_gamma = spec.kernel is not None and spec.kernel.kind in ("rbf", "polynomial")
    if gamma_grid is None:
        gamma_grid = DEFAULT_GAMMA_GRID if needs_gamma else (None,)
    elif not needs_gamma:
        gamma_grid = (None,)
    table = []
    for C in C_grid:
        for gamma in gamma_grid:
            cand = replace(spec, C=float(C))
            if gamma is not None:
                cand = replace(cand, kernel=replace(spec.kernel, gamma=float(gamma)))
            cv = kfold_cv(data, theta, cand, folds=folds, seed=seed)
            table.append((float(C), gamma, cv.mean_expected_risk))
    best = min(table, key=lambda row: (row[2], row[0], row[1] if row[1] is not None else 0.0))
    return GridSearchResult(C=best[0], gamma=best[1], risk=best[2], table=table)
