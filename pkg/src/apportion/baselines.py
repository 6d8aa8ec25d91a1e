"""Cost-sensitive reference reductions: one-vs-all, single-best, one-vs-one.

All three ride on the same stochastic machinery as the main solver (same
step schedule, same augmentation, seeded sampling); costs enter only as
per-example weights on the hinge terms. Decision rules use the raw rows,
not priority-scaled ones; these methods concentrate cost in the loss, not
in the margin split.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _sgd
from .models import (LabeledDataset, PriorityVector, Scaler, TrainConfig,
                     augment)


@dataclass
class BaselineModel:
    """kind 'csova' or 'cscs': weights is k x (d+1), one row per class.

    kind 'csovo': one row per unordered pair in lexicographic order, positive
    scores voting for the lower class index. pair_fallback marks pairs whose
    training slice held a single class; such a pair votes that class outright.
    """

    kind: str
    weights: np.ndarray
    theta: PriorityVector
    pair_fallback: np.ndarray | None = None
    scaler: Scaler | None = None
    class_names: list[str] | None = None

    def __post_init__(self):
        if self.kind not in ("csova", "cscs", "csovo"):
            raise ValueError(f"unknown baseline kind {self.kind!r}")
        self.weights = np.asarray(self.weights, dtype=float)
        k = self.theta.k
        expect = k * (k - 1) // 2 if self.kind == "csovo" else k
        if self.weights.ndim != 2 or self.weights.shape[0] != expect:
            raise ValueError(f"{self.kind} expects {expect} weight rows")
        if self.kind == "csovo":
            if self.pair_fallback is None:
                self.pair_fallback = np.full(expect, -1, dtype=np.int64)
            else:
                self.pair_fallback = np.asarray(self.pair_fallback, dtype=np.int64)

    @property
    def k(self) -> int:
        return self.theta.k

    @property
    def d(self) -> int:
        return self.weights.shape[1] - 1


def pair_index(k: int):
    """Unordered pairs (i, j), i < j, in the order their rows are stored."""
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


def train_csova(data: LabeledDataset, theta: PriorityVector,
                cfg: TrainConfig) -> BaselineModel:
    """k one-vs-rest binary machines, each hinge weighted by theta of the example."""
    if theta.k != data.k:
        raise ValueError("theta length must equal the number of classes")
    X_aug = augment(data.features)
    weight = theta.costs[data.labels]
    W = np.zeros((data.k, data.d + 1))
    for j in range(data.k):
        z = np.where(data.labels == j, 1.0, -1.0)
        idxs = _sgd.draw_indices(data.n, cfg.iterations, [cfg.seed, 0, j])
        _sgd.binary_updates(W[j], X_aug, z, weight, idxs, cfg.lambda_, 1)
    return BaselineModel(kind="csova", weights=W, theta=theta)


def train_cscs(data: LabeledDataset, theta: PriorityVector,
               cfg: TrainConfig) -> BaselineModel:
    """Single-best multiclass hinge, weighted by theta of the example.

    Per draw only the true class row and its strongest rival move, both by
    theta_y times the step.
    """
    if theta.k != data.k:
        raise ValueError("theta length must equal the number of classes")
    X_aug = augment(data.features)
    W = np.zeros((data.k, data.d + 1))
    idxs = _sgd.draw_indices(data.n, cfg.iterations, cfg.seed)
    _sgd.single_best_updates(W, X_aug, data.labels, theta.costs, idxs,
                             cfg.lambda_, 1)
    return BaselineModel(kind="cscs", weights=W, theta=theta)


def train_csovo(data: LabeledDataset, theta: PriorityVector,
                cfg: TrainConfig) -> BaselineModel:
    """One weighted binary machine per class pair, majority vote at predict time."""
    if theta.k != data.k:
        raise ValueError("theta length must equal the number of classes")
    X_aug = augment(data.features)
    pairs = pair_index(data.k)
    W = np.zeros((len(pairs), data.d + 1))
    fallback = np.full(len(pairs), -1, dtype=np.int64)
    for p, (i, j) in enumerate(pairs):
        mask = (data.labels == i) | (data.labels == j)
        present = np.unique(data.labels[mask])
        if present.size < 2:
            fallback[p] = int(present[0]) if present.size else i
            continue
        sub = np.flatnonzero(mask)
        z = np.where(data.labels[sub] == i, 1.0, -1.0)
        weight = theta.costs[data.labels[sub]]
        idxs = _sgd.draw_indices(sub.size, cfg.iterations, [cfg.seed, 1, p])
        _sgd.binary_updates(W[p], X_aug[sub], z, weight, idxs, cfg.lambda_, 1)
    return BaselineModel(kind="csovo", weights=W, theta=theta,
                         pair_fallback=fallback)


def decision_scores(model: BaselineModel, X: np.ndarray) -> np.ndarray:
    """Per-class scores. For csovo these are the vote-breaking aggregates."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.d:
        raise ValueError(f"expected {model.d} features, got {X.shape[1]}")
    if model.kind in ("csova", "cscs"):
        return augment(X) @ model.weights.T
    agg = np.zeros((X.shape[0], model.k))
    raw = augment(X) @ model.weights.T
    for p, (i, j) in enumerate(pair_index(model.k)):
        if model.pair_fallback[p] >= 0:
            continue
        agg[:, i] += raw[:, p]
        agg[:, j] -= raw[:, p]
    return agg


def predict_baseline(model: BaselineModel, X: np.ndarray) -> np.ndarray:
    """Labels for a batch; csovo votes first, then signed score, then index."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if model.kind in ("csova", "cscs"):
        return np.argmax(decision_scores(model, X), axis=1)
    raw = augment(X) @ model.weights.T
    n = X.shape[0]
    votes = np.zeros((n, model.k), dtype=np.int64)
    for p, (i, j) in enumerate(pair_index(model.k)):
        if model.pair_fallback[p] >= 0:
            votes[:, model.pair_fallback[p]] += 1
            continue
        wins_i = raw[:, p] >= 0
        votes[wins_i, i] += 1
        votes[~wins_i, j] += 1
    agg = decision_scores(model, X)
    out = np.empty(n, dtype=np.int64)
    for r in range(n):
        top = votes[r].max()
        cand = np.flatnonzero(votes[r] == top)
        best = cand[np.argmax(agg[r, cand])]
        out[r] = best
    return out


def pair_normal(model: BaselineModel, i: int, j: int) -> np.ndarray:
    """Augmented normal of the (i, j) decision boundary, class i positive."""
    if i == j or not (0 <= i < model.k and 0 <= j < model.k):
        raise ValueError("need two distinct valid classes")
    if model.kind in ("csova", "cscs"):
        return model.weights[i] - model.weights[j]
    flip = i > j
    a, b = (j, i) if flip else (i, j)
    p = pair_index(model.k).index((a, b))
    row = model.weights[p]
    return -row if flip else row
