"""Value types shared across the library.

A classifier here is a stack of per-class linear score functions
``w_j . x + b_j`` whose margins are apportioned between classes in the
ratio of their priorities: the decision rule divides each row by its
priority theta_j and predicts ``argmax_j (w_j . x + b_j) / theta_j``.
The bias is folded in as a trailing constant-1 feature, so every weight
matrix in this package has d+1 columns and the bias is regularized along
with the weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def augment(X: np.ndarray) -> np.ndarray:
    """Append the constant-1 bias feature. Accepts a single point or a batch."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        return np.concatenate([X, [1.0]])
    if X.ndim == 2:
        return np.hstack([X, np.ones((X.shape[0], 1))])
    raise ValueError("expected a 1-D point or a 2-D batch")


@dataclass
class PriorityVector:
    """Per-class misclassification priorities theta, strictly positive.

    theta_j is both the cost charged when a class-j example is missed and
    the share of the inter-class margin allotted to class j.
    """

    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim != 1 or costs.size < 2:
            raise ValueError("priority vector needs at least two classes")
        if not np.all(np.isfinite(costs)) or np.any(costs <= 0):
            raise ValueError("priority entries must be positive")
        costs = costs.copy()
        costs.setflags(write=False)
        self.costs = costs

    @property
    def k(self) -> int:
        return self.costs.size

    def __getitem__(self, j: int) -> float:
        return float(self.costs[j])


@dataclass
class LabeledDataset:
    """Dense feature matrix with integer labels 0..k-1.

    class_names optionally keeps the original label tokens (in first-appearance
    order) so reports can show them; nothing in training reads it.
    """

    features: np.ndarray
    labels: np.ndarray
    k: int
    class_names: list[str] | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        y = np.asarray(self.labels)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError("features must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(X)):
            raise ValueError("features must be finite")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError("labels must be 1-D and aligned with features")
        if not np.issubdtype(y.dtype, np.integer):
            yi = y.astype(np.int64)
            if np.any(yi != y):
                raise ValueError("labels must be integers")
            y = yi
        else:
            y = y.astype(np.int64)
        if self.k < 2:
            raise ValueError("need at least two classes")
        if y.size and (y.min() < 0 or y.max() >= self.k):
            raise ValueError(f"labels must lie in [0, {self.k})")
        if self.class_names is not None and len(self.class_names) != self.k:
            raise ValueError("class_names length must equal k")
        self.features = X
        self.labels = y

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel selection: linear, rbf, or polynomial.

    rbf:        k(a, b) = exp(-gamma * ||a - b||^2)
    polynomial: k(a, b) = (gamma * a.b + coef0) ** degree
    """

    kind: str = "linear"
    gamma: float = 1.0
    degree: int = 3
    coef0: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "rbf", "polynomial"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind in ("rbf", "polynomial") and not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.kind == "polynomial" and self.degree < 1:
            raise ValueError("degree must be at least 1")


@dataclass
class Scaler:
    """Per-feature affine transform x -> (x - mean) / scale, invertible."""

    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=float)
        self.scale = np.asarray(self.scale, dtype=float)
        if self.mean.shape != self.scale.shape or self.mean.ndim != 1:
            raise ValueError("mean and scale must be matching 1-D vectors")
        if np.any(self.scale <= 0):
            raise ValueError("scale entries must be positive")

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale

    def inverse(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) * self.scale + self.mean


@dataclass
class LinearModel:
    """Primal model: W is k x (d+1), bias in the last column.

    scaler, when present, is the transform the training data went through;
    prediction helpers that accept raw inputs apply it first.
    """

    W: np.ndarray
    theta: PriorityVector
    scaler: Scaler | None = None
    class_names: list[str] | None = None

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        if W.ndim != 2 or W.shape[0] != self.theta.k or W.shape[1] < 2:
            raise ValueError("W must be k x (d+1) with k matching theta")
        self.W = W

    @property
    def k(self) -> int:
        return self.W.shape[0]

    @property
    def d(self) -> int:
        return self.W.shape[1] - 1


@dataclass
class TrainConfig:
    """Stochastic solver settings shared by all trainers."""

    lambda_: float
    iterations: int
    seed: int = 0
    record_objective_every: int | None = None

    def __post_init__(self):
        if not self.lambda_ > 0:
            raise ValueError("lambda must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.record_objective_every is not None and self.record_objective_every < 1:
            raise ValueError("record_objective_every must be positive when set")


@dataclass
class TrainTrace:
    """Objective samples collected during a run, (iteration, value) pairs."""

    objective_samples: list[tuple[int, float]] = field(default_factory=list)
    final_iteration: int = 0


@dataclass
class KernelModel:
    """Dual model: integer-valued signed counts alpha_bar, one column per class.

    support_points are the augmented training inputs; prediction scores class j
    as sum_i alpha_bar[i, j] * k(x_i, x) / theta_j. The 1/(lambda T) factor
    common to all classes is dropped from scores (it cannot change the argmax)
    but kept for primal reconstruction.
    """

    alpha_bar: np.ndarray
    support_points: np.ndarray
    kernel: KernelSpec
    lambda_: float
    iterations: int
    theta: PriorityVector
    scaler: Scaler | None = None
    class_names: list[str] | None = None

    def __post_init__(self):
        A = np.asarray(self.alpha_bar, dtype=float)
        S = np.asarray(self.support_points, dtype=float)
        if A.ndim != 2 or A.shape[1] != self.theta.k:
            raise ValueError("alpha_bar must be n x k")
        if S.ndim != 2 or S.shape[0] != A.shape[0]:
            raise ValueError("support_points must align with alpha_bar rows")
        self.alpha_bar = A
        self.support_points = S

    @property
    def k(self) -> int:
        return self.alpha_bar.shape[1]

    @property
    def d(self) -> int:
        return self.support_points.shape[1] - 1


def scaled_rows(model: LinearModel) -> np.ndarray:
    """Rows divided by their priorities: the matrix the decision rule uses."""
    return model.W / model.theta.costs[:, None]


def predict_linear(model: LinearModel, X: np.ndarray) -> np.ndarray:
    """Predict labels for raw (unaugmented) inputs; ties go to the lowest index.

    Inputs are expected in the model's feature space; the stored scaler is
    not applied here (the CLI layer does that for user-supplied files).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.d:
        raise ValueError(f"expected {model.d} features, got {X.shape[1]}")
    scores = augment(X) @ scaled_rows(model).T
    return np.argmax(scores, axis=1)
