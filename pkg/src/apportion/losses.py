"""The priority-weighted misclassification loss and its convex surrogate.

For an example (x, y) and per-class priorities theta, the loss charged is
theta_y whenever some class outscores y under the apportioned decision rule
(ties in favor of y are correct). The surrogate replaces the indicator with
one hinge per class,

    sum_j max(0, theta_y - sgn(y, j) * (w_j . x + b_j)),

where sgn(y, j) is +1 when j == y and -1 otherwise. The surrogate never
drops below the loss, which is what makes minimizing it meaningful.
"""
from __future__ import annotations

import numpy as np

from .models import LinearModel, augment, scaled_rows


def signed_delta(y: int, j: int) -> float:
    """+1 when j is the example's class, -1 otherwise."""
    return 1.0 if y == j else -1.0


def delta_sign_matrix(labels: np.ndarray, k: int) -> np.ndarray:
    """n x k matrix of signed deltas, row i giving sgn(y_i, j) for each j."""
    labels = np.asarray(labels)
    return np.where(labels[:, None] == np.arange(k)[None, :], 1.0, -1.0)


def _check_point(model: LinearModel, x: np.ndarray, y: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != model.d:
        raise ValueError(f"expected a point with {model.d} features")
    if not 0 <= y < model.k:
        raise ValueError(f"label {y} outside [0, {model.k})")
    return x


def true_loss(model: LinearModel, x: np.ndarray, y: int) -> float:
    """theta_y if any class strictly outscores y on the scaled rows, else 0."""
    x = _check_point(model, x, y)
    scores = scaled_rows(model) @ augment(x)
    return model.theta[y] if scores.max() - scores[y] > 0 else 0.0


def surrogate_terms(model: LinearModel, x: np.ndarray, y: int) -> np.ndarray:
    """The k per-class hinge terms of the surrogate, before summing."""
    x = _check_point(model, x, y)
    raw = model.W @ augment(x)
    signs = delta_sign_matrix(np.array([y]), model.k)[0]
    return np.maximum(0.0, model.theta[y] - signs * raw)


def surrogate_loss(model: LinearModel, x: np.ndarray, y: int) -> float:
    """Sum of the per-class hinge terms; an upper bound on true_loss."""
    return float(surrogate_terms(model, x, y).sum())


def surrogate_batch(W: np.ndarray, theta: np.ndarray, X_aug: np.ndarray,
                    labels: np.ndarray) -> np.ndarray:
    """Vector of surrogate losses for a whole dataset (augmented features)."""
    raw = X_aug @ W.T
    signs = delta_sign_matrix(labels, W.shape[0])
    margins = theta[labels][:, None] - signs * raw
    return np.maximum(0.0, margins).sum(axis=1)


def true_batch(W: np.ndarray, theta: np.ndarray, X_aug: np.ndarray,
               labels: np.ndarray) -> np.ndarray:
    """Vector of true losses for a whole dataset (augmented features)."""
    scores = X_aug @ (W / theta[:, None]).T
    own = scores[np.arange(len(labels)), labels]
    return np.where(scores.max(axis=1) - own > 0, theta[labels], 0.0)
