"""Kernelized solver over signed support counts.

History never needs explicit weights: after T iterations the class-j weight
is (1/(lambda T)) sum_i alpha_bar[i, j] phi(x_i), where alpha_bar holds
integer-valued signed counts (bumped by +/-1 whenever an example's hinge for
class j was active at sampling time). The bias feature is appended before any
kernel evaluation, which leaves rbf values untouched and shifts polynomial
ones by a constant inside the power.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _sgd
from .models import (KernelModel, KernelSpec, LabeledDataset, LinearModel,
                     PriorityVector, TrainConfig, augment)

DEFAULT_GRAM_CAP = 20_000


class GramCapExceeded(RuntimeError):
    """Training needs the full Gram matrix; raised when n is over the cap."""


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    """Kernel value for two single points."""
    return float(kernel_cross(spec, np.atleast_2d(a), np.atleast_2d(b))[0, 0])


def kernel_cross(spec: KernelSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """len(A) x len(B) matrix of kernel values."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ValueError("points must share a dimension")
    if spec.kind == "linear":
        return A @ B.T
    if spec.kind == "rbf":
        sq = (A ** 2).sum(1)[:, None] + (B ** 2).sum(1)[None, :] - 2.0 * (A @ B.T)
        return np.exp(-spec.gamma * np.maximum(sq, 0.0))
    return (spec.gamma * (A @ B.T) + spec.coef0) ** spec.degree


@dataclass
class GramCache:
    """Precomputed Gram matrix over the (augmented) training points."""

    matrix: np.ndarray
    spec: KernelSpec


def build_gram(points: np.ndarray, spec: KernelSpec,
               cap: int = DEFAULT_GRAM_CAP) -> GramCache:
    n = points.shape[0]
    if n > cap:
        raise GramCapExceeded(
            f"Gram matrix for {n} points exceeds the cap of {cap} rows; "
            f"raise gram_cap if you really want an {n}x{n} precomputation")
    return GramCache(matrix=kernel_cross(spec, points, points), spec=spec)


def train_kernel(data: LabeledDataset, theta: PriorityVector, cfg: TrainConfig,
                 spec: KernelSpec, gram_cap: int = DEFAULT_GRAM_CAP) -> KernelModel:
    """Run the count-space solver; deterministic for a fixed seed.

    With a linear kernel and the same seed this follows the primal solver's
    trajectory exactly (same sample sequence, same indicator decisions), so
    reconstruct_primal on the result reproduces its W.
    """
    if theta.k != data.k:
        raise ValueError("theta length must equal the number of classes")
    points = augment(data.features)
    gram = build_gram(points, spec, cap=gram_cap)
    alpha = np.zeros((data.n, data.k))
    idxs = _sgd.draw_indices(data.n, cfg.iterations, cfg.seed)
    _sgd.kernel_updates(alpha, gram.matrix, data.labels, theta.costs,
                        idxs, cfg.lambda_, 1)
    return KernelModel(alpha_bar=alpha, support_points=points, kernel=spec,
                       lambda_=cfg.lambda_, iterations=cfg.iterations,
                       theta=theta)


def decision_scores(model: KernelModel, X: np.ndarray) -> np.ndarray:
    """Per-class scores sum_i alpha_bar[i, j] k(x_i, x) / theta_j for a batch."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != model.d:
        raise ValueError(f"expected {model.d} features, got {X.shape[1]}")
    cross = kernel_cross(model.kernel, augment(X), model.support_points)
    return (cross @ model.alpha_bar) / model.theta.costs[None, :]


def predict_kernel(model: KernelModel, x: np.ndarray) -> int:
    """Predicted label for one raw point; ties go to the lowest class index."""
    return int(np.argmax(decision_scores(model, np.asarray(x, dtype=float)[None, :])))


def predict_kernel_batch(model: KernelModel, X: np.ndarray) -> np.ndarray:
    return np.argmax(decision_scores(model, X), axis=1)


def list_support_vectors(model: KernelModel, j: int) -> np.ndarray:
    """Indices whose signed count for class j is nonzero."""
    if not 0 <= j < model.k:
        raise ValueError(f"class {j} outside [0, {model.k})")
    return np.flatnonzero(model.alpha_bar[:, j])


def reconstruct_primal(model: KernelModel) -> LinearModel:
    """Linear-kernel models only: W[j] = (1/(lambda T)) sum_i alpha_bar[i,j] x_i."""
    if model.kernel.kind != "linear":
        raise ValueError("primal reconstruction requires a linear kernel")
    W = (model.alpha_bar.T @ model.support_points) / (model.lambda_ * model.iterations)
    return LinearModel(W=W, theta=model.theta, scaler=model.scaler,
                       class_names=model.class_names)
