"""Stochastic primal solver for the apportioned-margin objective.

Minimizes lambda/2 ||W||_F^2 + mean_i surrogate(x_i, y_i) over k x (d+1)
matrices with a Pegasos-style schedule: at iteration t a single example is
drawn, every class row shrinks by (1 - 1/t), and each row whose hinge term
is active receives (1/(lambda t)) * sign * x. Runs are deterministic given
(data order, seed, iterations, lambda).
"""
from __future__ import annotations

import numpy as np

from . import _sgd
from .losses import surrogate_batch
from .models import (LabeledDataset, LinearModel, PriorityVector, TrainConfig,
                     TrainTrace, augment)


def objective(model: LinearModel, data: LabeledDataset, lambda_: float) -> float:
    """Regularized empirical surrogate: lambda/2 ||W||_F^2 + mean surrogate."""
    if data.d != model.d:
        raise ValueError(f"expected {model.d} features, got {data.d}")
    X_aug = augment(data.features)
    surr = surrogate_batch(model.W, model.theta.costs, X_aug, data.labels)
    return 0.5 * lambda_ * float((model.W ** 2).sum()) + float(surr.mean())


def sgd_step(W: np.ndarray, x_aug: np.ndarray, y: int, theta: np.ndarray,
             lambda_: float, t: int) -> np.ndarray:
    """One update from state W at iteration t; returns the new matrix.

    This is the production inner loop applied to a single sample, exposed so
    the update can be checked in isolation against the subgradient it claims
    to follow.
    """
    W = np.array(W, dtype=float)
    _sgd.linear_updates(W, x_aug[None, :], np.array([y], dtype=np.int64),
                        theta, np.zeros(1, dtype=np.int64), lambda_, t)
    return W


def train_linear(data: LabeledDataset, theta: PriorityVector,
                 cfg: TrainConfig) -> tuple[LinearModel, TrainTrace]:
    """Run the stochastic solver; returns the model and its objective trace."""
    if theta.k != data.k:
        raise ValueError("theta length must equal the number of classes")
    X_aug = augment(data.features)
    W = np.zeros((data.k, data.d + 1))
    idxs = _sgd.draw_indices(data.n, cfg.iterations, cfg.seed)
    trace = TrainTrace(final_iteration=cfg.iterations)

    every = cfg.record_objective_every
    pos = 0
    while pos < cfg.iterations:
        stop = cfg.iterations if every is None else min(cfg.iterations, pos + every)
        _sgd.linear_updates(W, X_aug, data.labels, theta.costs,
                            idxs[pos:stop], cfg.lambda_, pos + 1)
        pos = stop
        if every is not None:
            model = LinearModel(W=W.copy(), theta=theta)
            trace.objective_samples.append((pos, objective(model, data, cfg.lambda_)))

    return LinearModel(W=W, theta=theta), trace
