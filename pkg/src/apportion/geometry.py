"""Margin geometry of a trained linear model.

All quantities live in the augmented representation (bias as a trailing
coordinate). Distances are reported two ways: dividing by the full augmented
row norm, and dividing by the norm of the feature part only, which is the
Euclidean point-to-hyperplane distance in the original space. The margin CSV
carries the feature-space numbers in its main columns and the augmented ones
in labeled extras.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .models import LabeledDataset, LinearModel, augment, scaled_rows

DEGENERATE_TOL = 1e-15


def bisector(model: LinearModel, i: int, j: int) -> np.ndarray:
    """Augmented normal of the boundary between classes i and j.

    This is the difference of the priority-scaled rows; points x with
    bisector . [x, 1] = 0 score equally for both classes. A zero vector
    (identical scaled rows) means the boundary is degenerate; callers can
    test with is_degenerate.
    """
    if i == j:
        raise ValueError("bisector needs two distinct classes")
    if not (0 <= i < model.k and 0 <= j < model.k):
        raise ValueError(f"classes must lie in [0, {model.k})")
    rows = scaled_rows(model)
    return rows[i] - rows[j]


def is_degenerate(normal_aug: np.ndarray) -> bool:
    return float(np.linalg.norm(normal_aug)) < DEGENERATE_TOL


def _norm(normal_aug: np.ndarray, which: str) -> float:
    if which == "feature":
        return float(np.linalg.norm(normal_aug[:-1]))
    if which == "augmented":
        return float(np.linalg.norm(normal_aug))
    raise ValueError("norm must be 'feature' or 'augmented'")


def margin_gamma(model: LinearModel, data: LabeledDataset, i: int, j: int,
                 norm: str = "feature") -> float:
    """Smallest signed distance from class-i points to the (i, j) boundary.

    Negative when some class-i point sits on the wrong side. Returns nan for
    a degenerate boundary.
    """
    normal = bisector(model, i, j)
    mask = data.labels == i
    if not mask.any():
        raise ValueError(f"no points of class {i} to take the margin over")
    denom = _norm(normal, norm)
    if denom < DEGENERATE_TOL:
        return float("nan")
    vals = augment(data.features[mask]) @ normal
    return float(vals.min() / denom)


def support_plane_distance(model: LinearModel, j: int, x: np.ndarray) -> float:
    """Euclidean distance from x to the hyperplane {w_j . x + b_j = theta_j}."""
    x = np.asarray(x, dtype=float)
    row = model.W[j]
    denom = float(np.linalg.norm(row[:-1]))
    if denom < DEGENERATE_TOL:
        return float("nan")
    return abs(float(row @ augment(x)) - model.theta[j]) / denom


def nearest_distance_ratio(normal_aug: np.ndarray, data: LabeledDataset,
                           i: int, j: int) -> float:
    """min_i |boundary distance| over min_j |boundary distance|.

    The hyperplane norm cancels, so this works directly on |normal . [x, 1]|.
    At a converged solution with priorities theta the ratio tracks
    theta_i / theta_j.
    """
    vals = np.abs(augment(data.features) @ normal_aug)
    mi, mj = data.labels == i, data.labels == j
    if not mi.any() or not mj.any():
        raise ValueError("both classes need at least one point")
    denom = float(vals[mj].min())
    if denom == 0.0:
        return float("inf")
    return float(vals[mi].min()) / denom


@dataclass
class PairMargin:
    i: int
    j: int
    eta: float
    gamma: float
    bound: float
    gamma_augmented: float
    bound_augmented: float
    degenerate: bool


@dataclass
class MarginReport:
    """Per ordered pair: achieved margin gamma vs. the (1 + eta)/||normal|| bound."""

    rows: list[PairMargin]

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("pair,gamma,bound,eta,gamma_augmented,bound_augmented,degenerate\n")
        for r in self.rows:
            out.write(f"{r.i}-{r.j},{r.gamma!r},{r.bound!r},{r.eta!r},"
                      f"{r.gamma_augmented!r},{r.bound_augmented!r},"
                      f"{int(r.degenerate)}\n")
        return out.getvalue()


def margin_report(model: LinearModel, data: LabeledDataset) -> MarginReport:
    rows = []
    for i in range(model.k):
        for j in range(model.k):
            if i == j:
                continue
            normal = bisector(model, i, j)
            eta = model.theta[i] / model.theta[j]
            degen = is_degenerate(normal)
            if degen:
                rows.append(PairMargin(i, j, eta, float("nan"), float("nan"),
                                       float("nan"), float("nan"), True))
                continue
            nf = _norm(normal, "feature")
            na = _norm(normal, "augmented")
            gamma = margin_gamma(model, data, i, j, norm="feature")
            rows.append(PairMargin(
                i, j, eta,
                gamma, (1.0 + eta) / nf if nf >= DEGENERATE_TOL else float("nan"),
                gamma * nf / na if nf >= DEGENERATE_TOL else float("nan"),
                (1.0 + eta) / na,
                False))
    return MarginReport(rows=rows)


@dataclass
class NormCheck:
    lhs: float
    rhs: float
    holds: bool


def pairwise_norm_check(W: np.ndarray, slack: float = 1e-9) -> NormCheck:
    """sum over unordered pairs of ||w_r - w_s||^2 against k ||W||_F^2.

    The left side can never exceed the right; they meet exactly when the rows
    sum to the zero vector.
    """
    W = np.asarray(W, dtype=float)
    k = W.shape[0]
    lhs = 0.0
    for r in range(k):
        for s in range(r + 1, k):
            lhs += float(((W[r] - W[s]) ** 2).sum())
    rhs = k * float((W ** 2).sum())
    return NormCheck(lhs=lhs, rhs=rhs, holds=lhs <= rhs + slack)
