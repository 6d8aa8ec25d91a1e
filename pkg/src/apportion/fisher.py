"""Population-level behavior of the surrogate at a single point.

Fix a label distribution P and priorities theta, and ask which score vector
f (constrained to sum to zero) minimizes the expected surrogate

    E(f) = sum_l P_l sum_j max(0, theta_l - sgn(l, j) f_j).

If the surrogate were calibrated for the cost-weighted risk, the minimizer
would put theta_yhat on the class yhat maximizing theta_l P_l and spread
-theta_yhat/(k-1) over the rest; `closed_form_minimizer` builds that
candidate. `minimize_expected_surrogate` is deliberately independent of the
formula (projected subgradient descent from zero plus a zero-sum pattern
search down to step 1e-4) so `fisher_check` can compare the two with no
shared assumptions. The comparison does not always come out equal: the true
minimizer maximizes sum_l P_l f_l over a theta-shaped box, which can favor
the most probable class over the priority-weighted one, so the check
reports per-draw agreement rather than presuming it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check(P: np.ndarray, theta: np.ndarray):
    P = np.asarray(P, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if P.ndim != 1 or P.shape != theta.shape:
        raise ValueError("P and theta must be matching 1-D vectors")
    if np.any(P < 0) or abs(P.sum() - 1.0) > 1e-9:
        raise ValueError("P must be a probability vector")
    if np.any(theta <= 0):
        raise ValueError("priority entries must be positive")
    return P, theta


def expected_surrogate(f: np.ndarray, P: np.ndarray, theta: np.ndarray) -> float:
    """E(f) as defined above; f need not sum to zero here."""
    P, theta = _check(P, theta)
    f = np.asarray(f, dtype=float)
    if f.shape != P.shape:
        raise ValueError("f must match P in length")
    k = P.size
    signs = np.where(np.eye(k, dtype=bool), 1.0, -1.0)
    margins = theta[:, None] - signs * f[None, :]
    return float(P @ np.maximum(0.0, margins).sum(axis=1))


def _subgradient(f: np.ndarray, P: np.ndarray, theta: np.ndarray) -> np.ndarray:
    k = P.size
    signs = np.where(np.eye(k, dtype=bool), 1.0, -1.0)
    active = (theta[:, None] - signs * f[None, :]) > 0.0
    return -(P[:, None] * signs * active).sum(axis=0)


def minimize_expected_surrogate(P: np.ndarray, theta: np.ndarray,
                                iterations: int = 3000) -> np.ndarray:
    """Deterministic numeric minimizer of E over the zero-sum hyperplane.

    Projected subgradient descent from f = 0 with a 1/sqrt(t) step decay,
    keeping the best iterate, then a pairwise pattern search at shrinking
    steps ending at 1e-4. No part of this relies on the closed form.
    """
    P, theta = _check(P, theta)
    k = P.size
    f = np.zeros(k)
    best = f.copy()
    best_val = expected_surrogate(f, P, theta)
    step0 = float(theta.max())
    for t in range(1, iterations + 1):
        g = _subgradient(f, P, theta)
        f = f - (step0 / np.sqrt(t)) * g
        f -= f.mean()
        val = expected_surrogate(f, P, theta)
        if val < best_val:
            best_val, best = val, f.copy()

    f, val = best, best_val
    for step in (1e-1, 1e-2, 1e-3, 1e-4):
        improved = True
        while improved:
            improved = False
            for a in range(k):
                for b in range(k):
                    if a == b:
                        continue
                    cand = f.copy()
                    cand[a] += step
                    cand[b] -= step
                    cv = expected_surrogate(cand, P, theta)
                    if cv < val - 1e-15:
                        f, val = cand, cv
                        improved = True
    return f


def closed_form_minimizer(P: np.ndarray, theta: np.ndarray
                          ) -> tuple[np.ndarray, bool]:
    """(f*, tie): the analytic minimizer and whether argmax theta_l P_l ties.

    On a tie the returned vector uses the lowest maximizing index; any of the
    tied choices attains the same expected surrogate.
    """
    P, theta = _check(P, theta)
    scores = theta * P
    yhat = int(np.argmax(scores))
    tie = int((scores == scores[yhat]).sum()) > 1
    k = P.size
    f = np.full(k, -theta[yhat] / (k - 1))
    f[yhat] = theta[yhat]
    return f, tie


@dataclass
class FisherCheck:
    """One (P, theta) draw compared between the numeric and analytic answers."""

    f_numeric: np.ndarray
    f_closed: np.ndarray
    value_numeric: float
    value_closed: float
    argmax_numeric: int
    argmax_weighted: int
    weighted_tie: bool

    @property
    def argmax_match(self) -> bool:
        return self.weighted_tie or self.argmax_numeric == self.argmax_weighted

    @property
    def value_match(self) -> bool:
        scale = max(abs(self.value_closed), 1.0)
        return abs(self.value_numeric - self.value_closed) <= 1e-3 * scale

    @property
    def vector_match(self) -> bool:
        return bool(np.max(np.abs(self.f_numeric - self.f_closed)) <= 1e-3)

    @property
    def passed(self) -> bool:
        return self.argmax_match and self.value_match


def fisher_check(P: np.ndarray, theta: np.ndarray) -> FisherCheck:
    """Minimize numerically, build the analytic candidate, compare."""
    P, theta = _check(P, theta)
    f_num = minimize_expected_surrogate(P, theta)
    f_cf, tie = closed_form_minimizer(P, theta)
    return FisherCheck(
        f_numeric=f_num,
        f_closed=f_cf,
        value_numeric=expected_surrogate(f_num, P, theta),
        value_closed=expected_surrogate(f_cf, P, theta),
        argmax_numeric=int(np.argmax(f_num)),
        argmax_weighted=int(np.argmax(theta * P)),
        weighted_tie=tie,
    )
