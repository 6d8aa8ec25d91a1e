"""Inner loops for the stochastic solvers.

Plain-Python loop kernels, compiled with numba when it is available and run
as-is otherwise. Iteration numbers are 1-based; the step size is 1/(lambda*t)
and the shrink factor (1 - 1/t) hits every row every iteration, so the t = 1
step wipes whatever the rows held. Callers pre-draw the sample index sequence
so that the same seed gives the same trajectory in every solver.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def linear_updates(W, X_aug, labels, theta, idxs, lam, t0):
    # In-place on W (k x D). Indicator is strict and uses the pre-shrink row.
    k, D = W.shape
    for s in range(idxs.size):
        t = t0 + s
        i = idxs[s]
        y = labels[i]
        shrink = 1.0 - 1.0 / t
        eta = 1.0 / (lam * t)
        for j in range(k):
            sc = 0.0
            for c in range(D):
                sc += W[j, c] * X_aug[i, c]
            sign = 1.0 if j == y else -1.0
            active = theta[y] - sign * sc > 0.0
            for c in range(D):
                W[j, c] = shrink * W[j, c]
            if active:
                coef = eta * sign
                for c in range(D):
                    W[j, c] = W[j, c] + coef * X_aug[i, c]


@njit(cache=True)
def kernel_updates(alpha, gram, labels, theta, idxs, lam, t0):
    # In-place on alpha (n x k) of signed counts. The indicator compares
    # against the current function value, whose count representation carries
    # scale 1/(lam*(t-1)); at t = 1 the function is identically zero.
    n, k = alpha.shape
    for s in range(idxs.size):
        t = t0 + s
        i = idxs[s]
        y = labels[i]
        scale = 1.0 / (lam * (t - 1.0)) if t > 1 else 0.0
        for j in range(k):
            g = 0.0
            for l in range(n):
                if alpha[l, j] != 0.0:
                    g += alpha[l, j] * gram[l, i]
            sign = 1.0 if j == y else -1.0
            if theta[y] - sign * scale * g > 0.0:
                alpha[i, j] += sign


@njit(cache=True)
def binary_updates(w, X_aug, z, weight, idxs, lam, t0):
    # Weighted binary hinge: loss_i = weight_i * max(0, 1 - z_i * w.x_i).
    D = w.size
    for s in range(idxs.size):
        t = t0 + s
        i = idxs[s]
        shrink = 1.0 - 1.0 / t
        sc = 0.0
        for c in range(D):
            sc += w[c] * X_aug[i, c]
        active = 1.0 - z[i] * sc > 0.0
        for c in range(D):
            w[c] = shrink * w[c]
        if active:
            coef = weight[i] * z[i] / (lam * t)
            for c in range(D):
                w[c] = w[c] + coef * X_aug[i, c]


@njit(cache=True)
def single_best_updates(W, X_aug, labels, theta, idxs, lam, t0):
    # Weighted single-best hinge: theta_y * max(0, 1 - (s_y - max_{j!=y} s_j)).
    # Only the true row and the strongest rival move; ties pick the lowest j.
    k, D = W.shape
    for s in range(idxs.size):
        t = t0 + s
        i = idxs[s]
        y = labels[i]
        shrink = 1.0 - 1.0 / t
        best = -np.inf
        rival = -1
        own = 0.0
        for j in range(k):
            sc = 0.0
            for c in range(D):
                sc += W[j, c] * X_aug[i, c]
            if j == y:
                own = sc
            elif sc > best:
                best = sc
                rival = j
        active = 1.0 - (own - best) > 0.0
        for j in range(k):
            for c in range(D):
                W[j, c] = shrink * W[j, c]
        if active:
            coef = theta[y] / (lam * t)
            for c in range(D):
                W[y, c] = W[y, c] + coef * X_aug[i, c]
                W[rival, c] = W[rival, c] - coef * X_aug[i, c]


def draw_indices(n: int, iterations: int, seed: int) -> np.ndarray:
    """The uniform sample-index sequence every solver consumes."""
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=iterations, dtype=np.int64)
