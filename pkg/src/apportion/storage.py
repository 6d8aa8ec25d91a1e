"""Versioned plain-text model files.

Line-oriented: a `apportion-model 1` magic line, `key value...` header lines,
`matrix <name> <rows> <cols>` blocks followed by that many rows of floats,
and a closing `end`. Floats are written with repr, which round-trips float64
exactly, so save -> load -> save is byte-stable. Class-name tokens escape
space, percent, and newline as %20 / %25 / %0A.

Header keys by kind:
  all      kind, k, d, theta, [classes], [scaler_mean + scaler_scale]
  linear/csova/cscs   matrix W (k rows)
  csovo    pair_fallback, matrix W (k(k-1)/2 rows)
  kernel   kernel, lambda, iterations, matrix alpha, matrix support
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .baselines import BaselineModel
from .models import (KernelModel, KernelSpec, LinearModel, PriorityVector,
                     Scaler)

MAGIC = "apportion-model 1"


def _escape(tok: str) -> str:
    return tok.replace("%", "%25").replace(" ", "%20").replace("\n", "%0A")


def _unescape(tok: str) -> str:
    return tok.replace("%0A", "\n").replace("%20", " ").replace("%25", "%")


def _floats(vals) -> str:
    return " ".join(repr(float(v)) for v in vals)


def _matrix_lines(name: str, M: np.ndarray) -> list[str]:
    lines = [f"matrix {name} {M.shape[0]} {M.shape[1]}"]
    for row in M:
        lines.append(_floats(row))
    return lines


def dumps_model(model) -> str:
    lines = [MAGIC]
    if isinstance(model, LinearModel):
        kind = "linear"
    elif isinstance(model, KernelModel):
        kind = "kernel"
    elif isinstance(model, BaselineModel):
        kind = model.kind
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    lines.append(f"kind {kind}")
    lines.append(f"k {model.k}")
    lines.append(f"d {model.d}")
    lines.append("theta " + _floats(model.theta.costs))
    if model.class_names is not None:
        lines.append("classes " + " ".join(_escape(c) for c in model.class_names))
    if model.scaler is not None:
        lines.append("scaler_mean " + _floats(model.scaler.mean))
        lines.append("scaler_scale " + _floats(model.scaler.scale))
    if kind == "kernel":
        ks = model.kernel
        if ks.kind == "linear":
            lines.append("kernel linear")
        elif ks.kind == "rbf":
            lines.append(f"kernel rbf {ks.gamma!r}")
        else:
            lines.append(f"kernel polynomial {ks.gamma!r} {ks.degree} {ks.coef0!r}")
        lines.append(f"lambda {model.lambda_!r}")
        lines.append(f"iterations {model.iterations}")
        lines.extend(_matrix_lines("alpha", model.alpha_bar))
        lines.extend(_matrix_lines("support", model.support_points))
    else:
        if kind == "csovo":
            lines.append("pair_fallback " +
                         " ".join(str(int(v)) for v in model.pair_fallback))
        W = model.W if isinstance(model, LinearModel) else model.weights
        lines.extend(_matrix_lines("W", W))
    lines.append("end")
    return "\n".join(lines) + "\n"


def save_model(model, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise ValueError("model file ended early")


def _read_matrix(rd: _Reader, name: str) -> np.ndarray:
    head = rd.next().split()
    if len(head) != 4 or head[0] != "matrix" or head[1] != name:
        raise ValueError(f"expected 'matrix {name} rows cols', got {' '.join(head)!r}")
    rows, cols = int(head[2]), int(head[3])
    M = np.empty((rows, cols))
    for r in range(rows):
        vals = rd.next().split()
        if len(vals) != cols:
            raise ValueError(f"matrix {name}: row {r} has {len(vals)} of {cols} values")
        M[r] = [float(v) for v in vals]
    return M


def loads_model(text: str):
    rd = _Reader(text)
    if rd.next() != MAGIC:
        raise ValueError(f"not a model file (missing {MAGIC!r} header)")
    header: dict[str, list[str]] = {}
    key = rd.next().split()
    while key[0] != "matrix" and key[0] != "end":
        header[key[0]] = key[1:]
        key = rd.next().split()
    rd.pos -= 1

    def need(name: str) -> list[str]:
        if name not in header:
            raise ValueError(f"missing header line {name!r}")
        return header[name]

    kind = need("kind")[0]
    k = int(need("k")[0])
    d = int(need("d")[0])
    theta = PriorityVector(np.array([float(v) for v in need("theta")]))
    if theta.k != k:
        raise ValueError("theta length disagrees with k")
    names = None
    if "classes" in header:
        names = [_unescape(t) for t in header["classes"]]
    scaler = None
    if "scaler_mean" in header:
        scaler = Scaler(mean=np.array([float(v) for v in header["scaler_mean"]]),
                        scale=np.array([float(v) for v in need("scaler_scale")]))

    if kind == "kernel":
        kspec = need("kernel")
        if kspec[0] == "linear":
            ks = KernelSpec(kind="linear")
        elif kspec[0] == "rbf":
            ks = KernelSpec(kind="rbf", gamma=float(kspec[1]))
        elif kspec[0] == "polynomial":
            ks = KernelSpec(kind="polynomial", gamma=float(kspec[1]),
                            degree=int(kspec[2]), coef0=float(kspec[3]))
        else:
            raise ValueError(f"unknown kernel {kspec[0]!r}")
        alpha = _read_matrix(rd, "alpha")
        support = _read_matrix(rd, "support")
        model = KernelModel(alpha_bar=alpha, support_points=support, kernel=ks,
                            lambda_=float(need("lambda")[0]),
                            iterations=int(need("iterations")[0]), theta=theta,
                            scaler=scaler, class_names=names)
    elif kind == "linear":
        W = _read_matrix(rd, "W")
        model = LinearModel(W=W, theta=theta, scaler=scaler, class_names=names)
    elif kind in ("csova", "cscs", "csovo"):
        W = _read_matrix(rd, "W")
        fallback = None
        if kind == "csovo":
            fallback = np.array([int(v) for v in need("pair_fallback")],
                                dtype=np.int64)
        model = BaselineModel(kind=kind, weights=W, theta=theta,
                              pair_fallback=fallback, scaler=scaler,
                              class_names=names)
    else:
        raise ValueError(f"unknown model kind {kind!r}")
    if model.d != d:
        raise ValueError("matrix width disagrees with d")
    if rd.next() != "end":
        raise ValueError("missing end marker")
    return model


def load_model(path: str | Path):
    return loads_model(Path(path).read_text())
