"""Dataset ingestion, synthesis, and standardization.

Sparse text rows ("label idx:val ..." with 1-based strictly increasing
indices) and CSV with a label column are both normalized into the same dense
LabeledDataset, with original label tokens remembered in first-appearance
order so predictions can be written back in the user's vocabulary.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .models import LabeledDataset, Scaler

VARIANCE_FLOOR = 1e-12


class ParseError(ValueError):
    """Malformed input; line is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_libsvm(text: str) -> LabeledDataset:
    """Parse sparse rows. Indices are 1-based and must strictly increase;
    absent indices are zero; the width is the largest index seen anywhere."""
    labels_raw: list[str] = []
    rows: list[dict[int, float]] = []
    width = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        labels_raw.append(parts[0])
        entries: dict[int, float] = {}
        prev = 0
        for tok in parts[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise ParseError(lineno, f"expected index:value, got {tok!r}")
            try:
                idx = int(idx_s)
            except ValueError:
                raise ParseError(lineno, f"bad feature index {idx_s!r}") from None
            if idx < 1:
                raise ParseError(lineno, f"feature index {idx} must be >= 1")
            if idx <= prev:
                raise ParseError(
                    lineno, f"feature index {idx} not increasing (after {prev})")
            try:
                val = float(val_s)
            except ValueError:
                raise ParseError(lineno, f"bad feature value {val_s!r}") from None
            entries[idx] = val
            prev = idx
        rows.append(entries)
        width = max(width, prev)
    if not rows:
        raise ParseError(1, "no data rows")
    if width == 0:
        raise ParseError(1, "no features present")
    return _assemble(rows, labels_raw, width)


def _assemble(rows: list[dict[int, float]], labels_raw: list[str],
              width: int) -> LabeledDataset:
    names: list[str] = []
    remap: dict[str, int] = {}
    labels = np.empty(len(rows), dtype=np.int64)
    for r, tok in enumerate(labels_raw):
        if tok not in remap:
            remap[tok] = len(names)
            names.append(tok)
        labels[r] = remap[tok]
    X = np.zeros((len(rows), width))
    for r, entries in enumerate(rows):
        for idx, val in entries.items():
            X[r, idx - 1] = val
    return LabeledDataset(features=X, labels=labels, k=len(names),
                          class_names=names)


def dumps_libsvm(data: LabeledDataset) -> str:
    """Inverse of parse_libsvm; zero features are omitted, labels use the
    original tokens when known."""
    names = data.class_names or [str(c) for c in range(data.k)]
    out = io.StringIO()
    for r in range(data.n):
        out.write(names[data.labels[r]])
        row = data.features[r]
        for c in np.flatnonzero(row != 0.0):
            out.write(f" {c + 1}:{float(row[c])!r}")
        out.write("\n")
    return out.getvalue()


def parse_csv(text: str, label_col: int = -1,
              header: str = "auto") -> LabeledDataset:
    """CSV with one label column (default: last). header 'auto' skips the
    first row when any of its cells is non-numeric."""
    reader = list(csv.reader(io.StringIO(text)))
    reader = [row for row in reader if row and any(c.strip() for c in row)]
    if not reader:
        raise ParseError(1, "no data rows")
    start = 0
    if header == "auto":
        if any(not _is_number(c) for c in reader[0]):
            start = 1
    elif header == "yes":
        start = 1
    elif header != "no":
        raise ValueError("header must be 'auto', 'yes', or 'no'")
    body = reader[start:]
    if not body:
        raise ParseError(start + 1, "no data rows after header")
    ncol = len(body[0])
    if ncol < 2:
        raise ParseError(start + 1, "need at least one feature and a label")
    lcol = label_col if label_col >= 0 else ncol + label_col
    if not 0 <= lcol < ncol:
        raise ValueError(f"label column {label_col} out of range for {ncol} columns")
    labels_raw: list[str] = []
    feats: list[list[float]] = []
    for off, row in enumerate(body):
        lineno = start + off + 1
        if len(row) != ncol:
            raise ParseError(lineno, f"expected {ncol} columns, got {len(row)}")
        labels_raw.append(row[lcol].strip())
        vals = []
        for c, cell in enumerate(row):
            if c == lcol:
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise ParseError(lineno, f"bad numeric value {cell!r}") from None
        feats.append(vals)
    X = np.asarray(feats)
    rows = [{c + 1: X[r, c] for c in range(X.shape[1])} for r in range(X.shape[0])]
    return _assemble(rows, labels_raw, X.shape[1])


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def load_dataset(path: str | Path, label_col: int = -1) -> LabeledDataset:
    """Read a dataset file; .csv goes through the CSV reader, anything else
    through the sparse reader."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".csv":
        return parse_csv(text, label_col=label_col)
    return parse_libsvm(text)


@dataclass(frozen=True)
class SynthSpec:
    """Isotropic Gaussian blobs: one centroid row per class."""

    means: tuple[tuple[float, ...], ...]
    stddev: float
    points_per_class: int
    seed: int = 0

    def __post_init__(self):
        if len(self.means) < 2:
            raise ValueError("need at least two centroids")
        if len({len(m) for m in self.means}) != 1:
            raise ValueError("centroids must share a dimension")
        if not self.stddev > 0:
            raise ValueError("stddev must be positive")
        if self.points_per_class < 1:
            raise ValueError("points_per_class must be at least 1")


def generate_synthetic(spec: SynthSpec) -> LabeledDataset:
    """Sample the blobs; same spec (seed included) gives the same dataset."""
    rng = np.random.default_rng(spec.seed)
    k = len(spec.means)
    d = len(spec.means[0])
    m = spec.points_per_class
    X = np.empty((k * m, d))
    y = np.empty(k * m, dtype=np.int64)
    for c, mean in enumerate(spec.means):
        X[c * m:(c + 1) * m] = rng.normal(loc=mean, scale=spec.stddev, size=(m, d))
        y[c * m:(c + 1) * m] = c
    return LabeledDataset(features=X, labels=y, k=k,
                          class_names=[str(c) for c in range(k)])


def standardize(data: LabeledDataset) -> tuple[LabeledDataset, Scaler]:
    """Zero-mean unit-variance per feature; columns with variance under the
    floor pass through unchanged (scale 1, mean 0 for that column)."""
    mean = data.features.mean(axis=0)
    var = data.features.var(axis=0)
    flat = var < VARIANCE_FLOOR
    scale = np.where(flat, 1.0, np.sqrt(np.where(flat, 1.0, var)))
    mean = np.where(flat, 0.0, mean)
    scaler = Scaler(mean=mean, scale=scale)
    out = LabeledDataset(features=scaler.transform(data.features),
                         labels=data.labels.copy(), k=data.k,
                         class_names=list(data.class_names) if data.class_names else None)
    return out, scaler
