"""Regenerate data/iris.libsvm from scikit-learn's bundled copy.

Run offline when the fixture needs refreshing; the repository ships the
output so the test suite has no scikit-learn dependency. Labels are written
as 1/2/3 to match the common repository encoding of this dataset.
"""
from pathlib import Path

from sklearn.datasets import load_iris


def main() -> None:
    iris = load_iris()
    out = Path(__file__).resolve().parent.parent / "data" / "iris.libsvm"
    out.parent.mkdir(exist_ok=True)
    lines = []
    for row, y in zip(iris.data, iris.target):
        feats = " ".join(f"{i + 1}:{repr(float(v))}" for i, v in enumerate(row))
        lines.append(f"{int(y) + 1} {feats}")
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({len(lines)} rows)")


if __name__ == "__main__":
    main()
