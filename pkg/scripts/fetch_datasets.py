"""Download the multiclass benchmark datasets used in the experiments.

Files land in data/ (or $APPORTION_DATA_DIR when set). A sha256 manifest is
recorded next to the downloads on first fetch and verified on every later
run, so a changed upstream file is refused instead of silently accepted.
This is a build-time convenience only; the test suite runs entirely from
the committed fixtures.
"""
import hashlib
import json
import os
import sys
import urllib.request
from pathlib import Path

BASE = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/multiclass"
FILES = [
    "iris.scale",
    "wine.scale",
    "glass.scale",
    "vehicle.scale",
    "segment.scale",
    "satimage.scale",
    "letter.scale",
]


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def main() -> int:
    root = Path(os.environ.get("APPORTION_DATA_DIR",
                               Path(__file__).resolve().parent.parent / "data"))
    root.mkdir(parents=True, exist_ok=True)
    manifest_path = root / "datasets.sha256"
    manifest = {}
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text())
    failures = 0
    for name in FILES:
        dest = root / name
        if not dest.exists():
            url = f"{BASE}/{name}"
            print(f"fetching {url}")
            try:
                urllib.request.urlretrieve(url, dest)
            except OSError as exc:
                print(f"  failed: {exc}", file=sys.stderr)
                failures += 1
                continue
        digest = sha256(dest)
        if name not in manifest:
            manifest[name] = digest
            print(f"{name}: recorded sha256 {digest[:16]}...")
        elif manifest[name] != digest:
            print(f"{name}: sha256 mismatch (have {digest[:16]}..., "
                  f"manifest {manifest[name][:16]}...)", file=sys.stderr)
            failures += 1
        else:
            print(f"{name}: ok")
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
