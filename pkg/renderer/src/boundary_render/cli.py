"""Batch entry point: boundary-render --grid grid.csv --out fig.png."""
from __future__ import annotations

import argparse
import sys

from . import GridError, render_file


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="boundary-render",
        description="Render a boundary-grid CSV (and optional point/line "
                    "overlays) to a PNG.")
    p.add_argument("--grid", required=True, help="grid CSV: x1,x2,predicted_class")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--points", help="optional overlay CSV: x1,x2,label")
    p.add_argument("--lines", help="optional overlay CSV: kind,i,j,a,b,c")
    p.add_argument("--cell", type=int, default=4,
                   help="pixels per grid sample (default 4)")
    return p


def main(argv=None) -> int:
    o = build_parser().parse_args(argv)
    try:
        w, h = render_file(o.grid, o.out, points_path=o.points,
                           lines_path=o.lines, cell=o.cell)
    except GridError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {o.out} ({w} x {h})", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
