"""Turn boundary-grid CSV exports into decision-region PNGs.

Input contract (producer: the `apportion boundary-grid` command, though any
CSV with the same columns works):

  grid:   header `x1,x2,predicted_class`, one row per lattice sample; the
          samples must form a complete rectangular lattice (every observed x1
          crossed with every observed x2, no duplicates). Spacing is taken as
          uniform; each sample becomes one square cell of the image.
  points: header `x1,x2,label`, optional overlay of training points. A
          header-only file is valid and draws nothing.
  lines:  header `kind,i,j,a,b,c`, optional overlay of lines a*x + b*y + c = 0
          clipped to the grid box; kind is `support` or `bisector`.

Everything here is presentation: no model file is read and nothing is
computed from the data beyond the affine map to pixels. Output is
deterministic byte for byte, so no timestamps or metadata go into the PNG.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

from PIL import Image, ImageDraw

__version__ = "0.1.0"

# Okabe-Ito palette; cycled when a grid has more classes than entries
PALETTE = [
    (230, 159, 0),
    (86, 180, 233),
    (0, 158, 115),
    (240, 228, 66),
    (0, 114, 178),
    (213, 94, 0),
    (204, 121, 167),
    (153, 153, 153),
]
REGION_TINT = 0.55  # fraction of the way from the class color to white
LINE_STYLE = {"support": ((90, 90, 90), 1), "bisector": ((0, 0, 0), 2)}


class GridError(Exception):
    """Malformed input file; the message names the file line when known."""


@dataclass
class Grid:
    xs: list[float]          # ascending unique x1 values
    ys: list[float]          # ascending unique x2 values
    labels: list[list[str]]  # labels[row][col], row 0 at the smallest x2

    @property
    def nx(self) -> int:
        return len(self.xs)

    @property
    def ny(self) -> int:
        return len(self.ys)

    def box(self) -> tuple[float, float, float, float]:
        """Outer data rectangle: samples padded by half a cell on each side."""
        dx = (self.xs[-1] - self.xs[0]) / (self.nx - 1) if self.nx > 1 else 1.0
        dy = (self.ys[-1] - self.ys[0]) / (self.ny - 1) if self.ny > 1 else 1.0
        return (self.xs[0] - dx / 2, self.xs[-1] + dx / 2,
                self.ys[0] - dy / 2, self.ys[-1] + dy / 2)


def _read_rows(path, header: list[str]):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise GridError(f"{path}: empty file, expected header "
                            f"{','.join(header)}") from None
        if first != header:
            raise GridError(f"{path}: line 1: expected header "
                            f"{','.join(header)}, got {','.join(first)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise GridError(f"{path}: line {lineno}: expected "
                                f"{len(header)} fields, got {len(row)}")
            rows.append((lineno, row))
    return rows


def _coord(path, lineno: int, tok: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise GridError(f"{path}: line {lineno}: bad number {tok!r}") from None
    if v != v or v in (float("inf"), float("-inf")):
        raise GridError(f"{path}: line {lineno}: non-finite coordinate {tok}")
    return v


def parse_grid(path) -> Grid:
    rows = _read_rows(path, ["x1", "x2", "predicted_class"])
    samples: dict[tuple[float, float], str] = {}
    for lineno, row in rows:
        key = (_coord(path, lineno, row[0]), _coord(path, lineno, row[1]))
        if key in samples:
            raise GridError(f"{path}: line {lineno}: duplicate sample at "
                            f"{key[0]:g},{key[1]:g}")
        samples[key] = row[2]
    if not samples:
        raise GridError(f"{path}: no samples after the header")
    xs = sorted({x for x, _ in samples})
    ys = sorted({y for _, y in samples})
    # every sample lies on the lattice of observed coordinates, so a bare
    # count comparison proves completeness (truncated exports land here)
    if len(samples) != len(xs) * len(ys):
        raise GridError(f"{path}: samples do not fill the {len(xs)} x "
                        f"{len(ys)} lattice ({len(samples)} rows, expected "
                        f"{len(xs) * len(ys)}); file truncated?")
    labels = [[samples[(x, y)] for x in xs] for y in ys]
    return Grid(xs=xs, ys=ys, labels=labels)


def parse_points(path) -> list[tuple[float, float, str]]:
    rows = _read_rows(path, ["x1", "x2", "label"])
    return [(_coord(path, lineno, r[0]), _coord(path, lineno, r[1]), r[2])
            for lineno, r in rows]


def parse_lines(path) -> list[tuple[str, float, float, float]]:
    rows = _read_rows(path, ["kind", "i", "j", "a", "b", "c"])
    out = []
    for lineno, r in rows:
        if r[0] not in LINE_STYLE:
            raise GridError(f"{path}: line {lineno}: unknown line kind "
                            f"{r[0]!r}")
        out.append((r[0], _coord(path, lineno, r[3]),
                    _coord(path, lineno, r[4]), _coord(path, lineno, r[5])))
    return out


def assign_colors(tokens) -> dict[str, tuple[int, int, int]]:
    """Stable token -> color map: numeric sort when every token parses as a
    number, lexicographic otherwise, then palette order."""
    uniq = sorted(set(tokens))
    try:
        uniq.sort(key=float)
    except ValueError:
        pass
    return {tok: PALETTE[i % len(PALETTE)] for i, tok in enumerate(uniq)}


def _tint(color: tuple[int, int, int]) -> tuple[int, int, int]:
    return tuple(round(c + (255 - c) * REGION_TINT) for c in color)


def _clip_line(a: float, b: float, c: float,
               box: tuple[float, float, float, float]):
    """Endpoints of a*x + b*y + c = 0 inside the box, or None."""
    xmin, xmax, ymin, ymax = box
    eps = 1e-12
    pts: list[tuple[float, float]] = []
    tol_x = 1e-9 * max(abs(xmin), abs(xmax), 1.0)
    tol_y = 1e-9 * max(abs(ymin), abs(ymax), 1.0)
    if abs(b) > eps:
        for x in (xmin, xmax):
            y = -(c + a * x) / b
            if ymin - tol_y <= y <= ymax + tol_y:
                pts.append((x, y))
    if abs(a) > eps:
        for y in (ymin, ymax):
            x = -(c + b * y) / a
            if xmin - tol_x <= x <= xmax + tol_x:
                pts.append((x, y))
    dedup: list[tuple[float, float]] = []
    for p in pts:
        if all(abs(p[0] - q[0]) > tol_x or abs(p[1] - q[1]) > tol_y
               for q in dedup):
            dedup.append(p)
    if len(dedup) < 2:
        return None
    return dedup[0], dedup[1]


def render(grid: Grid, points=(), lines=(), cell: int = 4) -> Image.Image:
    if cell < 1:
        raise GridError(f"cell size must be >= 1, got {cell}")
    colors = assign_colors([tok for row in grid.labels for tok in row]
                           + [tok for _, _, tok in points])
    base = Image.new("RGB", (grid.nx, grid.ny))
    base.putdata([_tint(colors[grid.labels[grid.ny - 1 - r][c]])
                  for r in range(grid.ny) for c in range(grid.nx)])
    img = base.resize((grid.nx * cell, grid.ny * cell),
                      Image.Resampling.NEAREST)

    W, H = img.size
    xmin, xmax, ymin, ymax = grid.box()

    def to_px(x: float, y: float) -> tuple[float, float]:
        return ((x - xmin) / (xmax - xmin) * W,
                (ymax - y) / (ymax - ymin) * H)

    draw = ImageDraw.Draw(img)
    for kind, a, b, c in lines:
        seg = _clip_line(a, b, c, (xmin, xmax, ymin, ymax))
        if seg is None:
            continue
        color, width = LINE_STYLE[kind]
        draw.line([to_px(*seg[0]), to_px(*seg[1])], fill=color, width=width)
    radius = max(2.0, cell * 0.75)
    for x, y, tok in points:
        u, v = to_px(x, y)
        draw.ellipse([u - radius, v - radius, u + radius, v + radius],
                     fill=colors[tok], outline=(0, 0, 0), width=1)
    return img


def render_file(grid_path, out_path, points_path=None, lines_path=None,
                cell: int = 4) -> tuple[int, int]:
    """Parse, draw, and save; returns the image size."""
    grid = parse_grid(grid_path)
    points = parse_points(points_path) if points_path else ()
    lines = parse_lines(lines_path) if lines_path else ()
    img = render(grid, points, lines, cell=cell)
    img.save(out_path, format="PNG")
    return img.size
