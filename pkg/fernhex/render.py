"""ASCII and SVG pictures of triangle regions.

Oblique lattice coordinates become Cartesian only here: ``x = u + v/2`` and
``y = v * sqrt(3)/2`` (SVG flips y so north is up).
"""

from __future__ import annotations

from math import sqrt
from typing import Dict, List, Optional, Tuple

from .lattice import TriRegion, UnitTriangle, triangle_corners

SQRT3_2 = sqrt(3) / 2

UP_CHAR = "^"
DOWN_CHAR = "v"
FERN_CHAR = "#"

REGION_FILL = "#f4e9c9"
FERN_FILL = "#3a7d44"
STROKE = "#333333"


def _column(cell: UnitTriangle) -> int:
    """Half-unit column of the cell centroid."""
    return 2 * cell.u + cell.v + (1 if cell.is_up else 2)


def render_ascii(region: TriRegion, fern: Optional[TriRegion] = None) -> str:
    """One text row per lattice row, north at the top; Up cells '^', Down cells 'v', fern '#'."""
    fern = fern or TriRegion()
    cells = list(region.cells | fern.cells)
    if not cells:
        return ""
    min_col = min(_column(c) for c in cells)
    rows: Dict[int, Dict[int, str]] = {}
    for cell in cells:
        if cell in fern:
            char = FERN_CHAR
        else:
            char = UP_CHAR if cell.is_up else DOWN_CHAR
        rows.setdefault(cell.v, {})[_column(cell) - min_col] = char
    lines: List[str] = []
    for v in range(max(rows), min(rows) - 1, -1):
        row = rows.get(v, {})
        width = max(row, default=-1) + 1
        lines.append("".join(row.get(col, " ") for col in range(width)).rstrip())
    return "\n".join(lines) + "\n"


def _cartesian(u, v) -> Tuple[float, float]:
    return float(u) + float(v) / 2, -float(v) * SQRT3_2


def _fmt(value: float) -> str:
    text = f"{value:.3f}"
    return "0.000" if text == "-0.000" else text


def render_svg(region: TriRegion, fern: Optional[TriRegion] = None, scale: float = 24.0) -> str:
    """Deterministic SVG: one polygon per unit triangle, fern cells filled dark."""
    fern = fern or TriRegion()
    cells = sorted(region.cells | fern.cells, key=UnitTriangle.sort_key)
    polygons = []
    xs: List[float] = []
    ys: List[float] = []
    for cell in cells:
        points = []
        for corner in triangle_corners(cell):
            x, y = _cartesian(corner.u, corner.v)
            x, y = x * scale, y * scale
            xs.append(x)
            ys.append(y)
            points.append(f"{_fmt(x)},{_fmt(y)}")
        fill = FERN_FILL if cell in fern else REGION_FILL
        polygons.append(
            f'  <polygon points="{" ".join(points)}" fill="{fill}" stroke="{STROKE}" stroke-width="1" />'
        )
    margin = scale / 2
    if xs:
        left, top = min(xs) - margin, min(ys) - margin
        width, height = max(xs) - min(xs) + 2 * margin, max(ys) - min(ys) + 2 * margin
    else:
        left, top, width, height = 0.0, 0.0, 2 * margin, 2 * margin
    header = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="{_fmt(left)} {_fmt(top)} {_fmt(width)} {_fmt(height)}">'
    )
    return "\n".join([header, *polygons, "</svg>"]) + "\n"
