"""Region builders: hexagons, dented trapezoids, semihexagons, ferns and F-cored hexagons.

Every hexagon is anchored with its western corner (the vertex between the
lower-left and upper-left sides) at the origin. Sides are listed clockwise from
the top, so hexagon ``(a, b, c, d, e, f)`` is the set of cells whose corners
satisfy::

    0 <= u <= a + b,    f - b - c <= v <= f,    0 <= u + v <= a + f
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from .errors import (
    BadDentCount,
    DentOutOfRange,
    FernDoesNotFit,
    InvalidInput,
    NonClosingBoundary,
)
from .lattice import LatticeVec, TriRegion, UnitTriangle, down, up

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FernSpec:
    lobes: Tuple[int, ...]
    o: int = field(init=False, compare=False)
    e: int = field(init=False, compare=False)

    def __post_init__(self):
        lobes = tuple(int(a) for a in self.lobes)
        if not lobes:
            raise InvalidInput("a fern needs at least one lobe")
        if any(a < 0 for a in lobes):
            raise InvalidInput(f"lobe sizes must be non-negative, got {lobes}")
        object.__setattr__(self, "lobes", lobes)
        object.__setattr__(self, "o", sum(lobes[0::2]))
        object.__setattr__(self, "e", sum(lobes[1::2]))

    @classmethod
    def of(cls, *lobes: int) -> "FernSpec":
        return cls(tuple(lobes))

    @classmethod
    def parse(cls, text: str) -> "FernSpec":
        """Parse a comma-separated lobe list such as ``"1,2,6,3"``."""
        try:
            lobes = tuple(int(part) for part in text.split(",") if part.strip() != "")
        except ValueError:
            raise InvalidInput(f"lobe list must be comma-separated integers, got {text!r}")
        return cls(lobes)

    @property
    def k(self) -> int:
        return len(self.lobes)

    @property
    def total(self) -> int:
        return self.o + self.e

    def reversed(self) -> "FernSpec":
        return FernSpec(tuple(reversed(self.lobes)))

    def padded_even(self) -> "FernSpec":
        if self.k % 2 == 0:
            return self
        return FernSpec(self.lobes + (0,))

    def prefix(self, i: int) -> int:
        """a_1 + ... + a_i"""
        return sum(self.lobes[:i])

    def complement(self, i: int) -> int:
        """a_{i+1} + ... + a_k"""
        return sum(self.lobes[i:])

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.lobes)


class PlacementKind(str, Enum):
    CENTER = "center"
    WEST = "west"
    SOUTH_WEST = "southwest"
    NORTH_WEST = "northwest"

    @property
    def offset(self) -> LatticeVec:
        half = Fraction(1, 2)
        return {
            PlacementKind.CENTER: LatticeVec(0, 0),
            PlacementKind.WEST: LatticeVec(-half, 0),
            PlacementKind.SOUTH_WEST: LatticeVec(0, -half),
            PlacementKind.NORTH_WEST: LatticeVec(-half, half),
        }[self]


@dataclass(frozen=True)
class CoreHexSpec:
    x: int
    y: int
    z: int

    def __post_init__(self):
        for name in ("x", "y", "z"):
            if getattr(self, name) < 0:
                raise InvalidInput(f"{name} must be non-negative, got {getattr(self, name)}")

    @property
    def placement(self) -> PlacementKind:
        return placement_kind(self.x, self.y, self.z)

    @property
    def aux_center(self) -> LatticeVec:
        return aux_center(self.x, self.y, self.z)


def placement_kind(x: int, y: int, z: int) -> PlacementKind:
    px, py, pz = x % 2, y % 2, z % 2
    if px == py == pz:
        return PlacementKind.CENTER
    if py == pz:
        return PlacementKind.WEST
    if px == py:
        return PlacementKind.SOUTH_WEST
    return PlacementKind.NORTH_WEST


def _cells_within(
    umin: int, umax: int, vmin: int, vmax: int, wmin: int, wmax: int
) -> List[UnitTriangle]:
    """Cells whose corners all satisfy the given bounds on u, v and w = u + v."""
    cells = []
    for v in range(vmin, vmax):
        for u in range(umin, umax):
            if wmin <= u + v and u + v + 1 <= wmax:
                cells.append(up(u, v))
            if wmin <= u + v + 1 and u + v + 2 <= wmax:
                cells.append(down(u, v))
    return cells


def _check_sides(sides: Sequence[int]) -> Tuple[int, int, int, int, int, int]:
    if len(sides) != 6:
        raise InvalidInput(f"a hexagon has six sides, got {len(sides)}")
    if any(s < 0 for s in sides):
        raise InvalidInput(f"side lengths must be non-negative, got {tuple(sides)}")
    a, b, c, d, e, f = (int(s) for s in sides)
    # walk +e1, e1-e2, -e2, -e1, e2-e1, +e2
    if a + b - d - e != 0 or -b - c + e + f != 0:
        raise NonClosingBoundary(f"sides {tuple(sides)} do not close up")
    return a, b, c, d, e, f


def hexagon_vertices(sides: Sequence[int]) -> List[LatticeVec]:
    """Boundary vertices clockwise from the western corner."""
    a, b, c, d, e, f = _check_sides(sides)
    return [
        LatticeVec(0, 0),
        LatticeVec(0, f),
        LatticeVec(a, f),
        LatticeVec(a + b, f - b),
        LatticeVec(a + b, f - b - c),
        LatticeVec(a + b - d, f - b - c),
    ]


def hexagon(sides: Sequence[int]) -> TriRegion:
    a, b, c, d, e, f = _check_sides(sides)
    return TriRegion.of(_cells_within(0, a + b, f - b - c, f, 0, a + f))


def trapezoid_with_dents(m: int, n: int, dents: Sequence[int]) -> TriRegion:
    """Trapezoid of sides m, n, m+n, n (clockwise from top) minus base Up cells at ``dents``.

    Positions count from 1 at the left end of the base; the base lies on v = 0.
    """
    if m < 0 or n < 0:
        raise InvalidInput(f"trapezoid sides must be non-negative, got m={m}, n={n}")
    dents = tuple(dents)
    if len(dents) != n:
        raise BadDentCount(f"expected {n} dent positions, got {len(dents)}")
    if any(x < 1 or x > m + n for x in dents):
        raise DentOutOfRange(f"dents {dents} must lie in 1..{m + n}")
    if any(b <= a for a, b in zip(dents, dents[1:])):
        raise DentOutOfRange(f"dents {dents} must be strictly increasing")
    trapezoid = hexagon((m, n, 0, m + n, 0, n))
    return trapezoid.difference(up(x - 1, 0) for x in dents)


def semihexagon_dents(blocks: Sequence[int]) -> Tuple[int, int, Tuple[int, ...]]:
    """(m, n, dents) of the semihexagon whose odd-indexed blocks are removed."""
    if any(b < 0 for b in blocks):
        raise InvalidInput(f"block sizes must be non-negative, got {tuple(blocks)}")
    dents: List[int] = []
    position = 0
    for i, size in enumerate(blocks):
        if i % 2 == 0:
            dents.extend(range(position + 1, position + size + 1))
        position += size
    n = len(dents)
    return position - n, n, tuple(dents)


def semihexagon(blocks: Sequence[int]) -> TriRegion:
    m, n, dents = semihexagon_dents(blocks)
    return trapezoid_with_dents(m, n, dents)


def _lobe_cells(pu: int, pv: int, size: int, pointing_up: bool) -> List[UnitTriangle]:
    if size == 0:
        return []
    w = pu + pv
    if pointing_up:
        # corners p, p + (a, 0), p + (0, a)
        return _cells_within(pu, pu + size, pv, pv + size, w, w + size)
    # corners p, p + (a, 0), p + (a, -a)
    return _cells_within(pu, pu + size, pv - size, pv, w, w + size)


def fern_cells(base: LatticeVec, spec: FernSpec) -> TriRegion:
    pu, pv = base.as_ints()
    cells: List[UnitTriangle] = []
    offset = 0
    for i, size in enumerate(spec.lobes):
        cells.extend(_lobe_cells(pu + offset, pv, size, pointing_up=(i % 2 == 0)))
        offset += size
    return TriRegion.of(cells)


def aux_center(x: int, y: int, z: int) -> LatticeVec:
    """Centre of the auxiliary x,y,z,x,y,z hexagon sitting in the western corner."""
    return LatticeVec(Fraction(x + y, 2), Fraction(z - y, 2))


def fc_sides(x: int, y: int, z: int, spec: FernSpec) -> Tuple[int, int, int, int, int, int]:
    o, e = spec.o, spec.e
    return (x + e, y + o, z + e, x + o, y + e, z + o)


@dataclass(frozen=True)
class CoredLayout:
    x: int
    y: int
    z: int
    spec: FernSpec
    kind: PlacementKind
    aux_center: LatticeVec
    base_point: LatticeVec
    hexagon: TriRegion
    fern: TriRegion
    region: TriRegion

    @property
    def sides(self) -> Tuple[int, int, int, int, int, int]:
        return fc_sides(self.x, self.y, self.z, self.spec)

    @property
    def eastern_corner(self) -> LatticeVec:
        return hexagon_vertices(self.sides)[3]


def cored_layout(x: int, y: int, z: int, spec: FernSpec) -> CoredLayout:
    core = CoreHexSpec(x, y, z)
    kind = core.placement
    center = core.aux_center
    base = center + kind.offset
    big = hexagon(fc_sides(x, y, z, spec))
    fern = fern_cells(base, spec)
    outside = [cell for cell in fern.sorted_cells() if cell not in big]
    if outside:
        raise FernDoesNotFit(
            f"fern {spec} at {base} leaves the hexagon at {outside[0]}", cell=outside[0]
        )
    logger.debug(f"FC({x},{y},{z};{spec}) placement={kind.value} base={base}")
    return CoredLayout(x, y, z, spec, kind, center, base, big, fern, big.difference(fern))


def f_cored_hexagon(x: int, y: int, z: int, spec: FernSpec) -> TriRegion:
    return cored_layout(x, y, z, spec).region


def cored_hexagon(x: int, y: int, z: int, m: int) -> TriRegion:
    return f_cored_hexagon(x, y, z, FernSpec.of(m))


def envelope_hf(spec: FernSpec) -> TriRegion:
    """Smallest hexagon containing the fern, with the fern removed."""
    return f_cored_hexagon(0, 0, 0, spec)


def fern_displacements(layout: CoredLayout) -> Tuple[LatticeVec, LatticeVec]:
    """Displacements of the fern's rightmost point and of its base point.

    The first is measured from the auxiliary centre translated so the auxiliary
    hexagon's eastern corner meets the big hexagon's eastern corner; the second
    from the auxiliary centre itself. They agree for every placement.
    """
    x, y, z = layout.x, layout.y, layout.z
    aux_east = hexagon_vertices((x, y, z, x, y, z))[3]
    shifted_center = layout.aux_center + (layout.eastern_corner - aux_east)
    rightmost = layout.base_point + LatticeVec(layout.spec.total, 0)
    return rightmost - shifted_center, layout.base_point - layout.aux_center


def grid_ferns(max_k: int, max_lobe: int, min_k: int = 1) -> Iterable[FernSpec]:
    """All lobe lists with min_k <= k <= max_k and entries in 0..max_lobe, in canonical order."""
    for k in range(max(1, min_k), max_k + 1):
        for lobes in product(range(max_lobe + 1), repeat=k):
            yield FernSpec(lobes)
