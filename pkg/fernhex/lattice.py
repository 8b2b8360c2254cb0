"""Triangular-lattice geometry.

Points use oblique coordinates: ``(u, v)`` stands for ``u*e1 + v*e2`` where
``e1`` is the unit step east and ``e2`` the unit step northeast at 60 degrees.
Coordinates are exact (``Fraction`` with denominator 1 or 2); Cartesian values
only appear in :mod:`fernhex.render`.

A unit triangle is addressed by the lattice point ``(u, v)`` plus an
orientation:

* ``Up(u, v)`` has corners ``(u, v), (u+1, v), (u, v+1)``
* ``Down(u, v)`` has corners ``(u+1, v), (u, v+1), (u+1, v+1)``

``Up(u, v)`` shares an edge with ``Down(u, v)``, ``Down(u-1, v)`` and
``Down(u, v-1)``; these are the only adjacencies.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Literal, NamedTuple, Tuple, Union

from pydantic import BaseModel, ConfigDict

from .errors import InvalidInput, NonLatticeTransform

Number = Union[int, Fraction]


class Orient(str, Enum):
    UP = "up"
    DOWN = "down"

    @property
    def rank(self) -> int:
        return 0 if self is Orient.UP else 1


def _half_integer(value: Number, name: str) -> Fraction:
    frac = Fraction(value)
    if frac.denominator not in (1, 2):
        raise NonLatticeTransform(f"{name}={frac} is not an integer or half-integer")
    return frac


@dataclass(frozen=True, order=True)
class LatticeVec:
    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", _half_integer(self.u, "u"))
        object.__setattr__(self, "v", _half_integer(self.v, "v"))

    def __add__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "LatticeVec") -> "LatticeVec":
        return LatticeVec(self.u - other.u, self.v - other.v)

    def __mul__(self, k: int) -> "LatticeVec":
        return LatticeVec(self.u * k, self.v * k)

    __rmul__ = __mul__

    @property
    def is_integral(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def as_ints(self) -> Tuple[int, int]:
        if not self.is_integral:
            raise InvalidInput(f"{self} is not a lattice point")
        return int(self.u), int(self.v)

    def __str__(self) -> str:
        return f"({self.u}, {self.v})"


class UnitTriangle(NamedTuple):
    u: int
    v: int
    orient: Orient

    @property
    def is_up(self) -> bool:
        return self.orient is Orient.UP

    def sort_key(self) -> Tuple[int, int, int]:
        return (self.v, self.u, self.orient.rank)

    def translate(self, du: int, dv: int) -> "UnitTriangle":
        return UnitTriangle(self.u + du, self.v + dv, self.orient)

    def __str__(self) -> str:
        name = "Up" if self.is_up else "Down"
        return f"{name}({self.u},{self.v})"


def up(u: int, v: int) -> UnitTriangle:
    return UnitTriangle(u, v, Orient.UP)


def down(u: int, v: int) -> UnitTriangle:
    return UnitTriangle(u, v, Orient.DOWN)


def triangle_corners(t: UnitTriangle) -> Tuple[LatticeVec, LatticeVec, LatticeVec]:
    """Corners in the order of the cell definition (Up from (u,v), Down from (u+1,v))."""
    u, v = t.u, t.v
    if t.is_up:
        return LatticeVec(u, v), LatticeVec(u + 1, v), LatticeVec(u, v + 1)
    return LatticeVec(u + 1, v), LatticeVec(u, v + 1), LatticeVec(u + 1, v + 1)


def neighbors(t: UnitTriangle) -> Tuple[UnitTriangle, UnitTriangle, UnitTriangle]:
    """Edge-neighbours of ``t`` in counterclockwise order around its centroid."""
    u, v = t.u, t.v
    if t.is_up:
        # across the right edge, the left edge, the bottom edge
        return down(u, v), down(u - 1, v), down(u, v - 1)
    # across the top edge, the lower-left edge, the right edge
    return up(u, v + 1), up(u, v), up(u + 1, v)


def centroid3(t: UnitTriangle) -> Tuple[int, int]:
    """Three times the centroid, so it stays integral."""
    if t.is_up:
        return 3 * t.u + 1, 3 * t.v + 1
    return 3 * t.u + 2, 3 * t.v + 2


class TriangleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    u: int
    v: int
    orient: Literal["up", "down"]


class RegionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    triangles: List[TriangleModel]


@dataclass(frozen=True)
class TriRegion:
    cells: FrozenSet[UnitTriangle] = frozenset()

    @classmethod
    def of(cls, cells: Iterable[UnitTriangle]) -> "TriRegion":
        return cls(frozenset(cells))

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[UnitTriangle]:
        return iter(self.sorted_cells())

    def __contains__(self, cell: object) -> bool:
        return cell in self.cells

    def sorted_cells(self) -> List[UnitTriangle]:
        return sorted(self.cells, key=UnitTriangle.sort_key)

    def ups(self) -> List[UnitTriangle]:
        return [c for c in self.sorted_cells() if c.is_up]

    def downs(self) -> List[UnitTriangle]:
        return [c for c in self.sorted_cells() if not c.is_up]

    @property
    def balance(self) -> int:
        return sum(1 if c.is_up else -1 for c in self.cells)

    def union(self, other: "TriRegion") -> "TriRegion":
        return TriRegion(self.cells | other.cells)

    def difference(self, other: Union["TriRegion", Iterable[UnitTriangle]]) -> "TriRegion":
        removed = other.cells if isinstance(other, TriRegion) else frozenset(other)
        return TriRegion(self.cells - removed)

    __or__ = union
    __sub__ = difference

    def translate(self, du: int, dv: int) -> "TriRegion":
        return TriRegion(frozenset(c.translate(du, dv) for c in self.cells))

    def to_model(self) -> RegionModel:
        return RegionModel(
            triangles=[
                TriangleModel(u=c.u, v=c.v, orient=c.orient.value) for c in self.sorted_cells()
            ]
        )

    def to_json(self, indent: int | None = None) -> str:
        return self.to_model().model_dump_json(indent=indent)

    @classmethod
    def from_model(cls, model: RegionModel) -> "TriRegion":
        return cls(frozenset(UnitTriangle(t.u, t.v, Orient(t.orient)) for t in model.triangles))

    @classmethod
    def from_json(cls, text: str) -> "TriRegion":
        return cls.from_model(RegionModel.model_validate_json(text))

    def fingerprint(self) -> str:
        """Short SHA256 of the canonical JSON, used as a cache key"""
        canonical = json.dumps(self.to_model().model_dump(), separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def region_balance(r: TriRegion) -> int:
    """Number of Up cells minus number of Down cells."""
    return r.balance


@dataclass(frozen=True)
class DualGraph:
    up_nodes: Tuple[UnitTriangle, ...]
    down_nodes: Tuple[UnitTriangle, ...]
    edges: Tuple[Tuple[int, int], ...]

    def up_index(self) -> Dict[UnitTriangle, int]:
        return {cell: i for i, cell in enumerate(self.up_nodes)}

    def down_index(self) -> Dict[UnitTriangle, int]:
        return {cell: j for j, cell in enumerate(self.down_nodes)}

    def biadjacency(self) -> List[List[int]]:
        matrix = [[0] * len(self.down_nodes) for _ in self.up_nodes]
        for i, j in self.edges:
            matrix[i][j] = 1
        return matrix


def dual_graph(r: TriRegion) -> DualGraph:
    """Bipartite dual of ``r``: Up cells against Down cells, edges for shared lattice edges."""
    ups = tuple(r.ups())
    downs = tuple(r.downs())
    down_pos = {cell: j for j, cell in enumerate(downs)}
    edges = []
    for i, cell in enumerate(ups):
        for other in neighbors(cell):
            j = down_pos.get(other)
            if j is not None:
                edges.append((i, j))
    return DualGraph(ups, downs, tuple(sorted(edges)))


class Transform(str, Enum):
    ROTATE_180 = "rotate180"
    MIRROR_HORIZONTAL = "mirror-horizontal"


def rotate180(r: TriRegion, center: LatticeVec) -> TriRegion:
    """Point reflection through ``center``; swaps Up and Down."""
    su, sv = 2 * center.u, 2 * center.v
    if su.denominator != 1 or sv.denominator != 1:
        raise NonLatticeTransform(f"rotation centre {center} is not a half-lattice point")
    su, sv = int(su), int(sv)
    image = []
    for c in r.cells:
        orient = Orient.DOWN if c.is_up else Orient.UP
        image.append(UnitTriangle(su - c.u - 1, sv - c.v - 1, orient))
    return TriRegion(frozenset(image))


def mirror_horizontal(r: TriRegion, line: Number) -> TriRegion:
    """Reflection across the horizontal lattice line ``v = line``; swaps Up and Down."""
    h = Fraction(line)
    if h.denominator != 1:
        raise NonLatticeTransform(f"mirror line v={h} is not a lattice line")
    h = int(h)
    image = []
    for c in r.cells:
        if c.is_up:
            image.append(down(c.u + c.v - h, 2 * h - c.v - 1))
        else:
            image.append(up(c.u + c.v + 1 - h, 2 * h - c.v - 1))
    return TriRegion(frozenset(image))


def transform(
    r: TriRegion,
    kind: Transform,
    *,
    center: LatticeVec | None = None,
    line: Number | None = None,
) -> TriRegion:
    if kind is Transform.ROTATE_180:
        if center is None:
            raise InvalidInput("rotate180 needs a centre")
        return rotate180(r, center)
    if line is None:
        raise InvalidInput("mirror-horizontal needs a line")
    return mirror_horizontal(r, line)
