"""Exact lozenge-tiling counters.

A lozenge tiling of a region is a perfect matching of its dual graph, so every
engine here counts perfect matchings:

* ``dp``: frontier sweep over cells in (v, u) order, state = set of already
  swept cells still waiting for a partner.
* ``kasteleyn``: |det| of a signed biadjacency matrix, signs fixed face by face
  on the planar embedding, determinant by Bareiss elimination.
* ``ryser``: permanent of the biadjacency matrix by inclusion-exclusion; small
  instances only.
* ``auto``: dp (or kasteleyn when the frontier is too wide) cross-checked by the
  other engines whenever the instance is small enough.
"""

from __future__ import annotations

import logging
import time
from collections import defaultdict
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .config import EngineCaps, get_config
from .errors import EngineMismatch, InstanceTooLarge, InvalidInput
from .lattice import TriRegion, UnitTriangle, centroid3, dual_graph, neighbors
from .metrics import get_metrics

logger = logging.getLogger(__name__)

Edge = Tuple[UnitTriangle, UnitTriangle]


class EngineKind(str, Enum):
    DP = "dp"
    KASTELEYN = "kasteleyn"
    RYSER = "ryser"
    AUTO = "auto"


def _caps(caps: Optional[EngineCaps]) -> EngineCaps:
    return caps if caps is not None else get_config().engines


# ---------------------------------------------------------------------------
# Frontier DP
# ---------------------------------------------------------------------------


def _sweep_plan(region: TriRegion):
    order = region.sorted_cells()
    index = {cell: i for i, cell in enumerate(order)}
    earlier: List[List[int]] = []
    last_neighbor: List[int] = []
    for i, cell in enumerate(order):
        idx = [index[n] for n in neighbors(cell) if n in index]
        earlier.append(sorted(j for j in idx if j < i))
        last_neighbor.append(max(idx, default=-1))
    # expires[i]: mask of cells whose last neighbour is cell i
    expires = [0] * len(order)
    for j, last in enumerate(last_neighbor):
        if last > j:
            expires[last] |= 1 << j
    return order, earlier, last_neighbor, expires


def frontier_width(region: TriRegion) -> int:
    """Largest number of swept cells that still have unswept neighbours."""
    order, _, last_neighbor, _ = _sweep_plan(region)
    width = 0
    open_cells = 0
    closing = defaultdict(int)
    for i in range(len(order)):
        width = max(width, open_cells)
        open_cells -= closing.pop(i, 0)
        if last_neighbor[i] > i:
            open_cells += 1
            closing[last_neighbor[i]] += 1
        width = max(width, open_cells)
    return width


def count_frontier_dp(region: TriRegion, width_cap: Optional[int] = None) -> int:
    if region.balance != 0:
        return 0
    cap = width_cap if width_cap is not None else get_config().engines.dp_width_cap
    width = frontier_width(region)
    if width > cap:
        raise InstanceTooLarge(EngineKind.DP.value, width, cap)

    order, earlier, last_neighbor, expires = _sweep_plan(region)
    states: Dict[int, int] = {0: 1}
    for i in range(len(order)):
        stays_open = last_neighbor[i] > i
        bit = 1 << i
        dead = expires[i]
        nxt: Dict[int, int] = defaultdict(int)
        for mask, ways in states.items():
            for j in earlier[i]:
                if mask >> j & 1:
                    closed = mask & ~(1 << j)
                    if not closed & dead:
                        nxt[closed] += ways
            if stays_open and not mask & dead:
                nxt[mask | bit] += ways
        states = nxt
        if not states:
            return 0
    return states.get(0, 0)


# ---------------------------------------------------------------------------
# Kasteleyn
# ---------------------------------------------------------------------------


def _edge(a: UnitTriangle, b: UnitTriangle) -> Edge:
    return (a, b) if a.is_up else (b, a)


def _dual_nx(region: TriRegion) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(region.sorted_cells())
    for cell in region.ups():
        for other in neighbors(cell):
            if other in region:
                graph.add_edge(cell, other)
    return graph


def _embedding(region: TriRegion) -> nx.PlanarEmbedding:
    embedding = nx.PlanarEmbedding()
    embedding.add_nodes_from(region.sorted_cells())
    data = {}
    for cell in region.sorted_cells():
        present = [n for n in neighbors(cell) if n in region]
        data[cell] = list(reversed(present))  # clockwise
    embedding.set_data(data)
    return embedding


def _signed_area2(walk: Sequence[UnitTriangle]) -> int:
    points = [centroid3(cell) for cell in walk]
    total = 0
    for (x0, y0), (x1, y1) in zip(points, points[1:] + points[:1]):
        total += x0 * y1 - x1 * y0
    return total


def _faces(embedding: nx.PlanarEmbedding) -> List[List[UnitTriangle]]:
    visited = set()
    faces = []
    for v, w in sorted(embedding.edges(), key=lambda e: (e[0].sort_key(), e[1].sort_key())):
        if (v, w) in visited:
            continue
        faces.append(embedding.traverse_face(v, w, mark_half_edges=visited))
    return faces


def kasteleyn_signs(region: TriRegion) -> Dict[Edge, int]:
    """Sign for every dual edge such that each bounded face meets Kasteleyn's condition.

    A bounded face whose boundary walk has 2r half-edges must carry r - 1 minus
    signs (mod 2). Spanning-tree edges get +1; each remaining edge is the link
    between a face and its parent in the dual tree, and is fixed when its face is
    processed from the leaves up.
    """
    graph = _dual_nx(region)
    signs: Dict[Edge, int] = {}
    if graph.number_of_edges() == 0:
        return signs

    tree = set()
    for component in nx.connected_components(graph):
        root = min(component, key=UnitTriangle.sort_key)
        for a, b in nx.bfs_edges(graph, root):
            tree.add(_edge(a, b))
    for a, b in graph.edges():
        signs[_edge(a, b)] = 1

    faces = _faces(_embedding(region))
    face_of: Dict[Tuple[UnitTriangle, UnitTriangle], int] = {}
    for f, walk in enumerate(faces):
        for a, b in zip(walk, walk[1:] + walk[:1]):
            face_of[(a, b)] = f

    dual = nx.Graph()
    dual.add_nodes_from(range(len(faces)))
    for a, b in graph.edges():
        edge = _edge(a, b)
        if edge not in tree:
            dual.add_edge(face_of[(a, b)], face_of[(b, a)], primal=edge)

    component_of = {}
    for c, component in enumerate(nx.connected_components(graph)):
        for cell in component:
            component_of[cell] = c
    outer: Dict[int, int] = {}
    for f, walk in enumerate(faces):
        c = component_of[walk[0]]
        area = abs(_signed_area2(walk))
        if c not in outer or area > abs(_signed_area2(faces[outer[c]])):
            outer[c] = f

    for root in sorted(outer.values()):
        order: List[int] = []
        parent_edge: Dict[int, Edge] = {}
        for parent, child in nx.bfs_edges(dual, root):
            order.append(child)
            parent_edge[child] = dual[parent][child]["primal"]
        for f in reversed(order):
            walk = faces[f]
            fix = parent_edge[f]
            negatives = 0
            for a, b in zip(walk, walk[1:] + walk[:1]):
                edge = _edge(a, b)
                if edge != fix and signs[edge] < 0:
                    negatives += 1
            r = len(walk) // 2
            signs[fix] = -1 if (negatives - (r - 1)) % 2 else 1
    return signs


def kasteleyn_matrix(region: TriRegion) -> List[List[int]]:
    graph = dual_graph(region)
    signs = kasteleyn_signs(region)
    matrix = [[0] * len(graph.down_nodes) for _ in graph.up_nodes]
    for i, j in graph.edges:
        matrix[i][j] = signs[(graph.up_nodes[i], graph.down_nodes[j])]
    return matrix


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix by fraction-free elimination."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise InvalidInput("determinant needs a square matrix")
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    previous = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            factor = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - factor * row_k[j]) // previous
            row_i[k] = 0
        previous = pivot
    return sign * m[n - 1][n - 1]


def count_kasteleyn(region: TriRegion) -> int:
    ups = region.ups()
    if len(ups) != len(region) - len(ups):
        return 0
    if not ups:
        return 1
    return abs(bareiss_determinant(kasteleyn_matrix(region)))


# ---------------------------------------------------------------------------
# Ryser
# ---------------------------------------------------------------------------


def permanent(matrix: Sequence[Sequence[int]]) -> int:
    """Ryser's formula walked in Gray-code order."""
    n = len(matrix)
    if n == 0:
        return 1
    row_sums = [0] * n
    total = 0
    previous = 0
    for i in range(1, 1 << n):
        gray = i ^ (i >> 1)
        flipped = gray ^ previous
        column = flipped.bit_length() - 1
        step = 1 if gray & flipped else -1
        for r in range(n):
            row_sums[r] += step * matrix[r][column]
        product = 1
        for s in row_sums:
            product *= s
            if product == 0:
                break
        total += -product if gray.bit_count() % 2 else product
        previous = gray
    return total if n % 2 == 0 else -total


def count_ryser(region: TriRegion, cap: Optional[int] = None) -> int:
    ups = region.ups()
    if len(ups) != len(region) - len(ups):
        return 0
    limit = cap if cap is not None else get_config().engines.ryser_max_pairs
    if len(ups) > limit:
        raise InstanceTooLarge(EngineKind.RYSER.value, len(ups), limit)
    return permanent(dual_graph(region).biadjacency())


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def _timed(engine: EngineKind, region: TriRegion, caps: EngineCaps) -> int:
    start = time.perf_counter()
    if engine is EngineKind.DP:
        value = count_frontier_dp(region, caps.dp_width_cap)
    elif engine is EngineKind.KASTELEYN:
        value = count_kasteleyn(region)
    else:
        value = count_ryser(region, caps.ryser_max_pairs)
    duration = time.perf_counter() - start
    logger.debug(f"{engine.value}: {len(region)} cells -> {value} in {duration * 1000:.1f}ms")
    metrics = get_metrics()
    if metrics:
        metrics.record_count(engine.value, len(region), duration)
    return value


def count_tilings(
    region: TriRegion,
    engine: EngineKind = EngineKind.AUTO,
    cross_check: bool = False,
    caps: Optional[EngineCaps] = None,
) -> int:
    """Number of lozenge tilings of ``region``; 1 for the empty region, 0 if unbalanced."""
    caps = _caps(caps)
    engine = EngineKind(engine)
    if region.balance != 0:
        return 0
    if len(region) == 0:
        return 1

    pairs = len(region) // 2
    if engine is EngineKind.AUTO:
        primary = EngineKind.DP
        if frontier_width(region) > caps.dp_width_cap:
            logger.warning(
                f"frontier of {len(region)}-cell region exceeds {caps.dp_width_cap}; using kasteleyn"
            )
            primary = EngineKind.KASTELEYN
        checks = []
        if primary is EngineKind.DP and pairs <= caps.cross_check_max_pairs:
            checks.append(EngineKind.KASTELEYN)
        if pairs <= caps.auto_ryser_max_pairs:
            checks.append(EngineKind.RYSER)
    else:
        primary = engine
        checks = []
        if cross_check:
            checks.append(EngineKind.DP if primary is EngineKind.KASTELEYN else EngineKind.KASTELEYN)

    counts = {primary.value: _timed(primary, region, caps)}
    for other in checks:
        counts[other.value] = _timed(other, region, caps)
    if len(set(counts.values())) > 1:
        logger.error(f"engine mismatch on region {region.fingerprint()}: {counts}")
        metrics = get_metrics()
        if metrics:
            metrics.record_mismatch()
        raise EngineMismatch(counts)
    return counts[primary.value]


# ---------------------------------------------------------------------------
# Graphical condensation
# ---------------------------------------------------------------------------


def outer_face_walk(region: TriRegion) -> List[UnitTriangle]:
    """Boundary walk of the outer face of the component holding the first cell."""
    if len(region) == 0:
        return []
    embedding = _embedding(region)
    if embedding.number_of_edges() == 0:
        return region.sorted_cells()[:1]
    first = region.sorted_cells()[0]
    component = nx.node_connected_component(_dual_nx(region), first)
    faces = [walk for walk in _faces(embedding) if walk[0] in component]
    return max(faces, key=lambda walk: abs(_signed_area2(walk)))


def kuo_quadruple(
    region: TriRegion,
) -> Optional[Tuple[UnitTriangle, UnitTriangle, UnitTriangle, UnitTriangle]]:
    """Four distinct cells a (Up), b (Down), c (Up), d (Down) in cyclic order on the outer face."""
    picked: List[UnitTriangle] = []
    for cell in outer_face_walk(region):
        if cell in picked:
            continue
        if cell.is_up == (len(picked) % 2 == 0):
            picked.append(cell)
            if len(picked) == 4:
                a, b, c, d = picked
                return a, b, c, d
    return None


def condensation_sides(
    region: TriRegion,
    a: UnitTriangle,
    b: UnitTriangle,
    c: UnitTriangle,
    d: UnitTriangle,
    engine: EngineKind = EngineKind.AUTO,
) -> Tuple[int, int]:
    """Both sides of M(G)M(G-abcd) = M(G-ab)M(G-cd) + M(G-ad)M(G-bc)."""

    def m(*removed: UnitTriangle) -> int:
        return count_tilings(region.difference(removed), engine)

    lhs = m() * m(a, b, c, d)
    rhs = m(a, b) * m(c, d) + m(a, d) * m(b, c)
    return lhs, rhs
