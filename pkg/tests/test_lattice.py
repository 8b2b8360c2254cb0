from fractions import Fraction

import pytest
from pydantic import ValidationError

from fernhex.errors import InvalidInput, NonLatticeTransform
from fernhex.lattice import (
    LatticeVec,
    Orient,
    RegionModel,
    Transform,
    TriRegion,
    down,
    dual_graph,
    mirror_horizontal,
    neighbors,
    region_balance,
    rotate180,
    transform,
    triangle_corners,
    up,
)
from fernhex.regions import hexagon


def test_triangle_corners():
    assert triangle_corners(up(0, 0)) == (LatticeVec(0, 0), LatticeVec(1, 0), LatticeVec(0, 1))
    assert triangle_corners(down(0, 0)) == (LatticeVec(1, 0), LatticeVec(0, 1), LatticeVec(1, 1))


def test_neighbors_are_opposite_orientation():
    assert neighbors(up(2, 3)) == (down(2, 3), down(1, 3), down(2, 2))
    assert neighbors(down(2, 3)) == (up(2, 4), up(2, 3), up(3, 3))
    for cell in (up(0, 0), down(5, -2)):
        for other in neighbors(cell):
            assert other.is_up != cell.is_up
            assert cell in neighbors(other)


def test_lattice_vec_rejects_thirds():
    with pytest.raises(NonLatticeTransform):
        LatticeVec(Fraction(1, 3), 0)
    half = LatticeVec(Fraction(1, 2), 0)
    assert not half.is_integral
    assert (half * 2).as_ints() == (1, 0)
    with pytest.raises(InvalidInput):
        half.as_ints()


def test_unit_hexagon_cells():
    r = hexagon((1, 1, 1, 1, 1, 1))
    assert len(r) == 6
    assert len(r.ups()) == 3
    assert region_balance(r) == 0
    assert r.sorted_cells()[0] == down(0, -1)


def test_degenerate_hexagon_is_one_lozenge():
    r = hexagon((1, 1, 0, 1, 1, 0))
    assert len(r) == 2
    assert r.balance == 0


def test_balance_is_bottom_minus_top():
    r = hexagon((1, 2, 1, 2, 1, 2))
    assert len(r) == 13
    assert len(r.ups()) == 7
    assert r.balance == 1


def test_rotate180_maps_symmetric_hexagon_to_itself():
    r = hexagon((1, 2, 3, 1, 2, 3))
    center = LatticeVec(Fraction(3, 2), Fraction(1, 2))
    assert rotate180(r, center) == r
    assert transform(r, Transform.ROTATE_180, center=center) == r


def test_rotate180_swaps_orientation():
    image = rotate180(TriRegion.of([up(0, 0)]), LatticeVec(0, 0))
    assert image == TriRegion.of([down(-1, -1)])


def test_mirror_horizontal():
    assert mirror_horizontal(TriRegion.of([up(0, 0)]), 0) == TriRegion.of([down(0, -1)])
    r = hexagon((2, 1, 3, 2, 1, 3))
    assert mirror_horizontal(mirror_horizontal(r, 2), 2) == r
    assert mirror_horizontal(r, 0).balance == -r.balance


def test_mirror_needs_lattice_line():
    with pytest.raises(NonLatticeTransform):
        mirror_horizontal(hexagon((1, 1, 1, 1, 1, 1)), Fraction(1, 2))
    with pytest.raises(InvalidInput):
        transform(hexagon((1, 1, 1, 1, 1, 1)), Transform.MIRROR_HORIZONTAL)


def test_region_json_round_trip():
    r = hexagon((2, 1, 1, 2, 1, 1))
    assert TriRegion.from_json(r.to_json()) == r
    assert r.to_model().triangles[0].orient in ("up", "down")


def test_region_json_rejects_unknown_fields():
    with pytest.raises(ValidationError):
        RegionModel.model_validate_json('{"triangles": [], "extra": 1}')
    with pytest.raises(ValidationError):
        TriRegion.from_json('{"triangles": [{"u": 0, "v": 0, "orient": "left"}]}')


def test_fingerprint_is_canonical():
    a = TriRegion.of([up(0, 0), down(0, 0)])
    b = TriRegion.of([down(0, 0), up(0, 0)])
    assert a.fingerprint() == b.fingerprint()
    assert a.fingerprint() != TriRegion.of([up(0, 0)]).fingerprint()
    assert len(a.fingerprint()) == 16


def test_region_set_operations():
    a = TriRegion.of([up(0, 0), down(0, 0)])
    b = TriRegion.of([down(0, 0)])
    assert (a - b) == TriRegion.of([up(0, 0)])
    assert (b | TriRegion.of([up(0, 0)])) == a
    assert a.translate(1, 2) == TriRegion.of([up(1, 2), down(1, 2)])
    assert up(0, 0).orient is Orient.UP


def test_dual_graph_of_unit_hexagon_is_a_cycle():
    graph = dual_graph(hexagon((1, 1, 1, 1, 1, 1)))
    assert len(graph.up_nodes) == len(graph.down_nodes) == 3
    assert len(graph.edges) == 6
    assert all(sum(row) == 2 for row in graph.biadjacency())
