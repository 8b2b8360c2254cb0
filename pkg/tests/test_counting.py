import pytest
from prometheus_client import REGISTRY

from fernhex import counting
from fernhex.config import EngineCaps
from fernhex.counting import (
    EngineKind,
    bareiss_determinant,
    condensation_sides,
    count_frontier_dp,
    count_kasteleyn,
    count_ryser,
    count_tilings,
    frontier_width,
    kasteleyn_matrix,
    kuo_quadruple,
    outer_face_walk,
    permanent,
)
from fernhex.errors import EngineMismatch, InstanceTooLarge
from fernhex.lattice import LatticeVec, TriRegion, mirror_horizontal, rotate180, up
from fernhex.metrics import init_metrics
from fernhex.regions import (
    FernSpec,
    cored_hexagon,
    envelope_hf,
    f_cored_hexagon,
    hexagon,
    trapezoid_with_dents,
)

UNIT = hexagon((1, 1, 1, 1, 1, 1))
HEX222 = hexagon((2, 2, 2, 2, 2, 2))


@pytest.mark.parametrize("engine", [EngineKind.DP, EngineKind.KASTELEYN, EngineKind.RYSER, EngineKind.AUTO])
def test_small_hexagons(engine):
    assert count_tilings(UNIT, engine) == 2
    assert count_tilings(HEX222, engine) == 20


def test_trivial_regions():
    assert count_tilings(TriRegion()) == 1
    assert count_tilings(TriRegion.of([up(0, 0)])) == 0
    assert count_tilings(hexagon((1, 1, 0, 1, 1, 0))) == 1
    assert count_tilings(trapezoid_with_dents(2, 1, (2,))) == 1


def test_hand_counted_cored_regions():
    assert count_tilings(f_cored_hexagon(1, 1, 1, FernSpec.of(1, 1))) == 4
    assert count_tilings(f_cored_hexagon(1, 1, 0, FernSpec.of(1, 1))) == 1
    assert count_tilings(f_cored_hexagon(0, 1, 0, FernSpec.of(1, 1))) == 1
    assert count_tilings(envelope_hf(FernSpec.of(1, 1, 1))) == 2
    assert count_tilings(envelope_hf(FernSpec.of(1, 2))) == 1
    assert count_tilings(cored_hexagon(0, 2, 1, 1)) == 1
    assert count_tilings(cored_hexagon(0, 1, 2, 1)) == 2
    assert count_tilings(f_cored_hexagon(0, 2, 1, FernSpec.of(1, 1))) == 3
    assert count_tilings(f_cored_hexagon(0, 2, 1, FernSpec.of(0, 1, 1))) == 6


def test_engines_agree_on_region_with_hole():
    region = cored_hexagon(2, 2, 2, 1)
    dp = count_frontier_dp(region)
    assert dp == count_kasteleyn(region)
    assert dp == count_tilings(region, EngineKind.AUTO)


def test_disconnected_region():
    region = UNIT | UNIT.translate(10, 0)
    assert count_frontier_dp(region) == 4
    assert count_kasteleyn(region) == 4


def test_kasteleyn_matrix_shape():
    matrix = kasteleyn_matrix(HEX222)
    assert len(matrix) == 12
    assert all(len(row) == 12 for row in matrix)
    assert {abs(v) for row in matrix for v in row} <= {0, 1}


def test_bareiss_determinant():
    assert bareiss_determinant([]) == 1
    assert bareiss_determinant([[2, 1], [1, 3]]) == 5
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0


def test_permanent():
    assert permanent([]) == 1
    assert permanent([[1, 1], [1, 1]]) == 2
    assert permanent([[1] * 3] * 3) == 6
    assert permanent([[1, 2], [3, 4]]) == 10


def test_frontier_cap():
    assert frontier_width(UNIT) >= 1
    with pytest.raises(InstanceTooLarge) as exc:
        count_frontier_dp(UNIT, width_cap=0)
    assert exc.value.engine == "dp"


def test_ryser_cap():
    with pytest.raises(InstanceTooLarge):
        count_ryser(HEX222, cap=3)


def test_auto_falls_back_to_kasteleyn_when_frontier_is_wide():
    caps = EngineCaps(dp_width_cap=1, ryser_max_pairs=16, cross_check_max_pairs=60, auto_ryser_max_pairs=10)
    assert count_tilings(HEX222, caps=caps) == 20


def test_mismatch_raises(monkeypatch):
    monkeypatch.setattr(counting, "count_kasteleyn", lambda region: 999)
    with pytest.raises(EngineMismatch) as exc:
        count_tilings(UNIT, EngineKind.DP, cross_check=True)
    assert exc.value.counts == {"dp": 2, "kasteleyn": 999}


def test_condensation_on_hexagon():
    walk = outer_face_walk(HEX222)
    assert len(walk) >= 4
    quad = kuo_quadruple(HEX222)
    assert quad is not None
    a, b, c, d = quad
    assert a.is_up and c.is_up and not b.is_up and not d.is_up
    lhs, rhs = condensation_sides(HEX222, a, b, c, d)
    assert lhs == rhs


@pytest.mark.parametrize(
    "xyz, lobes",
    [
        ((2, 2, 2), (1,)),
        ((1, 1, 1), (1, 1)),
        ((1, 2, 2), (1, 1)),
        ((1, 1, 2), (1,)),
        ((2, 1, 2), (1, 1)),
        ((2, 2, 2), (1, 0, 1)),
    ],
)
def test_condensation_on_cored_regions(xyz, lobes):
    region = f_cored_hexagon(*xyz, FernSpec(lobes))
    quad = kuo_quadruple(region)
    assert quad is not None
    lhs, rhs = condensation_sides(region, *quad)
    assert lhs == rhs


@pytest.mark.parametrize("xyz", [(1, 1, 1), (1, 2, 2), (0, 2, 1), (0, 1, 2)])
@pytest.mark.parametrize("lobes", [(1,), (1, 1), (1, 0, 1)])
def test_counts_survive_rotation_and_mirror(xyz, lobes):
    region = f_cored_hexagon(*xyz, FernSpec(lobes))
    expected = count_tilings(region)
    assert count_tilings(rotate180(region, LatticeVec(0, 0))) == expected
    assert count_tilings(mirror_horizontal(region, 0)) == expected


def test_counts_are_recorded():
    init_metrics("test-counting")
    count_tilings(UNIT, EngineKind.DP)
    value = REGISTRY.get_sample_value(
        "fernhex_counts_total", {"engine": "dp", "run": "test-counting"}
    )
    assert value is not None and value >= 1
