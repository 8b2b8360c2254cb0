from fernhex.lattice import TriRegion, down, up
from fernhex.regions import FernSpec, cored_layout, hexagon
from fernhex.render import FERN_FILL, render_ascii, render_svg

UNIT = hexagon((1, 1, 1, 1, 1, 1))


def test_ascii_unit_hexagon():
    assert render_ascii(UNIT) == "^v^\nv^v\n"


def test_ascii_single_lozenge():
    assert render_ascii(TriRegion.of([up(0, 0), down(0, 0)])) == "^v\n"


def test_ascii_marks_the_fern():
    layout = cored_layout(1, 1, 1, FernSpec.of(1, 1))
    text = render_ascii(layout.region, layout.fern)
    assert text.count("#") == 2
    assert text.count("^") + text.count("v") == len(layout.region)


def test_ascii_empty_region():
    assert render_ascii(TriRegion()) == ""


def test_svg_has_one_polygon_per_cell():
    svg = render_svg(UNIT)
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
    assert svg.count("<polygon") == 6
    assert svg.rstrip().endswith("</svg>")
    assert "-0.000" not in svg


def test_svg_is_deterministic_and_fills_the_fern():
    layout = cored_layout(1, 1, 1, FernSpec.of(1, 1))
    first = render_svg(layout.region, layout.fern)
    assert first == render_svg(layout.region, layout.fern)
    assert first.count(FERN_FILL) == 2
    assert first.count("<polygon") == len(layout.region) + 2


def test_svg_of_empty_region():
    assert render_svg(TriRegion()).count("<polygon") == 0
