import xml.etree.ElementTree as ET

import pytest

from knotdefect.diagram import Diagram, figure_example, generate_random_unknot, single_kink, unknot
from knotdefect.render import render_svg, tutte_layout

NS = "{http://www.w3.org/2000/svg}"


def test_unknot_is_a_circle():
    root = ET.fromstring(render_svg(unknot()))
    assert len(root.findall(f".//{NS}circle")) == 1
    assert not root.findall(f".//{NS}polyline")


def test_figure_example_glyphs():
    root = ET.fromstring(render_svg(figure_example()))
    assert len(root.findall(f".//{NS}polyline")) == 4
    assert len(root.findall(f".//{NS}text")) == 2


def test_underpass_ends_are_trimmed():
    d = figure_example()
    root = ET.fromstring(render_svg(d))
    # labels sit 4px above their crossing
    text = {int(t.text): (float(t.get("x")), float(t.get("y")) + 4)
            for t in root.findall(f".//{NS}text")}
    for line in root.findall(f".//{NS}polyline"):
        a, _ = map(int, line.get("data-ends").split())
        first = tuple(map(float, line.get("points").split()[0].split(",")))
        # over ends (slots 1 and 3) touch the crossing, under ends leave a gap
        at_crossing = first == text[a >> 2]
        assert at_crossing == ((a & 3) in (0, 2))


@pytest.mark.parametrize("d", [single_kink(), generate_random_unknot(3, 25)], ids=["kink", "random"])
def test_output_is_well_formed(d):
    root = ET.fromstring(render_svg(d))
    assert len(root.findall(f".//{NS}polyline")) == 2 * d.n


def test_outer_face_is_pinned_to_a_polygon():
    d = generate_random_unknot(4, 10)
    pos, _ = tutte_layout(d)
    outer = {t >> 2 for t in d.outer_face()}
    for v in outer:
        x, y = pos[v]
        assert abs(x * x + y * y - 1) < 1e-9


def test_render_is_deterministic():
    d = generate_random_unknot(12, 15)
    assert render_svg(d) == render_svg(d)


def test_invalid_diagram_is_refused():
    with pytest.raises(ValueError):
        render_svg(Diagram.from_edges([(0, 0, 1, 2)], outer=(0, 2)))
