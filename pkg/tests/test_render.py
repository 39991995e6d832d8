import pytest

from aeq.constructions import unit_simplex_points
from aeq.errors import InputError
from aeq.geometry import PointSet
from aeq.render import render_svg


def count_groups(svg, prefix):
    return svg.count(f'<g id="{prefix}')


def test_moser_drawing(tmp_path, moser):
    out = tmp_path / "moser.svg"
    g = render_svg(moser, str(out))
    svg = out.read_text()
    assert len(g.edges) == 11
    assert count_groups(svg, "point-") == 7
    assert count_groups(svg, "unit-edge-") == 11


def test_single_point(tmp_path):
    out = tmp_path / "one.svg"
    render_svg(PointSet(2, [[0.3, -0.2]]), str(out))
    svg = out.read_text()
    assert count_groups(svg, "point-") == 1
    assert count_groups(svg, "unit-edge-") == 0


def test_output_is_deterministic(tmp_path, moser):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    render_svg(moser, str(first))
    render_svg(moser, str(second))
    assert first.read_bytes() == second.read_bytes()


def test_only_planar_sets(tmp_path):
    with pytest.raises(InputError, match="planar"):
        render_svg(unit_simplex_points(4, 3), str(tmp_path / "x.svg"))
