import re
from fractions import Fraction

import pytest

from wallcross.cli import main
from wallcross.lattice import DivisorClass, LatticeError, surface_preset
from wallcross.plot import PlotSpec, primitive_direction, render_svg

P1P1 = surface_preset("p1xp1")


def svg_for(lm, lp, c1=(5, 5), c2=14, surface=P1P1, **kw):
    return render_svg(PlotSpec(surface, DivisorClass(c1), c2, DivisorClass(lm), DivisorClass(lp), **kw))


def wall_directions(svg):
    return re.findall(r'<line class="wall"[^>]*data-direction="(-?\d+),(-?\d+)"', svg)


def chamber_positions(svg):
    return re.findall(r'<text class="chamber" x="([\d.]+)" y="([\d.]+)"[^>]*>(C_\d+)</text>', svg)


def test_example_rays_and_chambers():
    svg = svg_for((1, 4), (4, 1))
    slopes = sorted(Fraction(int(b), int(a)) for a, b in wall_directions(svg))
    assert slopes == [Fraction(1, 3), Fraction(1), Fraction(3)]
    assert svg.count('stroke-dasharray') == 3
    assert [c for _, _, c in chamber_positions(svg)] == ["C_1", "C_2", "C_3", "C_4"]
    assert "horizontal = first basis coefficient" in svg


def test_example_is_byte_stable():
    assert svg_for((1, 4), (4, 1)) == svg_for((1, 4), (4, 1))


def test_no_walls():
    svg = svg_for((2, 3), (3, 2), c1=(0, 0), c2=0)
    assert wall_directions(svg) == []
    assert len(chamber_positions(svg)) == 1


def test_swapped_endpoints_mirror_labels():
    fwd, back = svg_for((1, 4), (4, 1)), svg_for((4, 1), (1, 4))
    assert sorted(wall_directions(fwd)) == sorted(wall_directions(back))
    pos_f = {c: (x, y) for x, y, c in chamber_positions(fwd)}
    pos_b = {c: (x, y) for x, y, c in chamber_positions(back)}
    k = len(pos_f)
    for j in range(1, k + 1):
        assert pos_f[f"C_{j}"] == pos_b[f"C_{k + 1 - j}"]


def test_chamber_labels_lie_between_their_walls():
    svg = svg_for((1, 4), (4, 1))
    # pixel coordinates: x grows with the first coefficient, y shrinks with the second
    ox, oy = 30.0, 370.0
    slopes = [(float(x) - ox, oy - float(y)) for x, y, _ in chamber_positions(svg)]
    ratios = [v / u for u, v in slopes]
    assert ratios[0] > 3 > ratios[1] > 1 > ratios[2] > Fraction(1, 3) > ratios[3] > 0


def test_hirzebruch_corners():
    s = surface_preset("hirzebruch:1")
    svg = svg_for((1, 3), (2, 9), c1=(1, 3), c2=6, surface=s)
    corners = re.findall(r'<line class="corner"[^>]*data-direction="(-?\d+),(-?\d+)"', svg)
    assert sorted(corners) == [("0", "1"), ("1", "1")]


def test_rank_one_rejected():
    with pytest.raises(LatticeError):
        svg_for((1,), (2,), c1=(1,), c2=3, surface=surface_preset("p2"))


def test_primitive_direction():
    assert primitive_direction((Fraction(15, 12), Fraction(45, 12))) == (1, 3)
    assert primitive_direction((Fraction(5, 2), Fraction(5, 2))) == (1, 1)


def test_cli_plot(tmp_path, capsys):
    out = tmp_path / "fan.svg"
    args = ["plot", "--surface", "p1xp1", "--c1", "5,5", "--c2", "14", "--from", "1,4", "--to", "4,1",
            "--out", str(out)]
    assert main(args) == 0
    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first
    assert main(["plot", "--surface", "p2", "--c1", "1", "--c2", "3", "--from", "1", "--to", "2",
                 "--out", str(tmp_path / "x.svg")]) == 1


def test_cli_plot_corner_override(tmp_path):
    out = tmp_path / "fan.svg"
    assert main(["plot", "--surface", "p1xp1", "--c1", "5,5", "--c2", "14", "--from", "1,4",
                 "--to", "4,1", "--corners", "1,5,5,1", "--out", str(out)]) == 0
    assert 'data-direction="1,5"' in out.read_text()
