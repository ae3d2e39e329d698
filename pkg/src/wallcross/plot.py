"""Chamber diagram of a segment of polarizations on a rank-2 lattice.

Classes are drawn in their basis coordinates: the first coefficient runs
horizontally, the second vertically (upwards).  Each wall crossed by the
segment is a dashed ray along the polarization where the segment meets it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import format_fraction
from .lattice import DivisorClass, LatticeError, SurfaceModel, as_class
from .walls import WallGroup, WallSpec, enumerate_walls, group_and_sort

AXIS_CONVENTION = "horizontal = first basis coefficient, vertical = second basis coefficient"


@dataclass(frozen=True)
class PlotSpec:
    surface: SurfaceModel
    c1: DivisorClass
    c2: int
    l_minus: DivisorClass
    l_plus: DivisorClass
    corners: tuple[DivisorClass, DivisorClass] | None = None
    size: int = 400

    def __post_init__(self):
        if self.surface.rank != 2:
            raise LatticeError(f"plotting needs a rank-2 lattice, got rank {self.surface.rank}")
        if self.size < 50:
            raise LatticeError("image size must be at least 50 pixels")


def default_corners(s: SurfaceModel, l_minus, l_plus) -> tuple[DivisorClass, DivisorClass]:
    """Boundary rays of the nef cone for presets; the endpoints otherwise."""
    tag = s.ample_oracle
    if tag == "p1xp1":
        return DivisorClass((1, 0)), DivisorClass((0, 1))
    if tag.startswith("hirzebruch:"):
        n = int(tag.split(":", 1)[1])
        return DivisorClass((1, n)), DivisorClass((0, 1))
    return as_class(l_minus), as_class(l_plus)


def primitive_direction(v) -> tuple[int, int]:
    """Primitive integer vector on the ray through a rational point."""
    x, y = (Fraction(c) for c in v)
    den = math.lcm(x.denominator, y.denominator)
    a, b = int(x * den), int(y * den)
    g = math.gcd(a, b) or 1
    return a // g, b // g


def _angle(v, ref: float = 0.0) -> float:
    """Angle of ``v`` measured from the direction ``ref``, in (-pi, pi]."""
    a = math.atan2(float(v[1]), float(v[0])) - ref
    return math.atan2(math.sin(a), math.cos(a))


def _point_on_segment(lm, lp, t: Fraction) -> tuple[Fraction, Fraction]:
    return tuple((1 - t) * a + t * b for a, b in zip(lm, lp))


def chamber_sectors(groups: list[WallGroup], lm, lp, corners) -> list[tuple[float, float]]:
    """Angular sectors of the chambers, in traversal order from ``L_-``.

    Sector ``j`` is bounded by the walls at ``t_{j-1}`` and ``t_j``, with
    the corner rays closing off the first and last chamber.
    """
    ref = _angle(_point_on_segment(lm, lp, Fraction(1, 2)))
    ts = [g.t_star for g in groups]
    wall_angles = [_angle(_point_on_segment(lm, lp, t), ref) for t in ts]
    a_lm, a_lp = _angle(lm, ref), _angle(lp, ref)
    c_angles = sorted(_angle(c, ref) for c in corners)
    # corner nearest L_- in the direction away from L_+
    if a_lm <= a_lp:
        start, end = c_angles[0], c_angles[1]
    else:
        start, end = c_angles[1], c_angles[0]
    bounds = [ref + a for a in [start] + wall_angles + [end]]
    return list(zip(bounds, bounds[1:]))


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def render_svg(spec: PlotSpec) -> str:
    s = spec.surface
    lm, lp = as_class(spec.l_minus), as_class(spec.l_plus)
    records = enumerate_walls(WallSpec(s, spec.c1, spec.c2, lm, lp))
    groups = group_and_sort(records)
    corners = spec.corners or default_corners(s, lm, lp)

    size = spec.size
    margin = 30.0
    directions = [c for c in corners] + [lm, lp]
    units = [(float(v[0]), float(v[1])) for v in directions]
    units = [(x / math.hypot(x, y), y / math.hypot(x, y)) for x, y in units]
    # origin placement: keep every unit direction inside the frame
    xs = [0.0] + [u[0] for u in units]
    ys = [0.0] + [u[1] for u in units]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = (size - 2 * margin) / span
    ox = margin - min(xs) * scale
    oy = size - margin + min(ys) * scale

    def to_px(x: float, y: float) -> tuple[str, str]:
        return _fmt(ox + x * scale), _fmt(oy - y * scale)

    def ray(v, length: float = 1.0) -> tuple[str, str]:
        x, y = float(v[0]), float(v[1])
        r = math.hypot(x, y)
        return to_px(length * x / r, length * y / r)

    o = to_px(0.0, 0.0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<!-- wallcross chamber plot; axes: {AXIS_CONVENTION}; "
        f"surface={s.ample_oracle}; c1={','.join(map(str, spec.c1))}; c2={spec.c2}; "
        f"L-={','.join(map(str, lm))}; L+={','.join(map(str, lp))} -->",
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
    ]
    for c in corners:
        x, y = ray(c)
        a, b = primitive_direction(c)
        out.append(
            f'<line class="corner" x1="{o[0]}" y1="{o[1]}" x2="{x}" y2="{y}" '
            f'stroke="black" stroke-width="1.5" data-direction="{a},{b}"/>'
        )
    for g in groups:
        p = _point_on_segment(lm, lp, g.t_star)
        a, b = primitive_direction(p)
        x, y = ray((a, b))
        xis = ";".join(",".join(map(str, r.xi)) for r in g.records)
        out.append(
            f'<line class="wall" x1="{o[0]}" y1="{o[1]}" x2="{x}" y2="{y}" '
            f'stroke="gray" stroke-width="1" stroke-dasharray="6,4" '
            f'data-direction="{a},{b}" data-t="{format_fraction(g.t_star)}" data-xi="{xis}"/>'
        )
    for j, (a0, a1) in enumerate(chamber_sectors(groups, lm, lp, corners), start=1):
        mid = (a0 + a1) / 2
        x, y = to_px(0.7 * math.cos(mid), 0.7 * math.sin(mid))
        out.append(
            f'<text class="chamber" x="{x}" y="{y}" font-family="sans-serif" '
            f'font-size="14" text-anchor="middle">C_{j}</text>'
        )
    for name, v in (("L-", lm), ("L+", lp)):
        x, y = ray(v, 0.9)
        out.append(
            f'<circle class="endpoint" cx="{x}" cy="{y}" r="3" fill="black" data-label="{name}"/>'
        )
        out.append(
            f'<text class="endpoint-label" x="{x}" y="{y}" dx="6" dy="-6" '
            f'font-family="sans-serif" font-size="11">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
