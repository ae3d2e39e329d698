"""Walls of type (c1, c2) crossed by a segment of polarizations.

A class ``xi`` with ``xi = c1 (mod 2)`` and ``c1^2 - 4 c2 <= xi^2 <= 0``
defines the hyperplane ``{D : D.xi = 0}``.  We find every such hyperplane
met by the segment ``L_t = (1-t) L_- + t L_+`` for ``0 < t < 1``.

Finiteness comes from a positive-definite form ``g_A`` (``A = L_- + L_+``):
every wall class crossed by the segment has ``g_A(xi) <= B`` for an explicit
rational ``B``, so a short-vector enumeration under ``g_A`` yields a
certified superset which is then filtered exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import Matrix, floor_sqrt, format_fraction, ldl, rank, to_fraction_matrix
from .lattice import (
    DivisorClass,
    LatticeError,
    SurfaceModel,
    anti_canonical_degree,
    as_class,
    intersect,
    is_ample,
)


class WallError(ValueError):
    pass


class DegenerateSegment(WallError):
    """The segment is not in general position with respect to the walls."""


class EndpointOnWall(DegenerateSegment):
    pass


class NonGenericSegment(DegenerateSegment):
    pass


@dataclass(frozen=True)
class WallSpec:
    surface: SurfaceModel
    c1: DivisorClass
    c2: int
    l_minus: DivisorClass
    l_plus: DivisorClass

    def __post_init__(self):
        for name in ("c1", "l_minus", "l_plus"):
            v = as_class(getattr(self, name))
            if len(v) != self.surface.rank:
                raise LatticeError(
                    f"dimension mismatch: {name} has length {len(v)}, "
                    f"surface rank is {self.surface.rank}"
                )
            object.__setattr__(self, name, v)
        for name in ("l_minus", "l_plus"):
            if not is_ample(self.surface, getattr(self, name)):
                raise WallError(f"{name} = {list(getattr(self, name))} is not ample")

    @property
    def discriminant(self) -> int:
        """``N = 4 c2 - c1^2``."""
        return 4 * self.c2 - intersect(self.surface, self.c1, self.c1)


@dataclass(frozen=True)
class WallRecord:
    xi: DivisorClass
    t_star: Fraction
    xi_sq: int
    grows_toward_plus: bool

    def to_json(self, multi_xi: bool = False) -> dict:
        return {
            "xi": list(self.xi),
            "t_star": format_fraction(self.t_star),
            "xi_sq": self.xi_sq,
            "multi_xi": multi_xi,
            "grows_toward_plus": self.grows_toward_plus,
        }

    @classmethod
    def from_json(cls, d: dict) -> WallRecord:
        return cls(DivisorClass(d["xi"]), Fraction(d["t_star"]), int(d["xi_sq"]),
                   bool(d["grows_toward_plus"]))


@dataclass(frozen=True)
class WallGroup:
    """Records sharing one hyperplane; members sorted by decreasing |xi^2|."""

    t_star: Fraction
    records: tuple[WallRecord, ...]

    @property
    def multi_xi(self) -> bool:
        return len(self.records) > 1


def short_vectors(gram_pd: Sequence[Sequence], bound) -> list[tuple[int, ...]]:
    """All integer ``v`` with ``v^T G v <= bound`` for positive-definite ``G``.

    Fincke-Pohst: write ``q(v) = sum_i d_i (v_i + sum_{j>i} L_ji v_j)^2`` and
    fix coordinates from the last one down, bounding each by the budget left.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be non-negative")
    try:
        lower, d = ldl(gram_pd)
    except ZeroDivisionError:
        raise ValueError("form is not positive definite") from None
    if any(x <= 0 for x in d):
        raise ValueError("form is not positive definite")
    n = len(d)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def recurse(i: int, budget: Fraction) -> None:
        c = sum((lower[j][i] * x[j] for j in range(i + 1, n)), Fraction(0))
        # need d_i (x_i + c)^2 <= budget
        s = floor_sqrt(budget / d[i])
        lo = _floor(-c) - s - 1
        hi = _ceil(-c) + s + 1
        for xi in range(lo, hi + 1):
            used = d[i] * (xi + c) ** 2
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                out.append(tuple(x))
            else:
                recurse(i - 1, budget - used)
        x[i] = 0

    recurse(n - 1, bound)
    out.sort()
    return out


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def hodge_form(s: SurfaceModel, a: DivisorClass) -> Matrix:
    """Gram matrix of ``g_A(x) = 2 (x.A)^2 / A^2 - x^2``; needs ``A^2 > 0``."""
    a2 = intersect(s, a, a)
    if a2 <= 0:
        raise WallError("A must have positive self-intersection")
    ga = [sum(s.gram[i][j] * a[j] for j in range(s.rank)) for i in range(s.rank)]
    return [
        [Fraction(2 * ga[i] * ga[j], a2) - s.gram[i][j] for j in range(s.rank)]
        for i in range(s.rank)
    ]


def _segment_square_min(s: SurfaceModel, lm: DivisorClass, lp: DivisorClass) -> Fraction:
    """Exact minimum of ``L_t^2`` over ``t`` in [0, 1]."""
    delta = lp - lm
    qa = intersect(s, delta, delta)
    qb = 2 * intersect(s, lm, delta)
    qc = intersect(s, lm, lm)
    candidates = [Fraction(qc), Fraction(qa + qb + qc)]
    if qa > 0:
        t = Fraction(-qb, 2 * qa)
        if 0 < t < 1:
            candidates.append(qa * t * t + qb * t + qc)
    return min(candidates)


def search_radius(spec: WallSpec) -> Fraction:
    """``B = N (2 M^2 / (A^2 m) - 1)``; every crossed wall has ``g_A(xi) <= B``."""
    s = spec.surface
    a = spec.l_minus + spec.l_plus
    big_m = max(intersect(s, a, spec.l_minus), intersect(s, a, spec.l_plus))
    small_m = _segment_square_min(s, spec.l_minus, spec.l_plus)
    a2 = intersect(s, a, a)
    return spec.discriminant * (Fraction(2 * big_m * big_m) / (a2 * small_m) - 1)


def crossing_parameter(s: SurfaceModel, xi, l_minus, l_plus) -> Fraction:
    xi, l_minus, l_plus = as_class(xi), as_class(l_minus), as_class(l_plus)
    lo = intersect(s, l_minus, xi)
    hi = intersect(s, l_plus, xi)
    if lo * hi >= 0:
        raise WallError(f"L_t.xi does not change sign strictly on the segment for xi={list(xi)}")
    return Fraction(-lo, hi - lo)


def orient(s: SurfaceModel, xi: DivisorClass, l_plus: DivisorClass | None = None) -> DivisorClass:
    """Sign normal form: ``-K.xi > 0``, else ``L_+.xi > 0``, else lexicographic."""
    mu = anti_canonical_degree(s, xi)
    if mu != 0:
        return xi if mu > 0 else -xi
    if l_plus is not None:
        lp = intersect(s, l_plus, xi)
        if lp != 0:
            return xi if lp > 0 else -xi
    first = next((c for c in xi if c != 0), 0)
    return xi if first >= 0 else -xi


def congruent_mod_2(xi: DivisorClass, c1: DivisorClass) -> bool:
    return all((a - b) % 2 == 0 for a, b in zip(xi, c1))


def _proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    return rank(to_fraction_matrix([list(u), list(v)])) <= 1


def enumerate_walls(spec: WallSpec) -> list[WallRecord]:
    s = spec.surface
    n_disc = spec.discriminant
    if n_disc <= 0:
        return []
    lm, lp = spec.l_minus, spec.l_plus
    a = lm + lp
    c1_sq = intersect(s, spec.c1, spec.c1)
    lower = c1_sq - 4 * spec.c2

    found: dict[DivisorClass, WallRecord] = {}
    for v in short_vectors(hodge_form(s, a), search_radius(spec)):
        xi = DivisorClass(v)
        if xi.is_zero() or not congruent_mod_2(xi, spec.c1):
            continue
        xi_sq = intersect(s, xi, xi)
        if not lower <= xi_sq <= 0:
            continue
        at_minus, at_plus = intersect(s, lm, xi), intersect(s, lp, xi)
        if at_minus == 0 or at_plus == 0:
            which = "L-" if at_minus == 0 else "L+"
            raise EndpointOnWall(f"{which} lies on the wall of xi={list(xi)}")
        if at_minus * at_plus > 0:
            continue
        # Hodge index: orthogonal to an ample class on the segment
        assert xi_sq < 0, xi
        oxi = orient(s, xi, lp)
        if oxi in found:
            continue
        found[oxi] = WallRecord(
            xi=oxi,
            t_star=crossing_parameter(s, oxi, lm, lp),
            xi_sq=xi_sq,
            grows_toward_plus=intersect(s, lp, oxi) > 0,
        )
    records = sorted(found.values(), key=lambda r: (r.t_star, r.xi_sq, r.xi.coords))
    _check_generic(records)
    return records


def _check_generic(records: Sequence[WallRecord]) -> None:
    by_t: dict[Fraction, list[WallRecord]] = {}
    for r in records:
        by_t.setdefault(r.t_star, []).append(r)
    for t, rs in by_t.items():
        for r in rs[1:]:
            if not _proportional(rs[0].xi, r.xi):
                raise NonGenericSegment(
                    f"walls of {list(rs[0].xi)} and {list(r.xi)} meet the segment "
                    f"at the same point t={format_fraction(t)}; perturb an endpoint"
                )


def group_and_sort(records: Sequence[WallRecord]) -> list[WallGroup]:
    _check_generic(records)
    by_t: dict[Fraction, list[WallRecord]] = {}
    for r in records:
        by_t.setdefault(r.t_star, []).append(r)
    return [
        WallGroup(t, tuple(sorted(by_t[t], key=lambda r: (r.xi_sq, r.xi.coords))))
        for t in sorted(by_t)
    ]
