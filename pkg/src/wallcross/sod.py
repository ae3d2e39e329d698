"""Wall numerology and symbolic semi-orthogonal decompositions.

Each wall ``xi`` contributes, for ``l = l_xi, ..., 0``, a block of ``mu_xi``
copies of ``D^b(Hilb^l(S) x Hilb^(l_xi - l)(S))`` to the derived category of
the moduli stack on its larger side.  ``mu_xi = 0`` walls give equivalences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .exact import format_fraction
from .lattice import (
    DivisorClass,
    SurfaceModel,
    anti_canonical_degree,
    as_class,
    intersect,
)
from .walls import WallError, WallGroup, WallRecord, congruent_mod_2, orient


class NumerologyError(WallError):
    pass


@dataclass(frozen=True)
class Numerology:
    xi: DivisorClass
    l_xi: int
    mu_xi: int
    F: DivisorClass
    r_minus: int
    r_plus: int

    def to_json(self) -> dict:
        return {
            "xi": list(self.xi),
            "l_xi": self.l_xi,
            "mu_xi": self.mu_xi,
            "F": list(self.F),
            "r_minus": self.r_minus,
            "r_plus": self.r_plus,
            "rank_kind": "euler-characteristic",
        }

    @classmethod
    def from_json(cls, d: dict) -> Numerology:
        return cls(DivisorClass(d["xi"]), d["l_xi"], d["mu_xi"], DivisorClass(d["F"]),
                   d["r_minus"], d["r_plus"])


def _check_wall_class(s: SurfaceModel, c1, c2: int, xi) -> tuple[int, int]:
    c1, xi = as_class(c1), as_class(xi)
    if not congruent_mod_2(xi, c1):
        raise NumerologyError(f"xi={list(xi)} is not congruent to c1={list(c1)} mod 2")
    xi_sq = intersect(s, xi, xi)
    lower = intersect(s, c1, c1) - 4 * c2
    if not lower <= xi_sq <= 0:
        raise NumerologyError(f"xi^2 = {xi_sq} outside [{lower}, 0]")
    num = 4 * c2 - intersect(s, c1, c1) + xi_sq
    # xi = c1 mod 2 makes num divisible by 4
    assert num % 4 == 0, (num, list(xi))
    return xi_sq, num // 4


def extension_ranks(s: SurfaceModel, c1, c2: int, xi) -> tuple[int, int]:
    """Euler-characteristic ranks ``(r_-, r_+)`` of the extension bundles.

    ``r_- = l - 1 - (xi^2 + mu)/2`` and ``r_+ = l - 1 - (xi^2 - mu)/2``,
    i.e. ``l - chi(O(xi))`` and ``l - chi(O(-xi))`` by Riemann-Roch.
    """
    xi_sq, l_xi = _check_wall_class(s, c1, c2, xi)
    mu = anti_canonical_degree(s, xi)
    if mu < 0:
        raise NumerologyError("xi must be oriented with -K.xi >= 0")
    if (xi_sq + mu) % 2:
        raise NumerologyError("xi^2 + K.xi is odd: canonical class is not characteristic")
    r_minus = l_xi - 1 - (xi_sq + mu) // 2
    r_plus = l_xi - 1 - (xi_sq - mu) // 2
    if r_minus < 0 or r_plus < 0:
        raise NumerologyError(
            f"negative extension rank ({r_minus}, {r_plus}): "
            "invariants inconsistent with a nonempty wall"
        )
    return r_minus, r_plus


def wall_numerology(s: SurfaceModel, c1, c2: int, xi, l_plus=None) -> Numerology:
    """Numerology of the oriented form of ``xi`` (see :func:`walls.orient`)."""
    c1 = as_class(c1)
    xi = orient(s, as_class(xi), None if l_plus is None else as_class(l_plus))
    _, l_xi = _check_wall_class(s, c1, c2, xi)
    r_minus, r_plus = extension_ranks(s, c1, c2, xi)
    return Numerology(
        xi=xi,
        l_xi=l_xi,
        mu_xi=anti_canonical_degree(s, xi),
        F=DivisorClass((a + b) // 2 for a, b in zip(c1, xi)),
        r_minus=r_minus,
        r_plus=r_plus,
    )


@dataclass(frozen=True)
class SODFactor:
    """``hilb`` is D^b(Hilb^a x Hilb^b); ``endpoint`` is D^b(M_label)."""

    kind: str
    a: int = 0
    b: int = 0
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("hilb", "endpoint", "exceptional_point"):
            raise ValueError(f"unknown factor kind {self.kind!r}")

    def render(self) -> str:
        if self.kind == "endpoint":
            return f"D^b(M_{{{self.label}}})"
        if self.kind == "exceptional_point" or (self.a, self.b) == (0, 0):
            return "D^b(pt)"
        return f"D^b(Hilb^{self.a}(S) x Hilb^{self.b}(S))"

    def to_json(self) -> dict:
        if self.kind == "hilb":
            return {"hilb": [self.a, self.b]}
        if self.kind == "endpoint":
            return {"endpoint": self.label}
        return {"exceptional_point": True}

    @classmethod
    def from_json(cls, d: dict) -> SODFactor:
        if "hilb" in d:
            a, b = d["hilb"]
            return cls("hilb", int(a), int(b))
        if "endpoint" in d:
            return cls("endpoint", label=str(d["endpoint"]))
        return cls("exceptional_point")


def hilb(a: int, b: int) -> SODFactor:
    return SODFactor("hilb", a, b)


@dataclass(frozen=True)
class CrossingSOD:
    """One crossing.  ``members`` holds every (record, numerology) on the wall."""

    wall: WallRecord
    numerology: Numerology
    direction: str
    factors: tuple[SODFactor, ...]
    members: tuple[tuple[WallRecord, Numerology], ...] = field(default=())

    @property
    def multi_xi(self) -> bool:
        return len(self.members) > 1

    def to_json(self) -> dict:
        d = self.wall.to_json(self.multi_xi)
        d["direction"] = self.direction
        d["numerology"] = self.numerology.to_json()
        d["factors"] = [f.to_json() for f in self.factors]
        if self.multi_xi:
            d["members"] = [
                {"wall": r.to_json(True), "numerology": n.to_json()} for r, n in self.members
            ]
        return d

    @classmethod
    def from_json(cls, d: dict) -> CrossingSOD:
        wall = WallRecord.from_json(d)
        numerology = Numerology.from_json(d["numerology"])
        if "members" in d:
            members = tuple(
                (WallRecord.from_json(m["wall"]), Numerology.from_json(m["numerology"]))
                for m in d["members"]
            )
        else:
            members = ((wall, numerology),)
        return cls(wall, numerology, d["direction"],
                   tuple(SODFactor.from_json(f) for f in d["factors"]), members)


@dataclass(frozen=True)
class FlattenedSOD:
    """``D^b(M_target) = < factors..., D^b(M_endpoint) >``."""

    target: str
    endpoint: str
    factors: tuple[SODFactor, ...]
    equivalent: bool = False

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "endpoint": self.endpoint,
            "factors": [f.to_json() for f in self.factors],
            "equivalent": self.equivalent,
        }

    @classmethod
    def from_json(cls, d: dict) -> FlattenedSOD:
        return cls(d["target"], d["endpoint"],
                   tuple(SODFactor.from_json(f) for f in d["factors"]),
                   bool(d.get("equivalent", False)))


@dataclass(frozen=True)
class SODChain:
    crossings: tuple[CrossingSOD, ...]
    flattened: FlattenedSOD | None
    l_minus: tuple[int, ...] | None = None
    l_plus: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        d = {
            "crossings": [c.to_json() for c in self.crossings],
            "flattened": None if self.flattened is None else self.flattened.to_json(),
        }
        if self.l_minus is not None:
            d["endpoints"] = {"L-": list(self.l_minus), "L+": list(self.l_plus)}
        return d

    @classmethod
    def from_json(cls, d: dict) -> SODChain:
        ends = d.get("endpoints")
        return cls(
            tuple(CrossingSOD.from_json(c) for c in d["crossings"]),
            None if d["flattened"] is None else FlattenedSOD.from_json(d["flattened"]),
            None if ends is None else tuple(ends["L-"]),
            None if ends is None else tuple(ends["L+"]),
        )


def _block(num: Numerology) -> list[SODFactor]:
    return [
        hilb(l, num.l_xi - l)
        for l in range(num.l_xi, -1, -1)
        for _ in range(num.mu_xi)
    ]


def single_crossing_sod(s: SurfaceModel, c1, c2: int, wall: WallRecord | WallGroup) -> CrossingSOD:
    """Decomposition for one wall; a multi-xi group concatenates per-xi blocks."""
    records = wall.records if isinstance(wall, WallGroup) else (wall,)
    members = []
    for r in records:
        if anti_canonical_degree(s, r.xi) < 0:
            raise NumerologyError(f"wall xi={list(r.xi)} is not oriented (-K.xi < 0)")
        num = wall_numerology(s, c1, c2, r.xi)
        if num.xi != r.xi:
            # mu = 0 wall: keep the record's own sign
            num = Numerology(r.xi, num.l_xi, num.mu_xi,
                             DivisorClass((a + b) // 2 for a, b in zip(as_class(c1), r.xi)),
                             num.r_minus, num.r_plus)
        members.append((r, num))
    lead, lead_num = members[0]
    if all(n.mu_xi == 0 for _, n in members):
        direction, factors = "equivalence", ()
    else:
        direction = "grows" if lead.grows_toward_plus else "shrinks"
        factors = tuple(f for _, n in members for f in _block(n))
    return CrossingSOD(lead, lead_num, direction, factors, tuple(members))


def compose_chain(crossings: Sequence[CrossingSOD], l_minus=None, l_plus=None) -> SODChain:
    crossings = tuple(crossings)
    ts = [c.wall.t_star for c in crossings]
    if any(a >= b for a, b in zip(ts, ts[1:])):
        raise ValueError("crossings must be strictly sorted by t_star")
    dirs = {c.direction for c in crossings} - {"equivalence"}
    lm = None if l_minus is None else tuple(as_class(l_minus))
    lp = None if l_plus is None else tuple(as_class(l_plus))
    if not dirs:
        flat = FlattenedSOD("L+", "L-", (), equivalent=True)
    elif dirs == {"grows"}:
        # crossings nearest L+ are outermost
        blocks = [f for c in reversed(crossings) for f in c.factors]
        flat = FlattenedSOD("L+", "L-", tuple(blocks))
    elif dirs == {"shrinks"}:
        blocks = [f for c in crossings for f in c.factors]
        flat = FlattenedSOD("L-", "L+", tuple(blocks))
    else:
        flat = None
    return SODChain(crossings, flat, lm, lp)


def sod_chain(s: SurfaceModel, c1, c2: int, groups: Sequence[WallGroup], l_minus=None,
              l_plus=None) -> SODChain:
    return compose_chain([single_crossing_sod(s, c1, c2, g) for g in groups], l_minus, l_plus)


def _angle(factors: Sequence[SODFactor], tail: str) -> str:
    parts = [f.render() for f in factors] + [f"D^b(M_{{{tail}}})"]
    return "< " + ", ".join(parts) + " >"


def _xi_str(xi) -> str:
    return "(" + ",".join(str(c) for c in xi) + ")"


def render_sod(chain: SODChain, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(chain.to_json(), indent=2, sort_keys=True)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = []
    k = len(chain.crossings)
    for j, c in enumerate(chain.crossings, start=1):
        n = c.numerology
        before = "L-" if j == 1 else f"C_{j}"
        after = "L+" if j == k else f"C_{j + 1}"
        head = (
            f"crossing {j}: t*={format_fraction(c.wall.t_star)} xi={_xi_str(c.wall.xi)} "
            f"l={n.l_xi} mu={n.mu_xi} {c.direction}"
        )
        if c.multi_xi:
            head += " multi_xi=" + ";".join(_xi_str(r.xi) for r, _ in c.members)
        lines.append(head)
        if c.direction == "equivalence":
            lines.append(f"  D^b(M_{{{after}}}) ~ D^b(M_{{{before}}})")
        elif c.direction == "grows":
            lines.append(f"  D^b(M_{{{after}}}) = {_angle(c.factors, before)}")
        else:
            lines.append(f"  D^b(M_{{{before}}}) = {_angle(c.factors, after)}")
    f = chain.flattened
    if f is None:
        lines.append("flattened: none (crossings change direction)")
    elif f.equivalent:
        lines.append("flattened: D^b(M_{L+}) ~ D^b(M_{L-}) (equivalent categories)")
    else:
        lines.append(f"flattened: D^b(M_{{{f.target}}}) = {_angle(f.factors, f.endpoint)}")
    if chain.l_minus is not None:
        lines.append(f"endpoints: L-={_xi_str(chain.l_minus)} L+={_xi_str(chain.l_plus)}")
    return "\n".join(lines) + "\n"


def parse_sod_json(text: str) -> SODChain:
    return SODChain.from_json(json.loads(text))


def total_factor_count(chain: SODChain) -> int:
    return sum(len(c.factors) for c in chain.crossings)

