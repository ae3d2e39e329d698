"""Neron-Severi lattices of rational surfaces with exact intersection forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .exact import signature as form_signature


class LatticeError(ValueError):
    """Invalid surface data or a malformed divisor class."""


class AmplenessUnknown(LatticeError):
    """Ampleness of a class on a custom surface cannot be decided."""


@dataclass(frozen=True)
class DivisorClass:
    """Integer coordinates of a divisor class in the surface's fixed basis."""

    coords: tuple[int, ...]

    def __init__(self, coords: Iterable[int]):
        coords = tuple(coords)
        for c in coords:
            if isinstance(c, bool) or int(c) != c:
                raise LatticeError(f"non-integer coordinate {c!r}")
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _check_len(self, other)
        return DivisorClass(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _check_len(self, other)
        return DivisorClass(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-a for a in self.coords)

    def __rmul__(self, k: int) -> DivisorClass:
        return DivisorClass(k * a for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self) -> str:
        return f"DivisorClass({list(self.coords)})"


def _check_len(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise LatticeError(f"dimension mismatch: {len(a)} vs {len(b)}")


def as_class(d) -> DivisorClass:
    return d if isinstance(d, DivisorClass) else DivisorClass(d)


@dataclass(frozen=True)
class SurfaceModel:
    """Picard lattice with intersection form and canonical class.

    ``ample_oracle`` is ``"p2"``, ``"p1xp1"``, ``"hirzebruch:n"`` for presets
    and ``"asserted"`` for custom lattices, which only know the classes in
    ``ample_classes``.
    """

    rank: int
    gram: tuple[tuple[int, ...], ...]
    canonical: DivisorClass
    ample_oracle: str
    ample_classes: tuple[DivisorClass, ...] = field(default=())

    def __post_init__(self):
        if self.rank < 1:
            raise LatticeError("rank must be positive")
        if len(self.gram) != self.rank or any(len(r) != self.rank for r in self.gram):
            raise LatticeError("gram must be rank x rank")
        for i in range(self.rank):
            for j in range(self.rank):
                if self.gram[i][j] != self.gram[j][i]:
                    raise LatticeError("gram is not symmetric")
        if len(self.canonical) != self.rank:
            raise LatticeError("canonical class has wrong length")
        pos, neg, zero = form_signature(self.gram)
        if (pos, neg, zero) != (1, self.rank - 1, 0):
            raise LatticeError(
                f"gram has signature ({pos}, {neg}) with {zero} zero pivots; "
                f"expected (1, {self.rank - 1})"
            )
        for a in self.ample_classes:
            if len(a) != self.rank:
                raise LatticeError("ample class has wrong length")

    @property
    def is_preset(self) -> bool:
        return self.ample_oracle != "asserted"

    def to_json(self) -> dict:
        if self.is_preset:
            return {"preset": self.ample_oracle}
        return {
            "custom": {
                "rank": self.rank,
                "gram": [list(r) for r in self.gram],
                "canonical": list(self.canonical),
                "ample_classes": [list(a) for a in self.ample_classes],
            }
        }


def surface_preset(name: str) -> SurfaceModel:
    name = name.strip().lower()
    if name == "p2":
        return SurfaceModel(1, ((1,),), DivisorClass([-3]), "p2")
    if name == "p1xp1":
        return SurfaceModel(2, ((0, 1), (1, 0)), DivisorClass([-2, -2]), "p1xp1")
    if name.startswith("hirzebruch:"):
        try:
            n = int(name.split(":", 1)[1])
        except ValueError:
            raise LatticeError(f"bad Hirzebruch index in {name!r}") from None
        if n < 0:
            raise LatticeError("Hirzebruch index must be >= 0")
        # basis (e, f): e the negative section, f a fiber
        return SurfaceModel(
            2, ((-n, 1), (1, 0)), DivisorClass([-2, -(n + 2)]), f"hirzebruch:{n}"
        )
    raise LatticeError(f"unknown preset {name!r}")


def custom_surface(gram, canonical, ample_classes=()) -> SurfaceModel:
    gram = tuple(tuple(int(x) for x in row) for row in gram)
    return SurfaceModel(
        len(gram),
        gram,
        DivisorClass(canonical),
        "asserted",
        tuple(DivisorClass(a) for a in ample_classes),
    )


def surface_from_json(data: dict) -> SurfaceModel:
    if "preset" in data:
        return surface_preset(str(data["preset"]))
    if "custom" in data:
        c = data["custom"]
        try:
            s = custom_surface(c["gram"], c["canonical"], c.get("ample_classes", []))
        except KeyError as e:
            raise LatticeError(f"custom surface missing key {e}") from None
        if "rank" in c and c["rank"] != s.rank:
            raise LatticeError("declared rank does not match gram")
        return s
    raise LatticeError("surface JSON needs a 'preset' or 'custom' key")


def load_surface(spec: str) -> SurfaceModel:
    """Preset name, or path to a surface JSON file."""
    p = Path(spec)
    if p.suffix == ".json" or p.exists():
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise LatticeError(f"cannot read surface file {spec}: {e}") from None
        return surface_from_json(data)
    return surface_preset(spec)


def intersect(s: SurfaceModel, d1, d2) -> int:
    d1, d2 = as_class(d1), as_class(d2)
    if len(d1) != s.rank or len(d2) != s.rank:
        raise LatticeError(
            f"dimension mismatch: surface rank {s.rank}, classes {len(d1)} and {len(d2)}"
        )
    return sum(
        d1[i] * s.gram[i][j] * d2[j] for i in range(s.rank) for j in range(s.rank)
    )


def self_intersection(s: SurfaceModel, d) -> int:
    return intersect(s, d, d)


def anti_canonical_degree(s: SurfaceModel, d) -> int:
    return intersect(s, -s.canonical, d)


def is_ample(s: SurfaceModel, d) -> bool:
    d = as_class(d)
    if len(d) != s.rank:
        raise LatticeError(f"dimension mismatch: surface rank {s.rank}, class {len(d)}")
    tag = s.ample_oracle
    if tag == "p2":
        return d[0] > 0
    if tag == "p1xp1":
        return d[0] > 0 and d[1] > 0
    if tag.startswith("hirzebruch:"):
        n = int(tag.split(":", 1)[1])
        a, b = d
        return a > 0 and b > n * a
    if d in s.ample_classes:
        return True
    raise AmplenessUnknown(f"cannot certify ampleness of {list(d)} on a custom surface")
