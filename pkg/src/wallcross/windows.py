"""Weight and window arithmetic for elementary wall crossings.

Weights are integers.  A stratum is described by its conormal weights (all
strictly negative) and the weights of its affine fibre coordinates (all
strictly positive).  Intervals are closed integer intervals ``(lo, hi)``;
``hi = lo - 1`` is the empty interval.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence


class WeightError(ValueError):
    pass


Interval = tuple[int, int]


@dataclass(frozen=True)
class StratumWeights:
    conormal: tuple[int, ...]
    fiber: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "conormal", tuple(int(w) for w in self.conormal))
        object.__setattr__(self, "fiber", tuple(int(w) for w in self.fiber))
        bad = [w for w in self.conormal if w >= 0]
        if bad:
            raise WeightError(f"conormal weights must be strictly negative, got {bad}")
        bad = [w for w in self.fiber if w <= 0]
        if bad:
            raise WeightError(f"fiber weights must be strictly positive, got {bad}")


@dataclass(frozen=True)
class WindowReport:
    t_minus: int
    t_plus: int
    d: int
    interval_minus: Interval
    interval_plus: Interval
    case: int
    upsilon_indices: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "t_minus": self.t_minus,
            "t_plus": self.t_plus,
            "d": self.d,
            "case": self.case,
            "windows": {"minus": list(self.interval_minus), "plus": list(self.interval_plus)},
            "upsilon_indices": list(self.upsilon_indices),
        }


def relative_canonical_weight(conormal: Sequence[int]) -> int:
    """Weight of the relative canonical sheaf: the sum of conormal weights."""
    return sum(StratumWeights(tuple(conormal)).conormal)


def window_interval(t: int, d: int) -> Interval:
    """The window ``[d, d - t - 1]`` holding exactly ``-t`` weights."""
    if t >= 0:
        raise WeightError(f"window needs t < 0, got {t}")
    return (d, d - t - 1)


def interval_size(iv: Interval) -> int:
    return max(0, iv[1] - iv[0] + 1)


def peel_window(t: int, interval: Interval) -> tuple[list[int], Interval]:
    """Strip the top weights off a window wider than ``-t`` weights.

    Each step splits off the top weight ``v`` as a complementary piece and
    leaves ``[u, v - 1]``; repeated until ``-t`` weights remain.
    """
    if t >= 0:
        raise WeightError(f"peeling needs t < 0, got {t}")
    u, v = interval
    if v - u < -t:
        raise WeightError(
            f"interval [{u}, {v}] has {v - u + 1} weights; peeling needs more than {-t}"
        )
    core_top = u - t - 1
    return list(range(v, core_top, -1)), (u, core_top)


def classify_crossing(minus: StratumWeights, plus: StratumWeights, d: int = 0) -> WindowReport:
    t_minus = relative_canonical_weight(minus.conormal)
    t_plus = relative_canonical_weight(plus.conormal)
    if t_plus < t_minus:
        case = 1
        indices = range(-t_minus + d, -t_plus + d)
    elif t_plus == t_minus:
        case, indices = 2, range(0)
    else:
        case = 3
        indices = range(-t_plus + d, -t_minus + d)
    return WindowReport(
        t_minus=t_minus,
        t_plus=t_plus,
        d=d,
        interval_minus=(d, d - t_minus - 1),
        interval_plus=(d, d - t_plus - 1),
        case=case,
        upsilon_indices=tuple(indices),
    )


def _sym_weights(weights: Sequence[int], degree: int) -> list[int]:
    return [sum(c) for c in combinations_with_replacement(weights, degree)]


def weight_series(w: StratumWeights, order: int) -> Counter:
    """Weights (with multiplicity) of ``Sym^s(N) (x) omega^-1 (x) Sym^k(fibre*)``.

    ``N`` has the negated conormal weights; ``omega^-1`` has weight ``-t``;
    ``0 <= s, k <= order``.  Degrees count monomials, not weighted degree.
    """
    if order < 0:
        raise WeightError("order must be non-negative")
    normal = [-c for c in w.conormal]
    twist = -relative_canonical_weight(w.conormal)
    normal_part = [x for s in range(order + 1) for x in _sym_weights(normal, s)]
    fiber_part = [y for k in range(order + 1) for y in _sym_weights(w.fiber, k)]
    return Counter(twist + x + y for x in normal_part for y in fiber_part)
