"""Randomized property checks for the graded-module engine."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import rank
from .graded import (
    FixedLocusMap,
    TruncatedGradedModule,
    cokernel_weight_dims,
    forget_lower_bound,
    kernel_weight_dims,
    koszul_euler_rhs,
    koszul_tor,
    module_to_json,
    restrict_to_fixed,
    truncate_ge,
    validate_module,
    weight_component,
)
from .presentations import random_module


@dataclass
class Check:
    name: str
    checked: int = 0
    failed: int = 0
    example: str | None = None
    gating: bool = True

    def record(self, ok: bool, example=None) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if self.example is None and example is not None:
                self.example = example() if callable(example) else str(example)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def line(self) -> str:
        status = "PASS" if self.passed else ("FAIL" if self.gating else "NOTE")
        s = f"{status} {self.name}: {self.checked - self.failed}/{self.checked}"
        if self.example:
            s += f"\n     first counterexample: {self.example}"
        return s


@dataclass
class SelftestReport:
    seed: int
    iters: int
    checks: dict[str, Check] = field(default_factory=dict)

    def check(self, name: str, gating: bool = True) -> Check:
        return self.checks.setdefault(name, Check(name, gating=gating))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values() if c.gating)

    def render(self) -> str:
        lines = [f"seed={self.seed} iters={self.iters}"]
        lines += [c.line() for c in self.checks.values()]
        if any(not c.gating and not c.passed for c in self.checks.values()):
            lines.append("NOTE lines are reported for information and do not affect the exit status")
        lines.append("OK" if self.passed else "FAILED")
        return "\n".join(lines) + "\n"


def _show(m: TruncatedGradedModule, **extra) -> str:
    d = module_to_json(m)
    d.update(extra)
    return json.dumps(d, separators=(",", ":"))


def _hull(ws) -> tuple[int, int] | None:
    ws = list(ws)
    return (min(ws), max(ws)) if ws else None


def check_truncation(report: SelftestReport, m: TruncatedGradedModule, rng: random.Random) -> None:
    a = rng.randint(m.a_min - 1, m.a_max + 1)
    b = rng.randint(m.a_min - 1, m.a_max + 1)
    ta = truncate_ge(m, a)
    report.check("truncation idempotent").record(
        truncate_ge(ta, a) == ta, lambda: _show(m, a=a))
    report.check("truncation composes to max").record(
        truncate_ge(ta, b) == truncate_ge(m, max(a, b)), lambda: _show(m, a=a, b=b))

    tor_m = koszul_tor(m)
    tor_t = koszul_tor(ta)
    weights_m = tor_m.weights()

    if all(w >= a for w in weights_m):
        report.check("weights in [a, inf) => truncation is the identity").record(
            ta.same_module(m), lambda: _show(m, a=a))

    # The lemma as stated: Tor of M and of M_{>=a} read on the range that is
    # certified without assuming anything below the window.
    open_m = koszul_tor(forget_lower_bound(m))
    open_t = koszul_tor(forget_lower_bound(ta))
    lemma_cases = [("truncation lemma: Tor(M) in I => Tor(M_{>=a}) in I cap [a, inf)", open_m, open_t, True),
                   ("same lemma with weights below the window taken as zero", tor_m, tor_t, False)]
    for name, before, after, gating in lemma_cases:
        hull = _hull(before.weights())
        if hull is None:
            continue
        lo = hull[0] - rng.randint(0, 2)
        hi = hull[1] + rng.randint(0, 2)
        target_lo = max(lo, a)
        ok = all(target_lo <= w <= hi for w in after.weights())
        report.check(name, gating).record(
            ok, lambda: _show(m, a=a, I=[lo, hi], tor_truncated=sorted(map(list, after.entries))))

    report.check("Tor of M_{>=a} has weights >= a").record(
        all(w >= a for w in tor_t.weights()), lambda: _show(m, a=a))
    far = a + sum(m.var_weights)
    lo_t, hi_t = tor_t.safe_window
    agree = all(
        tor_t.get(p, w) == tor_m.get(p, w)
        for w in range(max(far, lo_t), hi_t + 1)
        for p in range(m.n + 1)
    )
    report.check("Tor of M_{>=a} equals Tor of M in weights >= a + sum(w)").record(
        agree, lambda: _show(m, a=a))


def check_koszul(report: SelftestReport, m: TruncatedGradedModule) -> None:
    table = koszul_tor(m)
    lo, hi = table.safe_window
    ok = all(
        sum((-1) ** p * table.get(p, w) for p in range(m.n + 1)) == koszul_euler_rhs(m, w)
        for w in range(lo, hi + 1)
    )
    report.check("Koszul Euler identity").record(ok, lambda: _show(m))
    fixed = restrict_to_fixed(m)
    ok = all(d is None or d == table.get(0, w) for w, d in fixed.items() if lo <= w <= hi)
    report.check("restriction to fixed locus equals Tor_0").record(ok, lambda: _show(m))
    report.check("Tor vanishes above the Koszul length").record(
        all(p <= m.n for p, _ in table.entries), lambda: _show(m))


def random_fixed_map(rng: random.Random) -> FixedLocusMap:
    lo = rng.randint(-3, 3)
    hi = lo + rng.randint(0, 7)

    def comps():
        return {w: rng.randint(0, 4) for w in range(lo, hi + 1)}

    src = TruncatedGradedModule((), (lo, hi), comps())
    dst = TruncatedGradedModule((), (lo, hi), comps())
    blocks = {}
    for w in range(lo, hi + 1):
        r, c = dst.components.get(w, 0), src.components.get(w, 0)
        if r and c:
            blocks[w] = [[Fraction(rng.choice([0, 0, 1, -1, 2])) for _ in range(c)] for _ in range(r)]
    return FixedLocusMap(src, dst, blocks)


def check_fixed_exactness(report: SelftestReport, rng: random.Random) -> None:
    f = random_fixed_map(rng)
    ker = kernel_weight_dims(f)
    coker = cokernel_weight_dims(f)
    ok = True
    for w, c in f.source.components.items():
        blk = f.block(w)
        r = rank(blk, c) if blk else 0
        ok &= ker[w] == c - r
    for w, d in f.target.components.items():
        blk = f.block(w)
        r = rank(blk, f.source.components.get(w, 0)) if blk and f.source.components.get(w) else 0
        ok &= coker[w] == d - r
    big = f.total_matrix()
    total_rank = rank(big, f.source.total_dim()) if big and f.source.total_dim() else 0
    ok &= sum(ker.values()) == f.source.total_dim() - total_rank
    ok &= sum(coker.values()) == f.target.total_dim() - total_rank
    ok &= sum(weight_component(f.source, w).dim for w in f.source.components) == f.source.total_dim()
    report.check("weight components are exact on the fixed locus").record(
        ok, lambda: json.dumps({"source": f.source.components, "target": f.target.components}))


def run_selftest(seed: int = 0, iters: int = 1000) -> SelftestReport:
    rng = random.Random(seed)
    report = SelftestReport(seed, iters)
    for _ in range(iters):
        m = random_module(rng)
        report.check("random module is valid").record(not validate_module(m), lambda: _show(m))
        check_truncation(report, m, rng)
        check_koszul(report, m)
        check_fixed_exactness(report, rng)
    return report
