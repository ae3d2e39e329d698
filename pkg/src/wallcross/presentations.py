"""Truncated modules from generators and homogeneous relations.

``M = F / R`` with ``F = sum_g k[x](-c_g)`` free on generators of weight
``c_g`` and ``R`` the submodule generated by the relations.  Each weight
``w`` of the window is computed by row-reducing the relations' multiples in
``F_w``; the non-pivot monomials form the basis of ``M_w``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import rref
from .graded import TruncatedGradedModule

Monomial = tuple[int, ...]
# relation: (weight, {generator index: {monomial: coefficient}})
Relation = tuple[int, dict[int, dict[Monomial, Fraction]]]


@lru_cache(maxsize=None)
def monomials(var_weights: tuple[int, ...], weight: int) -> tuple[Monomial, ...]:
    """Exponent vectors of the given weighted degree, in lex order."""
    if weight < 0:
        return ()
    if not var_weights:
        return ((),) if weight == 0 else ()
    w0, rest = var_weights[0], var_weights[1:]
    out = []
    for e in range(weight // w0, -1, -1):
        for tail in monomials(rest, weight - e * w0):
            out.append((e,) + tail)
    return tuple(out)


def _mul(m: Monomial, i: int) -> Monomial:
    return m[:i] + (m[i] + 1,) + m[i + 1:]


def _add(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class _Weight:
    """Free module basis, relation span and quotient basis in one weight."""

    def __init__(self, var_weights, gens, relations, w):
        self.basis = [(g, mono) for g, c in enumerate(gens) for mono in monomials(var_weights, w - c)]
        self.index = {b: k for k, b in enumerate(self.basis)}
        rows = []
        for rw, poly in relations:
            for shift in monomials(var_weights, w - rw):
                v = [Fraction(0)] * len(self.basis)
                for g, terms in poly.items():
                    for mono, coeff in terms.items():
                        v[self.index[(g, _add(mono, shift))]] += coeff
                if any(v):
                    rows.append(v)
        self.red, self.pivots = rref(rows, len(self.basis)) if rows else ([], [])
        pivot_set = set(self.pivots)
        self.quotient = [k for k in range(len(self.basis)) if k not in pivot_set]

    def reduce(self, v: list[Fraction]) -> list[Fraction]:
        """Coordinates of ``v`` in the quotient basis."""
        v = list(v)
        for row, p in zip(self.red, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return [v[k] for k in self.quotient]


def module_from_presentation(
    var_weights: Sequence[int],
    gen_weights: Sequence[int],
    relations: Sequence[Relation],
    window: tuple[int, int],
) -> TruncatedGradedModule:
    vw = tuple(var_weights)
    lo, hi = window
    if gen_weights and min(gen_weights) < lo:
        raise ValueError("generators must lie in the window (the module is bounded below)")
    per = {w: _Weight(vw, list(gen_weights), relations, w) for w in range(lo, hi + 1)}
    comps = {w: len(d.quotient) for w, d in per.items()}
    actions: dict[int, dict[int, list]] = {}
    for i, wi in enumerate(vw):
        for a in range(lo, hi - wi + 1):
            src, dst = per[a], per[a + wi]
            if not src.quotient or not dst.quotient:
                continue
            cols = []
            for k in src.quotient:
                g, mono = src.basis[k]
                v = [Fraction(0)] * len(dst.basis)
                v[dst.index[(g, _mul(mono, i))]] = Fraction(1)
                cols.append(dst.reduce(v))
            actions.setdefault(i, {})[a] = [list(r) for r in zip(*cols)]
    return TruncatedGradedModule(vw, (lo, hi), comps, actions)


def random_relation(rng: random.Random, vw: tuple[int, ...], gens: Sequence[int], weight: int,
                    max_terms: int = 3) -> Relation:
    poly: dict[int, dict[Monomial, Fraction]] = {}
    for g, c in enumerate(gens):
        monos = monomials(vw, weight - c)
        if not monos:
            continue
        for mono in rng.sample(monos, min(len(monos), rng.randint(0, max_terms))):
            coeff = Fraction(rng.choice([-2, -1, 1, 1, 2, 3]))
            poly.setdefault(g, {})[mono] = coeff
    return weight, poly


def random_module(rng: random.Random, max_vars: int = 3, max_width: int = 8,
                  max_dim: int = 4) -> TruncatedGradedModule:
    """Random valid module: ``n <= max_vars``, at most ``max_width`` weights,
    every component of dimension ``<= max_dim``.

    Relations are added at overfull weights until every component fits.
    """
    n = rng.randint(1, max_vars)
    vw = tuple(rng.randint(1, 3) for _ in range(n))
    lo = rng.randint(-3, 3)
    hi = lo + rng.randint(0, max_width - 1)
    gens = sorted(rng.randint(lo, min(hi, lo + 3)) for _ in range(rng.randint(1, 2)))
    relations: list[Relation] = []
    for _ in range(rng.randint(0, 3)):
        relations.append(random_relation(rng, vw, gens, rng.randint(gens[0], hi + 1)))
    while True:
        m = module_from_presentation(vw, gens, relations, (lo, hi))
        over = [w for w, d in sorted(m.components.items()) if d > max_dim]
        if not over:
            return m
        w = over[0]
        relations.append(random_relation(rng, vw, gens, w, max_terms=4))
