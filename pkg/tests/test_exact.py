from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, strategies as st

from wallcross.exact import (
    format_fraction,
    floor_sqrt,
    inverse,
    is_positive_definite,
    ldl,
    matmul,
    nullspace,
    parse_fraction,
    rank,
    signature,
    to_fraction_matrix,
)

small = st.integers(-6, 6)


def sym3():
    return st.tuples(small, small, small, small, small, small).map(
        lambda t: [[t[0], t[1], t[2]], [t[1], t[3], t[4]], [t[2], t[4], t[5]]]
    )


def det(m):
    if len(m) == 1:
        return Fraction(m[0][0])
    return sum(
        (-1) ** j * m[0][j] * det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m))
    )


@given(sym3())
def test_signature_matches_jacobi_minors(g):
    minors = [Fraction(1)] + [det([row[:k] for row in g[:k]]) for k in (1, 2, 3)]
    if any(m == 0 for m in minors):
        return
    # sign changes in the sequence of leading minors count negative eigenvalues
    neg = sum(1 for a, b in zip(minors, minors[1:]) if a * b < 0)
    assert signature(g) == (3 - neg, neg, 0)


@given(sym3())
def test_ldl_reconstructs(g):
    try:
        lower, d = ldl(g)
    except ZeroDivisionError:
        return
    n = len(g)
    rebuilt = [[sum(lower[i][k] * d[k] * lower[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    assert rebuilt == to_fraction_matrix(g)


def test_signature_handles_zero_pivots():
    assert signature([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature([[0, 0], [0, 0]]) == (0, 0, 2)
    assert signature([[1, 1], [1, 1]]) == (1, 0, 1)


def test_positive_definite():
    assert is_positive_definite([[2, 1], [1, 2]])
    assert not is_positive_definite([[1, 2], [2, 1]])


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    m = to_fraction_matrix(rows)
    ns = nullspace(m, 3)
    assert rank(m, 3) + len(ns) == 3
    for v in ns:
        assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in m)


def test_inverse():
    a = to_fraction_matrix([[2, 1], [1, 1]])
    assert matmul(a, inverse(a)) == to_fraction_matrix([[1, 0], [0, 1]])
    with pytest.raises(ZeroDivisionError):
        inverse(to_fraction_matrix([[1, 2], [2, 4]]))


def test_matmul_with_empty_factor_keeps_shape():
    assert matmul([[], []], [], inner=0, cols=3) == [[0, 0, 0], [0, 0, 0]]


@given(st.integers(0, 10**6), st.integers(1, 50))
def test_floor_sqrt(num, den):
    q = Fraction(num, den)
    k = floor_sqrt(q)
    assert k * k <= q < (k + 1) ** 2
    if den == 1:
        assert k == isqrt(num)


def test_fraction_text_round_trip():
    assert format_fraction(Fraction(11, 12)) == "11/12"
    assert format_fraction(Fraction(4, 2)) == "2"
    assert parse_fraction("-3/9") == Fraction(-1, 3)
