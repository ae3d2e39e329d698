import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import box_walls, ellipsoid_half_widths, hodge_matrix, pair, random_ample
from wallcross.exact import is_positive_definite
from wallcross.lattice import DivisorClass, surface_preset
from wallcross.walls import (
    EndpointOnWall,
    NonGenericSegment,
    WallError,
    WallGroup,
    WallRecord,
    WallSpec,
    crossing_parameter,
    enumerate_walls,
    group_and_sort,
    hodge_form,
    search_radius,
    short_vectors,
)

P1P1 = surface_preset("p1xp1")


def example_spec(lm=(1, 4), lp=(4, 1)):
    return WallSpec(P1P1, DivisorClass((5, 5)), 14, DivisorClass(lm), DivisorClass(lp))


def brute_short(gram, bound, box):
    return sorted(
        v for v in product(range(-box, box + 1), repeat=len(gram))
        if pair(gram, v, v) <= bound
    )


def test_short_vectors_unit_ball():
    assert short_vectors([[1, 0], [0, 1]], 1) == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
    assert len(short_vectors([[1, 0], [0, 1]], 2)) == 9


def test_short_vectors_a2():
    assert set(short_vectors([[2, 1], [1, 2]], 2)) == {
        (0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)
    }


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(-3, 3), st.integers(1, 4), st.integers(0, 12))
def test_short_vectors_match_box_search(a, b, c, bound):
    gram = [[a * a, a * b], [a * b, b * b + c * c]]  # B^T B, positive definite
    # the smallest eigenvalue is at least det / trace, so this box is enough
    tr, det = gram[0][0] + gram[1][1], gram[0][0] * gram[1][1] - gram[0][1] ** 2
    box = int((bound * tr / det) ** 0.5) + 1
    assert short_vectors(gram, bound) == brute_short(gram, bound, box)


def test_short_vectors_rejects_indefinite():
    with pytest.raises(ValueError):
        short_vectors([[0, 1], [1, 0]], 3)


def test_example_walls():
    walls = enumerate_walls(example_spec())
    assert [tuple(w.xi) for w in walls] == [(-1, 3), (-1, 1), (3, -1)]
    assert [w.t_star for w in walls] == [Fraction(1, 12), Fraction(1, 2), Fraction(11, 12)]
    assert [w.xi_sq for w in walls] == [-6, -2, -6]
    assert [w.grows_toward_plus for w in walls] == [True, True, False]


def test_example_walls_match_wide_box():
    # the box |p|, |q| <= 4 c2 certainly contains every wall of the example
    s = P1P1
    found = box_walls(s.gram, s.canonical, (5, 5), 14, (1, 4), (4, 1), [56, 56])
    walls = enumerate_walls(example_spec())
    assert found == {tuple(w.xi): w.t_star for w in walls}


def test_crossing_parameter_examples():
    assert crossing_parameter(P1P1, (-1, 1), (1, 4), (4, 1)) == Fraction(1, 2)
    assert crossing_parameter(P1P1, (-1, 3), (1, 4), (4, 1)) == Fraction(1, 12)
    with pytest.raises(WallError):
        crossing_parameter(P1P1, (1, 1), (1, 4), (4, 1))


def test_symmetric_crossing_is_midpoint():
    # L_-.xi = -L_+.xi puts the crossing at t = 1/2
    assert crossing_parameter(P1P1, (1, -1), (2, 3), (3, 2)) == Fraction(1, 2)


def test_empty_cases():
    p2 = surface_preset("p2")
    assert enumerate_walls(WallSpec(p2, DivisorClass((1,)), 5, DivisorClass((1,)), DivisorClass((3,)))) == []
    assert enumerate_walls(WallSpec(P1P1, DivisorClass((0, 0)), 0, DivisorClass((1, 2)), DivisorClass((2, 1)))) == []


def test_endpoint_on_wall():
    with pytest.raises(EndpointOnWall):
        enumerate_walls(example_spec(lm=(1, 3)))


def test_non_ample_endpoint():
    with pytest.raises(WallError):
        example_spec(lm=(0, 1))


def test_group_and_sort_example():
    groups = group_and_sort(enumerate_walls(example_spec()))
    assert [tuple(g.records[0].xi) for g in groups] == [(-1, 3), (-1, 1), (3, -1)]
    assert not any(g.multi_xi for g in groups)
    assert group_and_sort([]) == []


def test_group_and_sort_multi_xi():
    a = WallRecord(DivisorClass((1, -1)), Fraction(1, 2), -2, True)
    b = WallRecord(DivisorClass((3, -3)), Fraction(1, 2), -18, True)
    (g,) = group_and_sort([a, b])
    assert g.multi_xi
    assert [r.xi_sq for r in g.records] == [-18, -2]


def test_group_and_sort_non_generic():
    a = WallRecord(DivisorClass((1, -1)), Fraction(1, 2), -2, True)
    b = WallRecord(DivisorClass((3, -1)), Fraction(1, 2), -6, True)
    with pytest.raises(NonGenericSegment):
        group_and_sort([a, b])


def test_multi_xi_walls_are_found_together():
    # c1 = (1,1): xi = (1,-1) and 3 xi = (3,-3) are both congruent to c1
    spec = WallSpec(P1P1, DivisorClass((1, 1)), 10, DivisorClass((1, 2)), DivisorClass((2, 1)))
    groups = group_and_sort(enumerate_walls(spec))
    (g,) = [g for g in groups if g.t_star == Fraction(1, 2)]
    assert g.multi_xi
    # mu = 0, so the sign is fixed by L_+.xi > 0
    assert [tuple(r.xi) for r in g.records] == [(-3, 3), (-1, 1)]


def test_hodge_form_positive_definite():
    for name in ("p1xp1", "hirzebruch:1", "hirzebruch:3"):
        s = surface_preset(name)
        rng = random.Random(name)
        for _ in range(20):
            a = DivisorClass(random_ample(rng, name))
            g = hodge_form(s, a)
            assert g == hodge_matrix(s.gram, a)
            assert is_positive_definite(g)


def random_instance(rng):
    name = rng.choice(["p1xp1", "hirzebruch:0", "hirzebruch:1", "hirzebruch:2", "hirzebruch:3"])
    s = surface_preset(name)
    c1 = (rng.randint(-7, 7), rng.randint(-7, 7))
    c2 = rng.randint(1, 20)
    while True:
        lm, lp = random_ample(rng, name), random_ample(rng, name)
        if lm != lp:
            break
    return s, c1, c2, lm, lp


def enumerate_or_none(s, c1, c2, lm, lp):
    try:
        return enumerate_walls(WallSpec(s, DivisorClass(c1), c2, DivisorClass(lm), DivisorClass(lp)))
    except (EndpointOnWall, NonGenericSegment):
        return None


def test_enumeration_matches_box_oracle():
    rng = random.Random(2024)
    checked = 0
    while checked < 40:
        s, c1, c2, lm, lp = random_instance(rng)
        walls = enumerate_or_none(s, c1, c2, lm, lp)
        if walls is None:
            continue
        spec = WallSpec(s, DivisorClass(c1), c2, DivisorClass(lm), DivisorClass(lp))
        bound = max(search_radius(spec), 0)
        a = tuple(x + y for x, y in zip(lm, lp))
        widths = ellipsoid_half_widths(s.gram, a, bound)
        expected = box_walls(s.gram, s.canonical, c1, c2, lm, lp, widths)
        assert {tuple(w.xi): w.t_star for w in walls} == expected
        checked += 1


def test_radius_is_sound():
    # every wall found in a generous box satisfies g_A(xi) <= B
    rng = random.Random(7)
    for _ in range(15):
        s, c1, c2, lm, lp = random_instance(rng)
        if enumerate_or_none(s, c1, c2, lm, lp) is None:
            continue
        spec = WallSpec(s, DivisorClass(c1), c2, DivisorClass(lm), DivisorClass(lp))
        a = tuple(x + y for x, y in zip(lm, lp))
        g = hodge_matrix(s.gram, a)
        for xi in box_walls(s.gram, s.canonical, c1, c2, lm, lp, [30, 30]):
            assert pair(g, xi, xi) <= search_radius(spec)


def test_swapping_endpoints():
    rng = random.Random(11)
    for _ in range(30):
        s, c1, c2, lm, lp = random_instance(rng)
        fwd = enumerate_or_none(s, c1, c2, lm, lp)
        if fwd is None:
            continue
        back = enumerate_or_none(s, c1, c2, lp, lm)
        assert len(fwd) == len(back)
        unsigned = {(frozenset({tuple(w.xi), tuple(-w.xi)}), 1 - w.t_star): w for w in back}
        for w in fwd:
            other = unsigned[(frozenset({tuple(w.xi), tuple(-w.xi)}), w.t_star)]
            if pair(s.gram, [-k for k in s.canonical], w.xi) > 0:
                assert tuple(other.xi) == tuple(w.xi)
                assert other.grows_toward_plus != w.grows_toward_plus


def test_wall_record_json():
    for w in enumerate_walls(example_spec()):
        assert WallRecord.from_json(w.to_json()) == w
    assert enumerate_walls(example_spec())[2].to_json() == {
        "xi": [3, -1], "t_star": "11/12", "xi_sq": -6, "multi_xi": False, "grows_toward_plus": False
    }


def test_wall_group_flag():
    r = enumerate_walls(example_spec())[0]
    assert not WallGroup(r.t_star, (r,)).multi_xi
