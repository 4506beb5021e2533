from __future__ import annotations

import itertools
from fractions import Fraction as Q

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mixlab.errors import WorkBoundExceeded
from mixlab.ratfunc import FpPoly, RatFunc, frobenius_orbit
from mixlab.sunit import (
    SUnitEquation,
    SUnitGroup,
    classify_degeneracy,
    degenerate_family_count,
    enumerate_solutions,
    integer_solve,
    membership,
    naive_solutions,
)
from mixlab.text import parse_ratfunc

G23 = SUnitGroup((2, 3))
XY = SUnitEquation((1, 1))


def box_values(gens, height, allow_sign=False) -> set[Q]:
    """Every product of generator powers with exponents in [-height, height]."""
    out = set()
    for e in itertools.product(range(-height, height + 1), repeat=len(gens)):
        x = Q(1)
        for g, k in zip(gens, e):
            x *= Q(g) ** k
        out.add(x)
        if allow_sign:
            out.add(-x)
    return out


def oracle_solutions(coeffs, gens, height, allow_sign=False) -> set[tuple[Q, ...]]:
    vals = sorted(box_values(gens, height, allow_sign))
    return {
        t for t in itertools.product(vals, repeat=len(coeffs)) if sum(Q(a) * x for a, x in zip(coeffs, t)) == 1
    }


def vanishing_subsets(coeffs, values) -> set[tuple[int, ...]]:
    idx = range(len(coeffs))
    zero = [
        J
        for r in range(1, len(coeffs))
        for J in itertools.combinations(idx, r)
        if sum(Q(coeffs[i]) * values[i] for i in J) == 0
    ]
    return {J for J in zero if not any(set(K) < set(J) for K in zero)}


# -- membership -------------------------------------------------------------------------


def test_membership_examples():
    assert membership(G23, Q(12)) == ((2, 1), 1)
    assert membership(G23, Q(5)) is None
    assert membership(G23, Q(-12)) is None
    assert membership(SUnitGroup((2, 3), allow_sign=True), Q(-12)) == ((2, 1), -1)
    assert membership(SUnitGroup((6, 10)), Q(360)) == ((2, 1), 1)
    assert membership(G23, Q(1, 18)) == ((-1, -2), 1)
    assert membership(SUnitGroup((6, 10)), Q(2)) is None


def test_membership_dependent_generators():
    g = SUnitGroup((2, 4, 3))
    assert not g.independent() and G23.independent()
    e, s = membership(g, Q(32))
    assert g.element(e, s) == 32
    assert max(abs(x) for x in e) == 2
    assert membership(g, Q(5)) is None


def test_membership_negative_generators():
    g = SUnitGroup((-2, 3))
    assert membership(g, Q(-2)) == ((1, 0), 1)
    assert membership(g, Q(4)) == ((2, 0), 1)
    assert membership(g, Q(-4)) is None


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.sampled_from([2, 3, 5, 6, 10, Q(1, 2), Q(3, 5), -3]), min_size=1, max_size=3),
    st.lists(st.integers(-4, 4), min_size=3, max_size=3),
    st.booleans(),
)
def test_membership_reconstructs(gens, exps, allow_sign):
    g = SUnitGroup(tuple(gens), allow_sign=allow_sign)
    x = g.element(exps[: g.rank])
    found = membership(g, x)
    assert found is not None
    assert g.element(*found) == x
    if allow_sign:
        assert g.element(*membership(g, -x)) == -x


def test_integer_solve():
    assert integer_solve([[2, 0], [0, 3]], [4, 6]) == ([2, 2], [])
    assert integer_solve([[2]], [3]) is None
    part, kernel = integer_solve([[1, 2]], [4])
    assert part[0] + 2 * part[1] == 4 and len(kernel) == 1


# -- enumeration ------------------------------------------------------------------------


def test_enumerate_examples():
    h1 = enumerate_solutions(XY, G23, 1)
    assert len(h1) == 3
    assert {s.values for s in h1} == {(Q(1, 2), Q(1, 2)), (Q(1, 3), Q(2, 3)), (Q(2, 3), Q(1, 3))}
    h2 = {s.values for s in enumerate_solutions(XY, G23, 2)}
    assert h2 == {(Q(1, 2), Q(1, 2)), (Q(1, 3), Q(2, 3)), (Q(2, 3), Q(1, 3)), (Q(1, 4), Q(3, 4)), (Q(3, 4), Q(1, 4))}
    signed = enumerate_solutions(XY, SUnitGroup((2, 3), allow_sign=True), 2)
    assert len(signed) == 15
    assert {s.values for s in signed} == oracle_solutions((1, 1), (2, 3), 2, True)
    for s in signed:
        g = SUnitGroup((2, 3), allow_sign=True)
        for x, e, sign in zip(s.values, s.exponents, s.signs):
            assert g.element(e, sign) == x and max(map(abs, e)) <= 2


def test_equation_validation():
    with pytest.raises(ValueError):
        SUnitEquation((1,))
    with pytest.raises(ValueError):
        SUnitEquation((1, 0))
    with pytest.raises(ValueError):
        SUnitGroup(())
    with pytest.raises(WorkBoundExceeded):
        enumerate_solutions(SUnitEquation((1, 1, 1)), G23, 6, max_work=1000)


@pytest.mark.parametrize("coeffs,gens", [
    ((1, 1), (2, 3)),
    ((1, 1), (2, 3, 5)),
    ((1, -1), (2, 3)),
    ((2, 3), (2, 3)),
    ((1, 1, -1), (2, 3)),
    ((1, 1), (Q(1, 2), 6)),
])
@pytest.mark.parametrize("allow_sign", [False, True])
@pytest.mark.parametrize("height", [0, 1, 2, 3])
def test_enumerate_matches_oracle(coeffs, gens, allow_sign, height):
    if (len(coeffs) == 3 or len(gens) == 3) and height == 3:
        height = 2
    eq, g = SUnitEquation(coeffs), SUnitGroup(gens, allow_sign)
    got = [s.values for s in enumerate_solutions(eq, g, height)]
    assert len(got) == len(set(got))
    assert set(got) == oracle_solutions(coeffs, gens, height, allow_sign)
    assert set(got) == naive_solutions(eq, g, height)


def test_height_monotone():
    prev: set = set()
    for h in range(0, 6):
        cur = {s.values for s in enumerate_solutions(XY, G23, h)}
        assert prev <= cur
        prev = cur


# -- degeneracy ---------------------------------------------------------------------------


def test_classify_examples():
    assert classify_degeneracy(SUnitEquation((1, 1, -1)), (Q(1), Q(6), Q(6))) == ((1, 2),)
    assert classify_degeneracy(XY, (Q(1, 3), Q(2, 3))) == ()
    assert classify_degeneracy(SUnitEquation((1, 1, 1, -1)), (Q(1, 3), Q(2, 3), Q(4), Q(4))) == ((2, 3),)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([Q(1), Q(-1), Q(2), Q(-2), Q(1, 2), Q(3)]), min_size=2, max_size=4))
def test_classify_matches_subset_scan(values):
    # close the tuple up so that it solves sum x_i = 1
    last = 1 - sum(values)
    assume(last != 0)
    values = values + [last]
    coeffs = (1,) * len(values)
    eq = SUnitEquation(coeffs)
    assert set(classify_degeneracy(eq, values)) == vanishing_subsets(coeffs, values)


def test_family_examples():
    eq = SUnitEquation((1, 1, -1))
    g = SUnitGroup((2, 3), allow_sign=True)
    assert [degenerate_family_count(eq, g, (1, 2), h) for h in (1, 2, 3)] == [18, 50, 98]
    assert degenerate_family_count(eq, g, (0,), 2) == 0
    with pytest.raises(ValueError):
        degenerate_family_count(eq, g, (0, 1, 2), 2)
    with pytest.raises(ValueError):
        degenerate_family_count(XY, G23, (0, 1), 2)


@pytest.mark.parametrize("height", [1, 2])
def test_family_count_matches_oracle(height):
    coeffs = (1, 1, -1)
    oracle = oracle_solutions(coeffs, (2, 3), height, True)
    expected = sum(1 for t in oracle if t[1] == t[2])
    eq, g = SUnitEquation(coeffs), SUnitGroup((2, 3), allow_sign=True)
    assert degenerate_family_count(eq, g, (1, 2), height) == expected


def test_non_degenerate_two_term_has_no_family():
    # x + y = 1 cannot have a vanishing proper sub-sum
    for s in enumerate_solutions(XY, SUnitGroup((2, 3), allow_sign=True), 3):
        assert not s.is_degenerate


# -- Frobenius over F_p(t) -------------------------------------------------------------------


def R(text: str, p: int) -> RatFunc:
    return parse_ratfunc(text, p)


def test_frobenius_orbit_examples():
    t, one_t = R("t", 2), R("1+t", 2)
    assert frobenius_orbit(2, [t, one_t], [1, 1], 1) == [R("t^2", 2), R("1+t^2", 2)]
    img = frobenius_orbit(2, [t, one_t], [1, 1], 3)
    assert [str(x) for x in img] == ["t^8", "1 + t^8"]
    t3, rest = R("t", 3), R("1-t", 3)
    assert frobenius_orbit(3, [t3, rest], [1, 1], 1) == [R("t^3", 3), R("1-t^3", 3)]
    assert frobenius_orbit(2, [t, one_t], [1, 1], 0) == [t, one_t]


def test_frobenius_orbit_rejects_non_solution():
    with pytest.raises(ValueError):
        frobenius_orbit(2, [R("t", 2), R("t", 2)], [1, 1], 1)
    with pytest.raises(ValueError):
        frobenius_orbit(2, [R("t", 2)], [1, 1], 1)


def test_frobenius_orbit_rational_terms():
    # 1/(1+t) + t/(1+t) = 1
    a, b = R("1/(1+t)", 2), R("t/(1+t)", 2)
    for n in range(6):
        x, y = frobenius_orbit(2, [a, b], [1, 1], n)
        q = 2**n
        assert x == RatFunc(FpPoly((1,), 2), FpPoly((1,) + (0,) * (q - 1) + (1,), 2))
        assert (x + y).is_one()


def test_frobenius_orbit_distinct():
    base = [R("t", 2), R("1+t", 2)]
    seen = {tuple(str(x) for x in frobenius_orbit(2, base, [1, 1], n)) for n in range(11)}
    assert len(seen) == 11
