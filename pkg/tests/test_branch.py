from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kummergerm.branch import (
    branch_count,
    discriminant_nonzero,
    newton_polygon,
    projective_branch_count,
    resultant,
)
from kummergerm.errors import MultiplicityError
from kummergerm.series import GermDescriptor, LaurentPoly, parse_cover, parse_laurent
from kummergerm.tower import make_tower

from conftest import PRIMES


def _cover(text, p=3, s=1, germ=None):
    T = make_tower(p, s, 64)
    return parse_cover(text, T, germ or GermDescriptor("smooth"))


@pytest.mark.parametrize("p", PRIMES)
def test_etale_example_branch_points(p):
    for m in range(1, 11):
        if m % p:
            br = branch_count(_cover(f"1 + lam^p*T^-{m}", p))
            assert br.r == m + 1
            assert br.d_eta == (m + 1) * (p - 1)


def test_small_examples():
    assert branch_count(_cover("T^2")).r == 1
    assert branch_count(_cover("1 + T")).r == 0
    assert branch_count(_cover("T^3")).r == 0
    # double point: roots of 1 + T^2 are units, outside the annulus
    assert branch_count(_cover("1 + T^2", 3, 3, GermDescriptor("double", 3))).r == 0


def test_factor_with_exponent_divisible_by_p_is_skipped():
    assert branch_count(_cover("(T^2 + pi)^3*(1 + T)")).r == 0


def test_repeated_roots_are_rejected():
    with pytest.raises(MultiplicityError):
        branch_count(_cover("(T - pi)*(T - pi)"))
    with pytest.raises(MultiplicityError):
        branch_count(_cover("(T^2 - pi^2)*(T - pi)"))


def test_projective_count_includes_infinity():
    # X^3 = T: branched at 0 and infinity
    assert projective_branch_count(_cover("T")) == 2
    assert projective_branch_count(_cover("1 + lam^p*T^-4")) == 5


def test_resultant_of_coprime_linear_polys():
    T = make_tower(3, 1, 32)
    a = parse_laurent("T - pi", T)
    b = parse_laurent("T - pi^2", T)
    r = resultant(a, b)
    assert r.valuation() == 1


@st.composite
def rooted_poly(draw):
    p = draw(st.sampled_from(PRIMES))
    s = draw(st.integers(1, 2))
    T = make_tower(p, s, 64)
    deg = draw(st.integers(1, 6))
    vals = [draw(st.integers(-3, 5)) for _ in range(deg)]
    roots = []
    for v in vals:
        unit = T.scalar(draw(st.integers(1, p - 1))) + T.scalar(draw(st.integers(0, 40))) * T.pi
        roots.append(unit * T.pi_power(v))
    lead = T.scalar(draw(st.integers(1, p - 1))) * T.pi_power(draw(st.integers(0, 3)))
    F = LaurentPoly(T, {0: lead})
    for c in roots:
        F = F * LaurentPoly(T, {1: 1, 0: -c})
    return F, vals


@given(rooted_poly())
def test_newton_polygon_matches_constructed_roots(data):
    F, vals = data
    np_ = newton_polygon(F)
    got = Counter()
    for v, n in np_.root_valuations():
        got[v] += n
    assert got == Counter(Fraction(v) for v in vals)
    assert np_.count_roots(0) == sum(1 for v in vals if v > 0)
    assert np_.count_roots(0, 3) == sum(1 for v in vals if 0 < v < 3)


def test_discriminant_detects_distinct_roots():
    T = make_tower(5, 1, 64)
    assert discriminant_nonzero(parse_laurent("T^4 + pi", T))
    assert not discriminant_nonzero(parse_laurent("(T + pi)^2*(T - 1)", T))
