import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from kummergerm.degeneration import (
    ADD,
    ETALE,
    MULT,
    artin_schreier_reduce,
    classify_boundary,
    residue_dlog,
)
from kummergerm.errors import NonReducedError
from kummergerm.gf import get_field
from kummergerm.series import LaurentPoly, ResidueSeries, parse_laurent
from kummergerm.tower import make_tower

from conftest import PRIMES


def _sig(text, p, s):
    T = make_tower(p, s, 64)
    return classify_boundary(parse_laurent(text, T))


@pytest.mark.parametrize("p", PRIMES)
def test_etale_boundary(p):
    for m in range(1, 11):
        if m % p:
            d = _sig(f"1 + lam^p*T^-{m}", p, 1)
            assert d.signature == (ETALE, m, 0)
            assert d.different == 0


@pytest.mark.parametrize("p", PRIMES)
def test_multiplicative_boundary(p):
    for h in range(1, p):
        d = _sig(f"T^{h}", p, 1)
        assert d.signature == (MULT, 0, h)
        assert d.different == p - 1
    d = _sig("1 + T", p, 1)
    # omega = dt/(1+t) has order 0, so m = -1
    assert d.signature == (MULT, -1, 0)


@pytest.mark.parametrize("p", PRIMES)
def test_additive_boundary(p):
    for m in range(1, 11):
        if m % p:
            d = _sig(f"1 + pi^{p}*T^-{m}", p, 2)
            assert d.signature == (ADD, m, 0)
            assert d.level_n == 1
    assert _sig(f"1 + pi^{p}*T", p, 2).signature == (ADD, -1, 0)


def test_additive_different_value():
    # p=3, v(lam)=5, n=2: (p-1)(v(lam)-n) = 6
    d = _sig("1 + pi^6*T^-1", 3, 5)
    assert d.group == ADD and d.level_n == 2 and d.different == 6


def test_split_boundary():
    d = _sig("(1 + T)^3", 3, 1)
    assert d.split and d.signature == (ETALE, 0, 0)
    d = _sig("1 + lam^p*pi*T^-4", 3, 1)
    assert d.split


def test_artin_schreier_reduction_removes_pth_powers():
    F = get_field(3)
    # t^-6 ~ t^-2 and t^-2 is kept: conductor 2
    w = ResidueSeries(F, {-6: 1, -1: 1}, prec=5)
    red, m = artin_schreier_reduce(w)
    assert m == 2
    assert _sig("1 + lam^p*T^-6", 3, 1).signature == (ETALE, 2, 0)
    assert _sig("1 + lam^p*T^-3", 3, 1).signature == (ETALE, 1, 0)


def test_residue_dlog():
    F = get_field(5)
    om = residue_dlog(ResidueSeries(F, {3: 1}, prec=20))
    assert om.ord == -1 and om.res == 3


def test_non_reduced_boundary():
    with pytest.raises(NonReducedError):
        _sig("pi*T", 3, 1)
    with pytest.raises(NonReducedError):
        _sig("1 + pi*T^-2", 3, 2)


# -- Kummer class invariance --

BASES = [
    ("1 + lam^p*T^-{m}", 1),
    ("T^{h}", 1),
    ("1 + T^{m}", 1),
    ("1 + pi^{p}*T^-{m}", 2),
    ("1 + pi^{p}*T^{m}", 2),
    ("T^{h}*(1 + T^{m})", 1),
]


@st.composite
def class_pair(draw):
    p = draw(st.sampled_from(PRIMES))
    tmpl, s = draw(st.sampled_from(BASES))
    m = draw(st.integers(1, 6).filter(lambda k: k % p))
    h = draw(st.integers(1, p - 1)) if p > 2 else 1
    T = make_tower(p, s, 64)
    f = parse_laurent(tmpl.format(m=m, h=h, p=p), T)
    # g = pi^a T^b (c + small perturbation)
    coeffs = {0: T.scalar(draw(st.integers(1, p - 1)))}
    for k in draw(st.lists(st.integers(-3, 3).filter(bool), max_size=3, unique=True)):
        coeffs[k] = T.scalar(draw(st.integers(1, 30))) * T.pi_power(draw(st.integers(1, 3)))
    g = LaurentPoly(T, coeffs).mul_T(draw(st.integers(-2, 2))).mul_pi(draw(st.integers(0, 1)))
    return f, f * g ** p


@given(class_pair())
def test_classification_is_a_kummer_class_invariant(pair):
    f, fg = pair
    d1, d2 = classify_boundary(f), classify_boundary(fg)
    assert d1.signature == d2.signature
    assert d1.level_n == d2.level_n
    assert d1.different == d2.different
    assert d1.split == d2.split


@st.composite
def power_pair(draw):
    p = draw(st.sampled_from((3, 5)))
    tmpl, s = draw(st.sampled_from(BASES))
    m = draw(st.integers(1, 6).filter(lambda k: k % p))
    h = draw(st.integers(1, p - 1))
    k = draw(st.integers(2, p - 1))
    T = make_tower(p, s, 64)
    f = parse_laurent(tmpl.format(m=m, h=h, p=p), T)
    return p, k, f, f ** k


@given(power_pair())
def test_prime_to_p_power_scales_h_and_keeps_m(data):
    p, k, f, fk = data
    d1, dk = classify_boundary(f), classify_boundary(fk)
    assume(not d1.split)
    assert d1.group == dk.group and d1.m == dk.m
    assert dk.h == (k * d1.h) % p
