import pytest
from hypothesis import given
from hypothesis import strategies as st

from kummergerm.errors import NonReducedError, UsageError
from kummergerm.gf import get_field
from kummergerm.series import (
    SPLIT,
    GermDescriptor,
    LaurentPoly,
    ResidueSeries,
    WindowError,
    kummer_adjust,
    laurent_from_json,
    localize_double,
    normalize_unit,
    parse_cover,
    parse_laurent,
)
from kummergerm.tower import make_tower

from conftest import PRIMES


def test_parse_basic_symbols():
    T = make_tower(3, 2, 64)
    f = parse_laurent("1 + lam^p*T^-5", T)
    assert set(f.coeffs) == {0, -5}
    assert f[-5].valuation() == 3 * 2
    g = parse_laurent("pi^3*T^2 - 2*T + zeta", T)
    assert g[2].valuation() == 3 and g[1].valuation() == 0


def test_parse_errors_carry_position():
    T = make_tower(3, 1, 32)
    with pytest.raises(UsageError, match="position"):
        parse_laurent("1 + (T", T)
    with pytest.raises(UsageError):
        parse_laurent("1 + Q", T)
    with pytest.raises(UsageError):
        parse_laurent("S + 1", T)


def test_top_level_product_becomes_factor_list():
    T = make_tower(3, 1, 32)
    c = parse_cover("T^2*(T^7 + pi)*(1 + T^2)", T)
    assert [k for _, k in c.factors] == [2, 1, 1]
    assert c.f.equals(parse_laurent("T^2*(T^7 + pi)*(1 + T^2)", T))


def test_negative_power_of_polynomial_factor_is_reduced_mod_p():
    T = make_tower(3, 1, 32)
    c = parse_cover("(T - pi)^-2", T)
    assert c.factors[0][1] == 1


def test_localize_side_one_substitutes_S():
    # 1 + T^m on ST = pi^e becomes 1 + pi^(e m) S^-m on the far side
    T = make_tower(3, 3, 64)
    for m in (1, 2, 4):
        f = parse_laurent(f"1 + T^{m}", T)
        g = localize_double(f, GermDescriptor("double", 3), 1)
        assert set(g.coeffs) == {0, -m}
        assert g[-m].valuation() == 3 * m
        assert g.var == "S"


def test_S_symbol_on_double_germ():
    T = make_tower(3, 3, 64)
    germ = GermDescriptor("double", 3)
    f = parse_laurent("1 + S^2", T, germ)
    assert f[-2].valuation() == 6


def test_json_coefficient_list():
    T = make_tower(3, 1, 32)
    f = laurent_from_json([[0, "1"], [-4, "lam^3"]], T)
    assert f.equals(parse_laurent("1 + lam^p*T^-4", T))


def test_window_guard():
    T = make_tower(3, 1, 32)
    f = LaurentPoly(T, {0: 1, 3: 1}, window=(-5, 5))
    with pytest.raises(WindowError):
        f ** 2


def test_kummer_adjust_examples():
    T = make_tower(3, 2, 64)
    # already reduced alpha_p form at level n p
    ka = kummer_adjust(parse_laurent("1 + pi^3*T^-2", T))
    assert ka.level == 3 and ka.steps == 0
    # p-th powers are split
    assert kummer_adjust(parse_laurent("(1 + T)^3", T)).level == SPLIT
    # the cube hides level 6: one adjustment removes (1 + pi T^-1)^3
    T = make_tower(3, 3, 64)
    ka = kummer_adjust(parse_laurent("(1 + pi*T^-1)^3*(1 + pi^6*T^-2)", T))
    assert ka.level == 6 and ka.steps == 1
    assert ka.wbar.ord() == -2


def test_kummer_adjust_rejects_level_prime_to_p():
    T = make_tower(3, 2, 64)
    with pytest.raises(NonReducedError):
        kummer_adjust(parse_laurent("1 + pi*T^-2", T))


def test_residue_series_pth_root():
    F = get_field(3)
    w = ResidueSeries(F, {0: 1, 3: 2, 6: 1}, prec=20)
    assert w.is_pth_power()
    assert (w.pth_root() ** 3).equals(w)
    assert not ResidueSeries(F, {1: 1}, prec=10).is_pth_power()


@st.composite
def laurent(draw):
    p = draw(st.sampled_from(PRIMES))
    s = draw(st.integers(1, 2))
    T = make_tower(p, s, 40)
    n = draw(st.integers(1, 5))
    exps = draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n, unique=True))
    coeffs = {}
    for k in exps:
        unit = T.scalar(draw(st.integers(1, p - 1))) + T.scalar(draw(st.integers(0, 50))) * T.pi
        coeffs[k] = unit * T.pi_power(draw(st.integers(0, 5)))
    return LaurentPoly(T, coeffs)


@given(laurent())
def test_normalize_unit_round_trip(f):
    a, b, u = normalize_unit(f)
    # postcondition: residue of u is a unit of k[[t]]
    ubar = u.residue()
    assert ubar.ord() == 0
    assert u.gauss_valuation() == 0
    assert u.mul_pi(a).mul_T(b).equals(f)
    assert a == f.gauss_valuation()
