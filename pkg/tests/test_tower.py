import pytest
from hypothesis import given
from hypothesis import strategies as st

from kummergerm.errors import PrecisionError
from kummergerm.tower import make_tower

from conftest import PRIMES


@pytest.mark.parametrize("p,s", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2)])
def test_tower_valuations(p, s):
    T = make_tower(p, s, 64)
    assert T.v_lambda == s
    assert T.v_p == s * (p - 1)
    assert T.lam.valuation() == s
    assert T.p_elem().valuation() == s * (p - 1)
    assert T.pi.valuation() == 1


@pytest.mark.parametrize("p,s", [(2, 1), (3, 1), (3, 2), (5, 2)])
def test_zeta_is_a_primitive_pth_root_of_unity(p, s):
    T = make_tower(p, s, 64)
    z = T.zeta
    assert (z ** p - T.one()).is_zero()
    assert not (z - T.one()).is_zero()
    # Phi_p(zeta) = 0
    acc = T.zero()
    for k in range(p):
        acc = acc + z ** k
    assert acc.is_zero()


def test_lambda_p_over_p_is_a_unit():
    T = make_tower(3, 2, 64)
    q = T.lam ** 3 / T.p_elem()
    assert q.valuation() == 2 * 3 - 4


def test_zero_at_precision_has_no_valuation():
    T = make_tower(3, 1, 16)
    z = T.pi_power(5) - T.pi_power(5)
    assert z.is_zero()
    with pytest.raises(PrecisionError):
        z.valuation()


@st.composite
def scalars(draw, T):
    shift = draw(st.integers(0, 6))
    digits = {i: draw(st.integers(-20, 20)) for i in range(4)}
    digits[0] = draw(st.integers(1, T.p - 1))
    return T.from_digits(digits) * T.pi_power(shift)


@st.composite
def tower_and_pair(draw):
    p = draw(st.sampled_from(PRIMES))
    s = draw(st.integers(1, 3))
    T = make_tower(p, s, 48)
    return T, draw(scalars(T)), draw(scalars(T))


@given(tower_and_pair())
def test_valuation_is_multiplicative(data):
    T, x, y = data
    assert (x * y).valuation() == x.valuation() + y.valuation()


@given(tower_and_pair())
def test_ultrametric_inequality(data):
    T, x, y = data
    s = x + y
    if not s.is_zero():
        assert s.valuation() >= min(x.valuation(), y.valuation())
        if x.valuation() != y.valuation():
            assert s.valuation() == min(x.valuation(), y.valuation())


@given(tower_and_pair())
def test_inverse(data):
    T, x, _ = data
    assert (x * x.inverse() - T.one()).is_zero()
    assert x.inverse().valuation() == -x.valuation()


@given(tower_and_pair())
def test_ring_axioms(data):
    T, x, y = data
    assert (x * y - y * x).is_zero()
    assert ((x + y) * (x - y) - (x * x - y * y)).is_zero()
