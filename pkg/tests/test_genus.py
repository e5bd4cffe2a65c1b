import pytest

from kummergerm.degeneration import ADD, ETALE, MULT, DegenerationType
from kummergerm.errors import InconsistencyError, InfeasibleError, ParityError
from kummergerm.genus import (
    PRINTED_SPLIT_DOUBLE,
    RHInput,
    cap_data,
    compactify_accounting,
    discrepancies,
    double_point_genus,
    rh_genus,
    kato_genus,
    lower_break,
    point_genus,
    smooth_point_genus,
    total_arithmetic_genus,
    vanishing_cycles_genus,
    wild_different_residue,
)
from kummergerm.gf import get_field
from kummergerm.series import ResidueSeries

from conftest import PRIMES

SPLIT = DegenerationType(ETALE, 0, 0, split=True)


def et(m):
    return DegenerationType(ETALE, m, 0)


def mu(m, h=0):
    return DegenerationType(MULT, m, h)


def al(m):
    return DegenerationType(ADD, m, 0, level_n=1)


@pytest.mark.parametrize("p", PRIMES)
def test_rh_positive_genus_etale(p):
    for m in range(1, 11):
        for m2 in range(m + 1, 11):
            if (m2 - m) * (p - 1) % 2 == 0:
                assert rh_genus(p, 0, (m2 + 1) * (p - 1), [et(m)]) == (m2 - m) * (p - 1) // 2


def test_rh_examples():
    assert rh_genus(3, 0, 0, [mu(0, 1), mu(0, 2)]) == 0
    assert rh_genus(3, 0, 5 * 2, [SPLIT, SPLIT]) == 3
    for m in range(1, 8):
        assert rh_genus(3, 0, (m + 1) * 2, [al(m)]) == 0


def test_rh_report_breakdown():
    rep = vanishing_cycles_genus(RHInput(5, 0, 6 * 4, [et(3)]))
    assert rep.d_s == 2 * 4
    assert 2 * rep.g_y - 2 == 5 * (-2) + 24 - 8


def test_rh_errors():
    with pytest.raises(ParityError):
        rh_genus(2, 0, 3, [et(3)])
    with pytest.raises(InfeasibleError):
        rh_genus(3, 0, 0, [et(5)])
    with pytest.raises(InconsistencyError):
        RHInput(3, 0, 3, [et(1)])
    with pytest.raises(InconsistencyError):
        RHInput(3, 0, 2, [])


def test_smooth_point_closed_forms():
    assert smooth_point_genus(4, et(3), 1, 3) == 0
    assert smooth_point_genus(2, SPLIT, 3, 3) == 0
    assert smooth_point_genus(5, mu(2), 1, 3) == 2
    with pytest.raises(InfeasibleError):
        smooth_point_genus(2, et(3), 1, 3)


def test_double_point_closed_forms(fresh_registry):
    assert double_point_genus(3, et(1), al(2), 2, 3) == 0
    assert double_point_genus(4, SPLIT, et(3), 4, 3) == 0
    assert double_point_genus(2, SPLIT, SPLIT, 6, 3) == 0
    assert PRINTED_SPLIT_DOUBLE not in discrepancies()


def test_split_double_discrepancy_reported_once(fresh_registry):
    for r in range(3, 12):
        double_point_genus(r, SPLIT, SPLIT, 2 * 3, 3)
    got = discrepancies()
    assert list(got) == [PRINTED_SPLIT_DOUBLE]
    assert "first seen at p=3, r=3" in got[PRINTED_SPLIT_DOUBLE]


def test_kato_examples():
    assert kato_genus(1, 2, 1, 0, 0) == 2
    for p in PRIMES:
        for m in range(1, 11):
            if m % p:
                assert kato_genus(p, 0, 0, (m + 1) * (p - 1), m * (p - 1)) == -1
    assert kato_genus(3, 0, 0, 0, 0) == -3


@pytest.mark.parametrize("p", PRIMES)
def test_lower_break_is_conductor_plus_one(p):
    # Hasse-Arf for z^p - z = t^-m: lower break m, so i(sigma) = m + 1
    for m in range(1, 30):
        if m % p:
            assert lower_break(p, m) == m + 1


def test_wild_different_examples():
    F = get_field(2)
    assert wild_different_residue(ResidueSeries(F, {-1: 1}, prec=4)) == 1
    assert wild_different_residue(ResidueSeries(F, {-3: 1}, prec=4)) == 3
    assert wild_different_residue(ResidueSeries(F, {0: 1, 2: 1}, prec=4)) == 0
    # t^-6 reduces to t^-3 in characteristic 2
    assert wild_different_residue(ResidueSeries(F, {-6: 1, -1: 1}, prec=4)) == 3


def test_genus_additivity():
    assert point_genus(1, 2) == 0
    assert total_arithmetic_genus([0, 0], [point_genus(1, 2)]) == 0
    assert total_arithmetic_genus([2], [1]) == 3


def test_cap_data_table():
    assert cap_data(SPLIT, 3).special_genus == 0
    assert cap_data(et(4), 3).special_genus == 3
    assert cap_data(al(4), 3).special_genus == 3
    assert cap_data(mu(-3), 3).r_cap == 4
    assert cap_data(mu(0, 1), 3).r_cap == 1
    with pytest.raises(InconsistencyError):
        cap_data(mu(2), 3)


def test_compactification_examples():
    for p in PRIMES:
        for m in range(1, 11):
            if m % p:
                acc = compactify_accounting([et(m)], m + 1, p)
                assert acc.g_YK == (m - 1) * (p - 1) // 2 and acc.g_y == 0
                acc = compactify_accounting([al(m)], m + 1, p)
                assert acc.g_y == 0


def _feasible_grid():
    for p in PRIMES:
        for r in range(0, 26):
            for m in range(-10, 11):
                yield p, r, m


def test_closed_forms_match_rh_on_grid(fresh_registry):
    checked = 0
    for p, r, m in _feasible_grid():
        types = [et(m)] if m > 0 else [mu(m)] if m < 0 else [mu(0, 1)]
        if r - m - 1 >= 0 and (r - m - 1) * (p - 1) % 2 == 0:
            assert smooth_point_genus(r, types[0], 1, p) == rh_genus(p, 0, r * (p - 1), types)
            checked += 1
    assert checked > 500
