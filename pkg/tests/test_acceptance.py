"""Acceptance criteria 1-6, each echoed as one PASS/FAIL line."""

import pytest

from kummergerm import genus as genus_mod
from kummergerm.degeneration import ADD, ETALE, MULT, DegenerationType
from kummergerm.errors import KummerError
from kummergerm.genus import double_point_genus, rh_genus, smooth_point_genus
from kummergerm.singularity import kummer_germ, resolve

from conftest import PRIMES, record

FIDELITY_FAMILIES = ("2.3.1", "3.1.3", "3.1.4", "3.2.4", "3.2.5")


def _fidelity(catalog_results):
    rows = [(e, r) for e, r in catalog_results.values() if e.family.startswith(FIDELITY_FAMILIES)]
    printed_ok = [e.id for e, r in rows if r.status == "pass"]
    divergent = [(e, r) for e, r in rows if r.status == "divergence"]
    broken = [(e.id, r.status, r.mismatches) for e, r in rows if r.status in ("fail", "error")]
    return rows, printed_ok, divergent, broken


def test_criterion_1_catalog_fidelity(catalog_results):
    rows, printed_ok, divergent, broken = _fidelity(catalog_results)
    fams = sorted({e.family for e, _ in divergent})
    record(1, "catalog fidelity", not divergent and not broken,
           f"{len(printed_ok)}/{len(rows)} entries equal the printed values; "
           f"{len(divergent)} documented divergences in {', '.join(fams) or 'none'}; {len(broken)} unexplained")
    # every entry either equals the printed values or equals an independently derived value
    assert not broken
    for e, r in divergent:
        assert e.derived is not None and r.report_consistent, e.id


@pytest.mark.xfail(strict=True, reason="printed r and g_y in the 3.1.4 examples fail where p | m' or h' = 0 mod p, "
                                       "and example 4 prints a genus above g(Y_K); see the ledger")
def test_criterion_1_literal(catalog_results):
    _, _, divergent, broken = _fidelity(catalog_results)
    assert not divergent and not broken


def test_criterion_1_first_smooth_example(catalog_results):
    # g_y = (m'-m)(p-1)/2 for the instances where the printed hypotheses give a branch point at T = 0
    for e, r in catalog_results.values():
        if e.family == "3.1.4-1" and e.params["m'"] % e.p:
            m, m2 = e.params["m"], e.params["m'"]
            assert r.computed["g_y"] == (m2 - m) * (e.p - 1) // 2, e.id


def _types():
    out = [DegenerationType(ETALE, m, 0) for m in range(1, 11)]
    out += [DegenerationType(MULT, m, 0 if m else 1) for m in range(-10, 1)]
    out += [DegenerationType(ADD, m, 0) for m in range(-10, 11) if m]
    return out


def _outcome(fn, *args):
    try:
        return fn(*args)
    except KummerError as exc:
        return type(exc).__name__


def test_criterion_2_formula_coherence(monkeypatch):
    genus_mod.clear_discrepancies()
    first_reports = []
    real = genus_mod.report_discrepancy

    def counting(key, msg):
        fresh = real(key, msg)
        if fresh:
            first_reports.append(key)
        return fresh

    monkeypatch.setattr(genus_mod, "report_discrepancy", counting)
    split = DegenerationType(ETALE, 0, 0, split=True)
    checked = mismatched = printed_off = 0
    for p in PRIMES:
        for r in range(26):
            for d in _types():
                rh = _outcome(rh_genus, p, 0, r * (p - 1), [d])
                if isinstance(rh, int):
                    cf = (r - d.m - 1) * (p - 1)
                    checked += 1
                    mismatched += cf < 0 or cf % 2 or cf // 2 != rh
                    smooth_point_genus(r, d, 1, p)
                rh = _outcome(rh_genus, p, 0, r * (p - 1), [split, d])
                if isinstance(rh, int):
                    checked += 1
                    mismatched += (r - d.m - 1) * (p - 1) != 2 * rh
                    double_point_genus(r, split, d, p + 1, p)
                for d2 in _types():
                    rh = _outcome(rh_genus, p, 0, r * (p - 1), [d, d2])
                    if isinstance(rh, int):
                        checked += 1
                        mismatched += (r - d.m - d2.m) * (p - 1) != 2 * rh
            rh = _outcome(rh_genus, p, 0, r * (p - 1), [split, split])
            if isinstance(rh, int):
                checked += 1
                mismatched += (r - 2) * (p - 1) != 2 * rh
                printed_off += (r - 2) * (p - 2) != 2 * rh
                double_point_genus(r, split, split, 2 * p, p)
    ok = mismatched == 0 and first_reports == [genus_mod.PRINTED_SPLIT_DOUBLE] and printed_off > 0
    record(2, "formula coherence", ok,
           f"{checked} grid points, {mismatched} closed-form mismatches; split double point "
           f"(p-2) vs (p-1) off at {printed_off} points, reported {len(first_reports)} time(s)")
    assert ok


def test_criterion_3_oracle_equivalence(catalog_results):
    compared = special = disagree = 0
    for e, r in catalog_results.values():
        g = r.computed.get("g_y")
        if g is None:
            continue
        for method, og in r.computed["oracle"]:
            if og is None:
                continue
            compared += 1
            special += method == "special-fibre"
            disagree += og != g
    kummer = [(p, M) for p in PRIMES for M in range(1, 11)
              if M % p and resolve(kummer_germ(p, M)).genus != (M - 1) * (p - 1) // 2]
    ok = disagree == 0 and special > 0 and not kummer
    record(3, "oracle equivalence", ok,
           f"{compared} oracle comparisons ({special} from special-fibre equations), {disagree} disagreements; "
           f"resolve(z^p - t^M) wrong at {len(kummer)} points")
    assert ok


def test_criterion_4_different_laws(catalog_results):
    classified = profiles = 0
    bad = []
    for e, r in catalog_results.values():
        c = r.computed
        if c.get("case") in (None, "split"):
            continue
        classified += 1
        p, s = e.p, e.s
        vp = s * (p - 1)
        d1, d2, t, m, n = c["delta1"], c["delta2"], c["t"], c["signed_m"], c["n"]
        law = d2 - d1 == m * t * (p - 1)
        case = {
            "a": d1 == d2 == vp,
            "b": d2 == vp,
            "c": d1 == 0 and t * abs(m) == s,
            "d": d2 == 0,
            "e": d1 == (p - 1) * (s - (n + t * abs(m))),
        }[c["case"]]
        if "profile_agree" in c:
            profiles += 1
            law = law and c["profile_agree"]
        if not (law and case):
            bad.append(e.id)
    ok = not bad and classified > 0 and profiles == classified
    record(4, "different laws", ok,
           f"{classified} classified double-point covers, {profiles} profiles checked, {len(bad)} violations")
    assert ok, bad[:5]


def test_criterion_5_kato(catalog_results):
    rows = [(e, r) for e, r in catalog_results.values() if e.family == "3.1.3-1"]
    bad = []
    for e, r in rows:
        k = r.computed.get("kato")
        m = e.params["m"]
        if not k or k["d_w"] != m * (e.p - 1) or k["g_y_plus_delta_y_minus_1"] != -1 or not k.get("consistent"):
            bad.append(e.id)
    ok = bool(rows) and not bad
    record(5, "Kato cross-check", ok, f"{len(rows)} instances, {len(bad)} failures")
    assert ok


def _property_tests():
    import test_branch
    import test_degeneration
    import test_series
    import test_singularity
    import test_tower

    return {
        "valuation axioms": [test_tower.test_valuation_is_multiplicative, test_tower.test_ultrametric_inequality,
                             test_tower.test_inverse, test_tower.test_ring_axioms],
        "Kummer-class invariance": [test_degeneration.test_classification_is_a_kummer_class_invariant],
        "normalize_unit round trip": [test_series.test_normalize_unit_round_trip],
        "Newton polygon root counts": [test_branch.test_newton_polygon_matches_constructed_roots],
        "delta coordinate invariance": [test_singularity.test_delta_invariant_under_linear_change],
    }


def test_criterion_6_property_suites():
    counts = {}
    failures = []
    for name, fns in _property_tests().items():
        for fn in fns:
            inner = fn.hypothesis.inner_test
            n = [0]

            def counted(*a, _inner=inner, _n=n, **kw):
                _n[0] += 1
                return _inner(*a, **kw)

            fn.hypothesis.inner_test = counted
            try:
                fn()
            except Exception as exc:  # noqa: BLE001
                failures.append(f"{fn.__name__}: {exc}")
            finally:
                fn.hypothesis.inner_test = inner
            counts[fn.__name__] = n[0]
    few = {k: v for k, v in counts.items() if v < 100}
    ok = not failures and not few
    record(6, "property suites", ok,
           f"{len(counts)} suites, min {min(counts.values())} instances, {len(failures)} failing, {len(few)} under 100")
    assert ok, (failures, few)
