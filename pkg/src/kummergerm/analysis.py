"""End-to-end analysis of one cover; the command line only formats this."""

from __future__ import annotations

from .branch import branch_count, newton_polygon, projective_branch_count
from .degeneration import ADD, ETALE, DegenerationType, classify_boundary
from .doublepoint import classify_double_cover, different_profile, is_double_point, is_smooth_image
from .errors import InconsistencyError, KummerError
from .genus import (
    RHInput,
    compactify_accounting,
    double_point_genus,
    kato_genus,
    smooth_point_genus,
    vanishing_cycles_genus,
    wild_different_residue,
)
from .series import SPLIT, CoverSpec, LaurentPoly, ResidueSeries, kummer_adjust, normalize_unit
from .singularity import BiPoly, artin_schreier_smooth_genus, kummer_germ, resolve


def boundary_types(c: CoverSpec) -> list[DegenerationType]:
    if c.germ.is_double:
        return [classify_boundary(c.boundary(1)), classify_boundary(c.boundary(2))]
    return [classify_boundary(c.boundary(2))]


def branches_above(types: list[DegenerationType], p: int) -> int:
    return sum(p if d.split else 1 for d in types)


def closed_form_genus(c: CoverSpec, r: int, types: list[DegenerationType]) -> int:
    p = c.p
    if not c.germ.is_double:
        return smooth_point_genus(r, types[0], branches_above(types, p), p)
    d1, d2 = types
    if d2.split and not d1.split:
        d1, d2 = d2, d1  # the p+1 formula puts the split side first
    return double_point_genus(r, d1, d2, branches_above([d1, d2], p), p)


# -- oracle side --

def oracle_cap_genus(d: DegenerationType, p: int) -> int:
    """Special genus of the disc glued along a boundary, from the blow-up oracle."""
    if d.group == ETALE and d.m > 0:
        return artin_schreier_smooth_genus(p, d.m)
    if d.group == ADD and d.m > 0:
        return resolve(kummer_germ(p, d.m)).genus
    return 0


def oracle_by_caps(c: CoverSpec, types: list[DegenerationType]) -> dict:
    """g_y = g(Y_K) - sum of cap genera, with g(Y_K) from the branch points on P^1."""
    p = c.p
    r_total = projective_branch_count(c)
    twice = (p - 1) * r_total - 2 * p + 2
    if twice % 2:
        raise InconsistencyError("generic fibre genus is not an integer")
    g_YK = twice // 2
    caps = [oracle_cap_genus(d, p) for d in types]
    return {"method": "caps", "r_projective": r_total, "g_YK": g_YK, "cap_genera": caps,
            "g_y": g_YK - sum(caps)}


def _residue_poly_to_germ(expr: ResidueSeries, p: int) -> BiPoly:
    """z^p - expr(t) as a plane germ."""
    coeffs = {(p, 0): 1}
    for k, v in expr.coeffs.items():
        coeffs[(0, k)] = -v
    return BiPoly(expr.field, coeffs)


def special_fibre_germ(c: CoverSpec):
    """Equation of Y_k at y when it can be read off a normalized model.

    Works for polynomial f on a smooth germ whose branch orders in the
    disc share one residue mod p; returns (germ, description) or None.
    """
    if c.germ.is_double:
        return None
    T = c.tower
    p = T.p
    residues = set()
    a_total = 0
    parts = []
    for poly, k in c.factors:
        lo, hi = poly.span()
        if lo < 0:
            return None
        a_total += lo * k
        G = poly.mul_T(-lo)
        parts.append((G, k))
        if k % p and hi > lo and newton_polygon(G).count_roots(0):
            residues.add(k % p)
    if a_total % p:
        residues.add(a_total % p)
    if len(residues) > 1:
        return None
    scale = pow(residues.pop(), -1, p) if residues else 1
    f = LaurentPoly.monomial(T, (a_total * scale) % p)
    for G, k in parts:
        f = f * (G ** ((k * scale) % p))
    a, b, u = normalize_unit(f)
    if a % p or (f.coeffs and min(f.coeffs) < 0):
        return None
    fbar = f.mul_pi(-a).residue()
    if not fbar.is_pth_power():
        # X^p = f is already normal: its special fibre is reduced
        shifted = fbar - fbar.coeff(0)
        return _residue_poly_to_germ(shifted, p), f"z^p = {shifted}"
    if b % p or min(u.coeffs) < 0:
        return None
    ka = kummer_adjust(u)
    if ka.level == SPLIT or ka.level == p * T.v_lambda:
        return None
    # X = T^(b/p) D (1 + pi^(N/p) Z) gives (z Dbar)^p = wbar, and Dbar is a unit
    Dbar = ka.witness.residue()
    if min(Dbar.coeffs) < 0 or min(ka.wbar.coeffs) < 0:
        return None
    rhs = ka.wbar - ka.wbar.coeff(0)
    return _residue_poly_to_germ(rhs, p), f"z^p = {rhs} (level {int(ka.level) // p})"


def oracle_direct(c: CoverSpec):
    got = special_fibre_germ(c)
    if got is None:
        return None
    germ, desc = got
    inv = resolve(germ)
    return {"method": "special-fibre", "equation": desc, **inv.to_json(), "g_y": inv.genus}


# -- Kato --

def kato_check(c: CoverSpec, types, r: int, g_y: int):
    """Kato's formula on smooth germs with a nonsplit etale boundary."""
    if c.germ.is_double or types[0].group != ETALE or types[0].split:
        return None
    p = c.p
    d = types[0]
    d_w = wild_different_residue(d.wbar) if d.wbar is not None else wild_different_residue(d.m, p)
    d_K = r * (p - 1)
    value = kato_genus(p, 0, 0, d_K, d_w)
    out = {"n": p, "g_x": 0, "delta_x": 0, "d_K": d_K, "d_w": d_w, "g_y_plus_delta_y_minus_1": value}
    smooth = is_smooth_image(r, d)
    if smooth:
        out["y_smooth"] = True
        out["consistent"] = value == g_y + 0 - 1
    return out


# -- pipeline --

def analyze(c: CoverSpec, oracle: bool = True, profile: bool = True) -> dict:
    p = c.p
    types = boundary_types(c)
    br = branch_count(c)
    report: dict = {
        "cover": c.to_json(),
        "boundaries": [d.to_json() | {"label": d.label()} for d in types],
        "branch": br.to_json(),
    }
    if all(d.split for d in types) and br.r == 0:
        report["split"] = True
        report["note"] = "etale and split on every boundary with r = 0: the cover is completely split"
        if c.germ.is_double:
            report["double_point"] = classify_double_cover(c).to_json()
        return report
    g_x = 0
    rh = vanishing_cycles_genus(RHInput(p, g_x, br.d_eta, types))
    report["riemann_hurwitz"] = rh.to_json()
    g_y = rh.g_y
    report["g_y"] = g_y
    report["closed_form_g_y"] = closed_form_genus(c, br.r, types)
    acct = compactify_accounting(types, br.r, p)
    report["accounting"] = acct.to_json()
    if acct.g_y != g_y:
        raise InconsistencyError(f"compactification gives g_y={acct.g_y}, formula gives {g_y}")
    if c.germ.is_double:
        report["criterion"] = _diag(is_double_point(br.r, types[0], types[1], c.germ.thickness, p))
        if br.r == 0 and g_y == 0:
            cls = classify_double_cover(c)
            report["double_point"] = cls.to_json()
            if profile:
                report["profile"] = different_profile(cls, c).to_json()
    else:
        report["criterion"] = _diag(is_smooth_image(br.r, types[0]))
        kato = kato_check(c, types, br.r, g_y)
        if kato is not None:
            report["kato"] = kato
    if oracle:
        checks = []
        for fn in (oracle_by_caps, lambda cc, tt: oracle_direct(cc)):
            try:
                res = fn(c, types)
            except KummerError as exc:
                res = {"method": "unavailable", "error": str(exc)}
            if res is not None:
                res["agrees"] = res.get("g_y") == g_y
                checks.append(res)
        report["oracle"] = checks
    return report


def _diag(d) -> dict:
    return {"verdict": bool(d), "notes": d.notes, "inconsistent": d.inconsistent}


def consistent(report: dict) -> bool:
    """Every internal cross-check in an analysis report agrees."""
    for chk in report.get("oracle", []):
        if "g_y" in chk and not chk.get("agrees"):
            return False
    if report.get("closed_form_g_y", report.get("g_y")) != report.get("g_y"):
        return False
    if "profile" in report and not report["profile"]["agree"]:
        return False
    if report.get("kato", {}).get("consistent") is False:
        return False
    if report.get("criterion", {}).get("inconsistent"):
        return False
    return True
