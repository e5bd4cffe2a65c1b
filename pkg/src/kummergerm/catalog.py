"""Golden catalog of explicit covers with their printed invariants.

Entry ids are "<section>-<case>" followed by the parameters, e.g.
"3.1.3-1[p=3,m=5]".  Each entry carries the printed expectation; where
the printed value does not survive recomputation the entry also carries
the derived value and a note, and is reported as a divergence.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .analysis import analyze, boundary_types, consistent, oracle_cap_genus
from .degeneration import ADD, ETALE, MULT
from .errors import KummerError
from .genus import cap_data, discrepancies, report_discrepancy
from .series import SMOOTH, CoverSpec, GermDescriptor, parse_cover
from .tower import make_tower

PRIMES = (2, 3, 5)
M_MAX = 10


def _precision(p: int, s: int) -> int:
    e = s * (p - 1)
    return max(64, 3 * p * s + 2 * e)


@dataclass
class CatalogEntry:
    id: str
    family: str
    p: int
    s: int
    equation: str
    thickness: int = 0
    params: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    derived: dict | None = None
    note: str = ""
    ref: str = ""

    @property
    def germ(self) -> GermDescriptor:
        return GermDescriptor("double", self.thickness) if self.thickness else SMOOTH

    def build(self) -> CoverSpec:
        tower = make_tower(self.p, self.s, _precision(self.p, self.s))
        return parse_cover(self.equation, tower, self.germ, label=self.id)

    def to_json(self) -> dict:
        return {"id": self.id, "family": self.family, "p": self.p, "extra_ram": self.s,
                "equation": self.equation, "thickness": self.thickness, "params": self.params,
                "expected": self.expected, "derived": self.derived, "note": self.note, "ref": self.ref}


def _id(family: str, **params) -> str:
    return family + "[" + ",".join(f"{k}={v}" for k, v in params.items()) + "]"


def _half(k: int, p: int):
    """k(p-1)/2 exactly; printed formulas can be half-integers when p = 2."""
    num = k * (p - 1)
    return num // 2 if num % 2 == 0 else num / 2


def _prime_to(p: int, hi: int = M_MAX):
    return [m for m in range(1, hi + 1) if m % p]


# -- disc caps --

def _disc_entries(p: int) -> list[CatalogEntry]:
    out = []
    half = lambda k: _half(k, p)  # noqa: E731
    for m in _prime_to(p):
        # the printed exponent has the opposite sign; see the ledger
        out.append(CatalogEntry(
            _id("2.3.1-a", p=p, m=m), "2.3.1-a", p, 1, f"1 + lam^p*T^-{m}", params={"m": m},
            expected={"types": [(ETALE, m, 0)], "cap_r": 0, "cap_genus": half(m - 1)},
            ref="disc cover, case a: etale torsor, cap genus (m-1)(p-1)/2",
            note="equation read with T^-m: the boundary variable is the inverse of the disc coordinate"))
    for h in range(1, p):
        r = p - h
        out.append(CatalogEntry(
            _id("2.3.1-b-1", p=p, h=h), "2.3.1-b-1", p, 1, f"T^-{r}", params={"h": h},
            expected={"types": [(MULT, 0, None)], "cap_r": 1, "cap_genus": 0},
            ref="disc cover, case b-1: ramified only above infinity, cap genus 0"))
    for m in _prime_to(p):
        alpha = (-m) % p
        out.append(CatalogEntry(
            _id("2.3.1-b-2", p=p, m=m), "2.3.1-b-2", p, 1, f"T^-{alpha}*(T^-{m} + 1)", params={"m": m, "alpha": alpha},
            expected={"types": [(MULT, -m, 0)], "cap_r": m + 1, "cap_genus": 0},
            ref="disc cover, case b-2: ramified above infinity and the m-th roots of unity"))
    for m in _prime_to(p):
        out.append(CatalogEntry(
            _id("2.3.1-c-", p=p, m=m), "2.3.1-c", p, 2, f"1 + pi^{p}*T^-{m}", params={"m": -m, "n": 1},
            expected={"types": [(ADD, m, 0)], "cap_r": 0, "cap_genus": half(m - 1)},
            ref="disc cover, case c with m <= 0: alpha_p torsor, singular point of genus (-m-1)(p-1)/2"))
        alpha = (-m) % p
        out.append(CatalogEntry(
            _id("2.3.1-c+", p=p, m=m), "2.3.1-c", p, 2, f"T^-{alpha}*(T^-{m} + pi^{p})", params={"m": m, "n": 1},
            expected={"types": [(ADD, -m, 0)], "cap_r": m + 1, "cap_genus": 0},
            ref="disc cover, case c with m >= 0: smooth special fibre"))
    return out


# -- smooth points --

def _smooth_entries(p: int) -> list[CatalogEntry]:
    out = []
    half = lambda k: _half(k, p)  # noqa: E731
    for m in _prime_to(p):
        out.append(CatalogEntry(
            _id("3.1.3-1", p=p, m=m), "3.1.3-1", p, 1, f"1 + lam^p*T^-{m}", params={"m": m},
            expected={"types": [(ETALE, m, 0)], "r": m + 1, "g_y": 0},
            ref="smooth point, genus 0, etale boundary"))
    for h in range(1, p):
        out.append(CatalogEntry(
            _id("3.1.3-2", p=p, h=h), "3.1.3-2", p, 1, f"T^{h}", params={"h": h},
            expected={"types": [(MULT, 0, h)], "r": 1, "g_y": 0},
            ref="smooth point, genus 0, multiplicative boundary"))
    out.append(CatalogEntry(
        _id("3.1.3-3", p=p), "3.1.3-3", p, 1, "1 + T",
        expected={"types": [(MULT, -1, 0)], "r": 0, "g_y": 0},
        ref="smooth point, genus 0, r = 0"))
    for m in _prime_to(p):
        out.append(CatalogEntry(
            _id("3.1.3-4", p=p, m=-m), "3.1.3-4", p, 2, f"1 + pi^{p}*T^-{m}", params={"m": -m, "n": 1},
            expected={"types": [(ADD, m, 0)], "r": m + 1, "g_y": 0},
            ref="smooth point, genus 0, alpha_p boundary with m < 0"))
    out.append(CatalogEntry(
        _id("3.1.3-5", p=p), "3.1.3-5", p, 2, f"1 + pi^{p}*T", params={"n": 1},
        expected={"types": [(ADD, -1, 0)], "r": 0, "g_y": 0},
        ref="smooth point, genus 0, alpha_p boundary with r = 0"))

    for m in _prime_to(p):
        for m2 in range(m + 1, M_MAX + 1):
            e = CatalogEntry(
                _id("3.1.4-1", p=p, m=m, m2=m2), "3.1.4-1", p, 1, f"1 + lam^p*(T^-{m} + pi*T^-{m2})",
                params={"m": m, "m'": m2},
                expected={"types": [(ETALE, m, 0)], "r": m2 + 1, "g_y": half(m2 - m)},
                ref="smooth point, positive genus, etale boundary")
            if m2 % p == 0:
                e.derived = {"types": [(ETALE, m, 0)], "r": m2, "g_y": half(m2 - m - 1)}
                e.note = "p | m': the pole at T = 0 has order divisible by p and is not a branch point"
            out.append(e)
    for h in range(1, p):
        for m in _prime_to(p):
            h2 = (h - m) % p or p
            e = CatalogEntry(
                _id("3.1.4-2", p=p, h=h, m=m), "3.1.4-2", p, 1, f"T^{h2}*(T^{m} + pi)",
                params={"h": h, "m": m, "h'": h2},
                expected={"types": [(MULT, 0, h)], "r": m + 1, "g_y": half(m)},
                ref="smooth point, positive genus, multiplicative boundary")
            if h2 % p == 0:
                e.derived = {"types": [(MULT, 0, h)], "r": m, "g_y": half(m - 1)}
                e.note = "h' = 0 mod p: T = 0 is not a branch point"
            out.append(e)
    for m in _prime_to(p):
        for m2 in range(1, M_MAX + 1):
            h = (-m2) % p
            e = CatalogEntry(
                _id("3.1.4-3", p=p, m=m, m2=m2), "3.1.4-3", p, 1, f"T^{h}*(T^{m2} + pi)*(1 + T^{m})",
                params={"m": m, "m'": m2, "h": h},
                expected={"types": [(MULT, -m, 0)], "r": m2 + 1, "g_y": half(m2 + m)},
                ref="smooth point, positive genus, multiplicative boundary with m < 0")
            if m2 % p == 0:
                e.derived = {"types": [(MULT, -m, 0)], "r": m2, "g_y": half(m2 + m - 1)}
                e.note = "p | m': then h = 0 mod p and T = 0 is not a branch point"
            out.append(e)
    for m in _prime_to(p):
        for m2 in range(m + 1, M_MAX + 1):
            r = m2 + 1 if m2 % p else m2
            out.append(CatalogEntry(
                _id("3.1.4-4", p=p, m=m, m2=m2), "3.1.4-4", p, 2, f"1 + pi^{p}*(T^-{m} + pi*T^-{m2})",
                params={"m": m, "m'": m2, "n": 1},
                expected={"types": [(ADD, -m, 0)], "r": m2 + 1, "g_y": half(m2 + m)},
                derived={"types": [(ADD, m, 0)], "r": r, "g_y": half(r - m - 1)},
                note="the pole T^-m gives m > 0 as in the genus-0 list; the printed sign of m and "
                     "g_y = (m'+m)(p-1)/2 contradict the genus of the generic fibre",
                ref="smooth point, positive genus, alpha_p boundary"))
    return out


# -- double points --

def _double_entries(p: int) -> list[CatalogEntry]:
    out = []
    t = 1
    e_pt = p * t
    out.append(CatalogEntry(
        _id("3.2.4-1", p=p, t=t), "3.2.4-1", p, 1, "(1 + T)^p", thickness=e_pt, params={"t": t},
        expected={"types": [(ETALE, 0, 0), (ETALE, 0, 0)], "r": 0, "case": "split"},
        ref="p-purity: etale boundaries with r = 0 force a split cover"))
    for h in range(1, p):
        for tt in (1, 2):
            vp = p - 1
            out.append(CatalogEntry(
                _id("3.2.4-2", p=p, h=h, t=tt), "3.2.4-2", p, 1, f"T^{h}", thickness=p * tt,
                params={"h": h, "t": tt},
                expected={"types": [(MULT, 0, h), (MULT, 0, (-h) % p)], "r": 0, "g_y": 0, "case": "a"},
                ref="double point, multiplicative boundaries"))
            out.append(CatalogEntry(
                _id("3.2.5-a", p=p, h=h, t=tt), "3.2.5-a", p, 1, f"T^{h}", thickness=p * tt,
                params={"h": h, "t": tt},
                expected={"types": [(MULT, 0, h), (MULT, 0, (-h) % p)], "r": 0, "g_y": 0, "case": "a",
                          "delta1": vp, "delta2": vp},
                ref="classification case a: delta1 = delta2 = v(p)"))
    for m in _prime_to(p):
        for tt in (1, 2):
            if tt == 2 and m > 5:
                continue
            e = p * tt
            # b: tm < s
            s = tt * m + 1
            vp = s * (p - 1)
            out.append(CatalogEntry(
                _id("3.2.4-3", p=p, m=m, t=tt), "3.2.4-3", p, s, f"1 + S^{m}", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(MULT, -m, 0), (ADD, m, 0)], "r": 0, "g_y": 0, "case": "b"},
                ref="double point, multiplicative and alpha_p boundaries"))
            out.append(CatalogEntry(
                _id("3.2.5-b", p=p, m=m, t=tt), "3.2.5-b", p, s, f"1 + T^{m}", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(ADD, m, 0), (MULT, -m, 0)], "r": 0, "g_y": 0, "case": "b",
                          "delta2": vp, "delta1": vp - (p - 1) * tt * m},
                ref="classification case b: delta2 = v(p) = delta1 + (p-1)tm"))
            # c: tm = s
            s = tt * m
            vp = s * (p - 1)
            out.append(CatalogEntry(
                _id("3.2.4-4", p=p, m=m, t=tt), "3.2.4-4", p, s, f"lam^p*T^-{m} + 1", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(ETALE, m, 0), (MULT, -m, 0)], "r": 0, "g_y": 0, "case": "c"},
                ref="double point, etale and multiplicative boundaries"))
            out.append(CatalogEntry(
                _id("3.2.5-c", p=p, m=m, t=tt), "3.2.5-c", p, s, f"1 + T^{m}", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(ETALE, m, 0), (MULT, -m, 0)], "r": 0, "g_y": 0, "case": "c",
                          "delta1": 0, "delta2": vp},
                ref="classification case c: delta1 = 0, delta2 = v(p)"))
            # d: tm < s
            s = tt * m + 1
            out.append(CatalogEntry(
                _id("3.2.4-5", p=p, m=m, t=tt), "3.2.4-5", p, s, f"1 + lam^p*S^-{m}", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(ETALE, m, 0), (ADD, -m, 0)], "r": 0, "g_y": 0, "case": "d"},
                ref="double point, etale and alpha_p boundaries"))
            out.append(CatalogEntry(
                _id("3.2.5-d", p=p, m=m, t=tt), "3.2.5-d", p, s, f"1 + lam^p*T^-{m}", thickness=e,
                params={"m": m, "t": tt},
                expected={"types": [(ETALE, m, 0), (ADD, -m, 0)], "r": 0, "g_y": 0, "case": "d",
                          "delta2": 0, "delta1": (p - 1) * tt * m},
                ref="classification case d: delta1 = delta2 + (p-1)tm, delta2 = 0"))
            # e: n + tm < s
            n = 1
            s = n + tt * m + 1
            out.append(CatalogEntry(
                _id("3.2.4-6", p=p, m=m, t=tt), "3.2.4-6", p, s, f"1 + pi^{n * p}*S^{m}", thickness=e,
                params={"m": m, "t": tt, "n": n},
                expected={"types": [(ADD, -m, 0), (ADD, m, 0)], "r": 0, "g_y": 0, "case": "e"},
                ref="double point, two alpha_p boundaries"))
            d1 = (p - 1) * (s - (n + tt * m))
            out.append(CatalogEntry(
                _id("3.2.5-e", p=p, m=m, t=tt), "3.2.5-e", p, s, f"1 + pi^{n * p}*T^{m}", thickness=e,
                params={"m": m, "t": tt, "n": n},
                expected={"types": [(ADD, -m, 0), (ADD, m, 0)], "r": 0, "g_y": 0, "case": "e",
                          "delta1": d1, "delta2": d1 + (p - 1) * tt * m},
                ref="classification case e: delta1 = (p-1)(v(lam) - (n+tm)), delta2 = delta1 + (p-1)tm"))
    for r in (p, 2 * p):
        eq = "*".join(f"(T - pi - {i}*pi^20)" for i in range(1, r + 1))
        printed = _half(r - 2, p - 1)  # (r-2)(p-2)/2
        out.append(CatalogEntry(
            _id("3.2.2-2", p=p, r=r), "3.2.2-2", p, 1, eq, thickness=p, params={"r": r},
            expected={"types": [(ETALE, 0, 0), (ETALE, 0, 0)], "r": r,
                      "g_y": printed},
            derived={"types": [(ETALE, 0, 0), (ETALE, 0, 0)], "r": r, "g_y": (r - 2) * (p - 1) // 2},
            note="split on both boundaries: the printed (r-2)(p-2)/2 disagrees with the local "
                 "Riemann-Hurwitz formula, which gives (r-2)(p-1)/2",
            ref="double point with 2p points above it"))
    return out


def build_catalog(primes=PRIMES) -> list[CatalogEntry]:
    out = []
    for p in primes:
        out += _disc_entries(p) + _smooth_entries(p) + _double_entries(p)
    return out


def select(entries, pattern: str | None):
    if not pattern:
        return list(entries)
    return [e for e in entries if e.id.startswith(pattern) or pattern in e.id]


# -- running --

@dataclass
class EntryResult:
    id: str
    status: str  # "pass" | "divergence" | "fail" | "error"
    computed: dict
    mismatches: list
    note: str = ""
    report_consistent: bool = True
    discrepancies: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"id": self.id, "status": self.status, "computed": self.computed,
                "mismatches": self.mismatches, "note": self.note, "consistent": self.report_consistent}


def _types_match(expected, computed) -> bool:
    """Boundary types compared as multisets; h = None is a wildcard."""
    if len(expected) != len(computed):
        return False
    pool = list(computed)
    for g, m, h in expected:
        hit = next((c for c in pool if c[0] == g and c[1] == m and (h is None or c[2] == h)), None)
        if hit is None:
            return False
        pool.remove(hit)
    return True


def compute_entry(entry: CatalogEntry) -> tuple[dict, bool]:
    c = entry.build()
    rep = analyze(c)
    p = entry.p
    out = {"types": [(b["group"], b["m"], b["h"]) for b in rep["boundaries"]],
           "r": rep["branch"]["r"]}
    if "g_y" in rep:
        out["g_y"] = rep["g_y"]
    if "double_point" in rep:
        dp = rep["double_point"]
        out["case"] = dp["case"]
        out["delta1"] = dp["delta1"]
        out["delta2"] = dp["delta2"]
        out["t"] = dp["t"]
        out["signed_m"] = dp["signed_m"]
        out["n"] = dp["n"]
    if "profile" in rep:
        out["profile_agree"] = rep["profile"]["agree"]
    if "kato" in rep:
        out["kato"] = rep["kato"]
    out["oracle"] = [(o["method"], o.get("g_y")) for o in rep.get("oracle", [])]
    if entry.family.startswith("2.3.1"):
        d = boundary_types(c)[0]
        cd = cap_data(d, p)
        oracle = oracle_cap_genus(d, p)
        out["cap_r"] = cd.r_cap
        out["cap_genus"] = cd.special_genus
        out["cap_genus_oracle"] = oracle
    return out, consistent(rep) and out.get("cap_genus") == out.get("cap_genus_oracle", out.get("cap_genus"))


def _compare(expected: dict, computed: dict) -> list:
    bad = []
    for k, v in expected.items():
        if k == "types":
            if not _types_match(v, computed.get("types", [])):
                bad.append(("types", v, computed.get("types")))
        elif computed.get(k) != v:
            bad.append((k, v, computed.get(k)))
    return bad


def run_entry(entry: CatalogEntry) -> EntryResult:
    try:
        computed, ok = compute_entry(entry)
    except KummerError as exc:
        return EntryResult(entry.id, "error", {}, [("exception", type(exc).__name__, str(exc))], entry.note, False)
    bad = _compare(entry.expected, computed)
    if not bad:
        status = "pass"
    elif entry.derived is not None and not _compare(entry.derived, computed):
        status = "divergence"
    else:
        status = "fail"
    if not ok:
        status = "fail"
    return EntryResult(entry.id, status, computed, bad, entry.note, ok, discrepancies())


def run_catalog(entries, jobs: int = 1) -> list[EntryResult]:
    entries = list(entries)
    if jobs <= 1:
        return [run_entry(e) for e in entries]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(run_entry, entries, chunksize=4))
    # workers keep their own registries; merge them here, first message per key wins
    for res in results:
        for key, msg in res.discrepancies.items():
            report_discrepancy(key, msg)
    return results
