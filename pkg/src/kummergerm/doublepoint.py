"""Genus-0 degree-p covers at double points that are etale on the generic fibre.

The germ is R[[S,T]]/(ST - pi^e), e = p t.  Side 2 is the boundary where T
is a unit (series in T), side 1 the boundary where S is a unit.  The five
normal forms, with M > 0 prime to p and s = v(lam):

    a  X^p = T^h              (mu_p, 0, h)    / (mu_p, 0, -h)
    b  X^p = 1 + T^M          (mu_p, -M, 0)   / (alpha_p, M, 0), tM < s
    c  X^p = 1 + T^M          (mu_p, -M, 0)   / (Z/pZ, M, 0),    tM = s
    d  X^p = 1 + lam^p T^-M   (Z/pZ, M, 0)    / (alpha_p, -M, 0)
    e  X^p = 1 + pi^(np) T^M  (alpha_p, -M, 0)/ (alpha_p, M, 0),  n + tM < s

listed as (T side) / (S side).  In every case delta2 - delta1 equals
m1 * t * (p - 1) with m1 the S-side invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .branch import branch_count
from .degeneration import ADD, ETALE, MULT, DegenerationType, classify_boundary
from .errors import InconsistencyError
from .genus import rh_genus
from .series import CoverSpec, GermDescriptor, parse_cover

CASES = ("a", "b", "c", "d", "e")


@dataclass
class DoubleClassification:
    case_label: str  # a..e or "split"
    t: int
    m: int
    n: int
    h: int
    delta1: int
    delta2: int
    side1: DegenerationType
    side2: DegenerationType
    swapped: bool
    normalized_equation: CoverSpec | None = None

    @property
    def signed_m(self) -> int:
        """Exponent with delta2 - delta1 = signed_m * t * (p - 1)."""
        return self.side1.m if self.case_label != "split" else 0

    def to_json(self) -> dict:
        return {
            "case": self.case_label,
            "t": self.t,
            "m": self.m,
            "signed_m": self.signed_m,
            "n": self.n,
            "h": self.h,
            "delta1": self.delta1,
            "delta2": self.delta2,
            "side1": self.side1.to_json(),
            "side2": self.side2.to_json(),
            "swapped": self.swapped,
            "normalized_equation": self.normalized_equation.equation if self.normalized_equation else None,
        }


def _match(dT: DegenerationType, dO: DegenerationType, t: int, s: int, p: int):
    """Case data (label, M, n, h) if (T side, other side) fit a normal form."""
    if dT.group == ETALE and dT.m == 0 and dO.group == ETALE and dO.m == 0:
        return ("split", 0, 0, 0)
    if dT.group == MULT and dO.group == MULT:
        if dT.m == 0 and dO.m == 0 and (dT.h + dO.h) % p == 0:
            return ("a", 0, 0, dT.h)
        return None
    if dT.group == MULT and dT.m < 0:
        M = -dT.m
        if dO.group == ADD and dO.m == M and dO.level_n == t * M and t * M < s:
            return ("b", M, 0, 0)
        if dO.group == ETALE and dO.m == M and t * M == s:
            return ("c", M, 0, 0)
        return None
    if dT.group == ETALE and dT.m > 0:
        M = dT.m
        if dO.group == ADD and dO.m == -M and dO.level_n == s - t * M:
            return ("d", M, s, 0)
        return None
    if dT.group == ADD and dT.m < 0:
        M = -dT.m
        if dO.group == ADD and dO.m == M and dO.level_n == dT.level_n + t * M and dO.level_n < s:
            return ("e", M, dT.level_n, 0)
    return None


def _normal_form(label: str, M: int, n: int, h: int, p: int) -> str:
    if label == "a":
        return f"T^{h}"
    if label in ("b", "c"):
        return f"1 + T^{M}"
    if label == "d":
        return f"1 + lam^p*T^-{M}"
    if label == "e":
        return f"1 + pi^{n * p}*T^{M}"
    return "(1 + T)^p"


def classify_double_cover(c: CoverSpec) -> DoubleClassification:
    if not c.germ.is_double:
        raise InconsistencyError("classify_double_cover needs a double-point germ")
    T = c.tower
    p, s, e = T.p, T.v_lambda, c.germ.thickness
    if e % p:
        raise InconsistencyError(f"thickness {e} is not divisible by p={p}; g_y = 0 is impossible")
    t = e // p
    br = branch_count(c)
    if br.r:
        raise InconsistencyError(f"generic fibre is ramified (r={br.r}); the normal forms need r = 0")
    d1 = classify_boundary(c.boundary(1))
    d2 = classify_boundary(c.boundary(2))
    if not (d1.split and d2.split):
        # split on both sides with r = 0 is the purity case: Y is not local
        g_y = rh_genus(p, 0, 0, [d1, d2])
        if g_y:
            raise InconsistencyError(f"g_y = {g_y} != 0")
    swapped = False
    hit = _match(d2, d1, t, s, p)
    if hit is None:
        hit = _match(d1, d2, t, s, p)
        swapped = hit is not None
    if hit is None:
        raise InconsistencyError(
            f"boundary types {d1.label()} (side 1) and {d2.label()} (side 2) fit no normal form "
            f"with t={t}, v(lam)={s}")
    label, M, n, h = hit
    side2, side1 = (d1, d2) if swapped else (d2, d1)
    cls = DoubleClassification(label, t, M, n, h, side1.different, side2.different, side1, side2, swapped)
    check_case_invariants(cls, T)
    cls.normalized_equation = parse_cover(_normal_form(label, M, n, h, p), T, c.germ,
                                          label=f"normal form of {c.label or c.equation}")
    return cls


def check_case_invariants(cls: DoubleClassification, tower) -> None:
    p, s, vp = tower.p, tower.v_lambda, tower.v_p
    t, M, n = cls.t, cls.m, cls.n
    d1, d2 = cls.delta1, cls.delta2
    expected = {
        "split": (0, 0),
        "a": (vp, vp),
        "b": (vp - (p - 1) * t * M, vp),
        "c": (0, vp),
        "d": ((p - 1) * t * M, 0),
        "e": ((p - 1) * (s - (n + t * M)), (p - 1) * (s - n)),
    }[cls.case_label]
    if (d1, d2) != expected:
        raise InconsistencyError(
            f"case {cls.case_label}: differents ({d1}, {d2}) differ from the normal form's {expected}")
    if d2 - d1 != cls.signed_m * t * (p - 1):
        raise InconsistencyError("delta2 - delta1 != m t (p-1)")


# -- criteria --

@dataclass
class Diagnosis:
    verdict: bool
    notes: list = field(default_factory=list)
    inconsistent: bool = False

    def __bool__(self):
        return self.verdict


def is_smooth_image(r: int, d: DegenerationType) -> Diagnosis:
    notes = []
    if d.group == ETALE and d.m == 0:
        return Diagnosis(False, ["split boundary: p points above x, not unibranch"])
    smooth = r == d.m + 1
    bad = False
    if d.group == MULT and smooth and r not in (0, 1):
        notes.append("multiplicative type with smooth y needs r in {0, 1}")
        bad = True
    if smooth and r == 1 and d.group != MULT:
        notes.append("r = 1 and y smooth force a multiplicative reduction")
        bad = True
    notes.append(f"r = {r}, m + 1 = {d.m + 1}")
    return Diagnosis(smooth, notes, bad)


def is_double_point(r: int, d1: DegenerationType, d2: DegenerationType, thickness: int, p: int) -> Diagnosis:
    notes = []
    if thickness % p:
        return Diagnosis(False, [f"thickness {thickness} not divisible by p={p}"])
    ok = r == d1.m + d2.m
    notes.append(f"r = {r}, m1 + m2 = {d1.m + d2.m}")
    bad = False
    if ok and r == 0 and (d1.h + d2.h) % p:
        notes.append(f"h1 + h2 = {d1.h + d2.h} != 0 mod p")
        bad = True
    return Diagnosis(ok and not bad, notes, bad)


# -- variation of the different --

@dataclass
class DifferentProfile:
    samples: list  # (t', formula, substitution)
    plateau: tuple | None
    from_side: int  # side at t' = 0

    @property
    def agree(self) -> bool:
        return all(a == b for _, a, b in self.samples)

    def to_json(self) -> dict:
        return {"from_side": self.from_side, "plateau": list(self.plateau) if self.plateau else None,
                "samples": [{"t": tt, "formula": a, "substitution": b} for tt, a, b in self.samples],
                "agree": self.agree}

    def csv(self) -> str:
        rows = ["t,delta_formula,delta_substitution,agree"]
        rows += [f"{tt},{a},{b},{int(a == b)}" for tt, a, b in self.samples]
        return "\n".join(rows) + "\n"


def different_profile(cls: DoubleClassification, c: CoverSpec) -> DifferentProfile:
    T = c.tower
    p, vp, t = T.p, T.v_p, cls.t
    sigma = abs(cls.signed_m) * (p - 1)
    # oriented T-side series: side 2, or side 1 when the normal form swaps sides
    base = c.boundary(1) if cls.swapped else c.boundary(2)
    by_T = []
    for j in range(t + 1):
        g = base.substitute_monomial(T.pi_power(p * j), 1)
        by_T.append(classify_boundary(g).different)
    # t' = 0 sits at the smaller endpoint
    if cls.delta1 <= cls.delta2:
        lo, hi, sub, side0 = cls.delta1, cls.delta2, by_T[::-1], 1
    else:
        lo, hi, sub, side0 = cls.delta2, cls.delta1, by_T, 2
    samples = []
    for tt in range(t + 1):
        val = min(vp, lo + sigma * tt, hi + sigma * (t - tt))
        samples.append((tt, val, sub[tt]))
    if samples[0][1] != lo or samples[-1][1] != hi:
        raise InconsistencyError("profile endpoints disagree with delta1, delta2")
    capped = [tt for tt, v, _ in samples if v == vp]
    plateau = (capped[0], capped[-1]) if capped else None
    return DifferentProfile(samples, plateau, side0)


def double_germ(thickness: int) -> GermDescriptor:
    return GermDescriptor("double", thickness)
