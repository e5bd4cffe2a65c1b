"""Reduction type of the torsor X^p = f on a boundary.

Conventions: radicial types carry m = -ord(omega) - 1 and h = res(omega);
etale types carry the Artin-Schreier conductor as m and h = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonReducedError, PrecisionError
from .gf import FiniteField
from .series import SPLIT, LaurentPoly, ResidueSeries, kummer_adjust, normalize_unit
from .tower import RingTower

ETALE = "etale"
MULT = "mult"
ADD = "add"
GROUP_LABEL = {ETALE: "Z/pZ", MULT: "mu_p", ADD: "alpha_p"}


@dataclass(frozen=True)
class ResidueDifferential:
    """omega = g(t) dt with g known below t^prec."""

    g: ResidueSeries | None
    ord: int | None  # None when omega = 0
    res: int

    @property
    def is_zero(self) -> bool:
        return self.ord is None

    def to_json(self) -> dict:
        return {"ord": self.ord, "res": self.res,
                "expansion": self.g.to_json() if self.g is not None else []}


@dataclass(frozen=True)
class DegenerationType:
    group: str
    m: int
    h: int = 0
    level_n: int = 0
    different: int | None = None
    omega: ResidueDifferential | None = None
    wbar: ResidueSeries | None = None
    split: bool = False

    @property
    def signature(self) -> tuple[str, int, int]:
        return (self.group, self.m, self.h)

    @property
    def radicial(self) -> bool:
        return self.group != ETALE

    def label(self) -> str:
        return f"({GROUP_LABEL[self.group]},{self.m},{self.h})"

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "m": self.m,
            "h": self.h,
            "n": self.level_n,
            "ord_omega": self.omega.ord if self.omega else None,
            "res_omega": self.omega.res if self.omega else None,
            "different": self.different,
            "split": self.split,
        }


def different_degree(d: DegenerationType, tower: RingTower) -> int:
    if d.group == ETALE:
        return 0
    if d.group == MULT:
        return tower.v_p
    return (tower.p - 1) * (tower.v_lambda - d.level_n)


def _differential(num: ResidueSeries, den: ResidueSeries, extra: int = 8) -> ResidueDifferential:
    """omega = num/den dt with den a nonzero exact Laurent polynomial."""
    if num.is_zero():
        return ResidueDifferential(None, None, 0)
    o = num.ord() - den.ord()
    relprec = max(0, -o) + extra
    g = num * den.inverse(relprec)
    g = g.truncate(o + relprec)
    res = g.coeff(-1).to_int() if o <= -1 else 0
    return ResidueDifferential(g, o, res)


def residue_dlog(u_bar: ResidueSeries) -> ResidueDifferential:
    """omega = du/u; constant (or p-th power) u gives omega = 0."""
    return _differential(u_bar.derivative(), u_bar)


def _radicial_m(omega: ResidueDifferential) -> int:
    return -omega.ord - 1


def artin_schreier_reduce(w: ResidueSeries) -> tuple[ResidueSeries, int]:
    """Polar part of w modulo c^p - c; returns (reduced polar part, conductor m)."""
    p = w.field.p
    polar = {k: c for k, c in w.coeffs.items() if k < 0}
    while True:
        bad = [k for k in polar if k % p == 0]
        if not bad:
            break
        k = min(bad)
        a = polar.pop(k)
        r = a.pth_root()
        j = k // p
        polar[j] = polar[j] + r if j in polar else r
        if not polar[j]:
            del polar[j]
    reduced = ResidueSeries(w.field, polar)
    m = -min(polar) if polar else 0
    return reduced, m


def classify_boundary(f: LaurentPoly) -> DegenerationType:
    T = f.tower
    p = T.p
    a, b, u = normalize_unit(f)
    if a % p:
        raise NonReducedError(f"special fibre not reduced: pi-adic order {a} of f is not divisible by p={p}")
    b0 = b % p
    ubar = u.residue()
    if b0:
        # T^b0 * unit: omega = b0 dt/t + du/u
        F = ubar.field
        ubar = ubar * ResidueSeries(F, {b0: 1})
        omega = residue_dlog(ubar)
        return DegenerationType(MULT, _radicial_m(omega), omega.res, 0, T.v_p, omega)
    # T^b with p | b is a p-th power, so u carries the class
    ka = kummer_adjust(u)
    if ka.level == SPLIT:
        return DegenerationType(ETALE, 0, 0, T.v_lambda, 0, None, None, True)
    N = int(ka.level)
    Dbar = ka.witness.residue()
    Dp = Dbar ** p
    if N == 0:
        abar = ka.numerator.residue()
        omega = residue_dlog(abar)
        if omega.is_zero:
            raise PrecisionError("multiplicative boundary with vanishing dlog")
        return DegenerationType(MULT, _radicial_m(omega), omega.res, 0, T.v_p, omega)
    if N == p * T.v_lambda:
        # polar part of W / D^p is all the Artin-Schreier class needs
        W = ka.wbar
        depth = max(0, -(W.ord() - Dp.ord())) + 2
        w = W * Dp.inverse(depth + 1)
        w = w.truncate(1)
        reduced, m = artin_schreier_reduce(w)
        return DegenerationType(ETALE, m, 0, T.v_lambda, 0, None, reduced, m == 0)
    n = N // p
    omega = _differential(ka.wbar.derivative(), Dp)
    if omega.is_zero:
        raise NonReducedError("additive boundary with exact residue form")
    return DegenerationType(ADD, _radicial_m(omega), omega.res, n, (p - 1) * (T.v_lambda - n), omega,
                            _wbar(ka.wbar, Dp))


def _wbar(W: ResidueSeries, Dp: ResidueSeries) -> ResidueSeries:
    if len(Dp.coeffs) == 1 and 0 in Dp.coeffs:
        return W * Dp.coeffs[0].inverse()
    return W * Dp.inverse(max(8, -W.ord() + 2))


def residue_field_of(f: LaurentPoly) -> FiniteField:
    return f.tower.residue_field
