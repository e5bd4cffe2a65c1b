"""Genus bookkeeping for degree-p covers of germs.

The central identity is the local Riemann-Hurwitz formula

    2 g_y - 2 = p (2 g_x - 2) + d_eta - d_s,

with d_s summing (m_i - 1)(p - 1) over radicial boundaries and over etale
boundaries with m_i != 0.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .degeneration import ADD, ETALE, DegenerationType
from .errors import InconsistencyError, InfeasibleError, ParityError

# -- discrepancy registry (deduplicated by key) --

_disc_lock = threading.Lock()
_discrepancies: dict[str, str] = {}


def report_discrepancy(key: str, message: str) -> bool:
    """Record a printed-versus-derived mismatch; True only the first time."""
    with _disc_lock:
        if key in _discrepancies:
            return False
        _discrepancies[key] = message
        return True


def discrepancies() -> dict[str, str]:
    with _disc_lock:
        return dict(_discrepancies)


def clear_discrepancies() -> None:
    with _disc_lock:
        _discrepancies.clear()


# -- local Riemann-Hurwitz --

@dataclass
class RHInput:
    p: int
    g_x: int
    d_eta: int
    boundaries: list

    def __post_init__(self):
        if self.d_eta % (self.p - 1):
            raise InconsistencyError(f"d_eta={self.d_eta} is not a multiple of p-1={self.p - 1}")
        if not self.boundaries:
            raise InconsistencyError("at least one boundary is required")


@dataclass
class RHReport:
    g_y: int
    d_s: int
    contributions: list = field(default_factory=list)
    rhs: int = 0

    def to_json(self) -> dict:
        return {"g_y": self.g_y, "d_s": self.d_s, "rhs": self.rhs,
                "boundaries": [{"type": lbl, "d_s": c} for lbl, c in self.contributions]}


def boundary_ds(d: DegenerationType, p: int) -> int:
    if d.group == ETALE and d.m == 0:
        return 0
    return (d.m - 1) * (p - 1)


def vanishing_cycles_genus(inp: RHInput) -> RHReport:
    p = inp.p
    contribs = [(d.label(), boundary_ds(d, p)) for d in inp.boundaries]
    d_s = sum(c for _, c in contribs)
    rhs = p * (2 * inp.g_x - 2) + inp.d_eta - d_s
    if rhs % 2:
        raise ParityError(f"parity violation: 2g_y - 2 = {rhs} is odd")
    g_y = (rhs + 2) // 2
    if g_y < 0:
        raise InfeasibleError(f"infeasible data: g_y = {g_y} < 0")
    return RHReport(g_y, d_s, contribs, rhs)


def rh_genus(p: int, g_x: int, d_eta: int, boundaries) -> int:
    return vanishing_cycles_genus(RHInput(p, g_x, d_eta, list(boundaries))).g_y


# -- closed forms --

def _half(num: int) -> int:
    if num % 2:
        raise ParityError(f"closed form is not an integer: {num}/2")
    return num // 2


def smooth_point_genus(r: int, d: DegenerationType, branches_at_y: int, p: int) -> int:
    if branches_at_y == 1:
        if r - d.m - 1 < 0:
            raise InfeasibleError(f"r - m - 1 = {r - d.m - 1} < 0")
        g = _half((r - d.m - 1) * (p - 1))
    elif branches_at_y == p:
        g = _half((r - 2) * (p - 1))
    else:
        raise InconsistencyError("a smooth germ has 1 or p branches above it")
    if g != rh_genus(p, 0, r * (p - 1), [d]):
        raise InconsistencyError("closed form disagrees with the vanishing-cycles formula")
    return g


PRINTED_SPLIT_DOUBLE = "split-double-point-genus"


def double_point_genus(r: int, d1: DegenerationType, d2: DegenerationType, branches_at_y: int, p: int) -> int:
    """Closed forms for 2, p+1 (side 1 split) and 2p branches above a node."""
    if branches_at_y == 2:
        if r - d1.m - d2.m < 0:
            raise InfeasibleError(f"r - m1 - m2 = {r - d1.m - d2.m} < 0")
        g = _half((r - d1.m - d2.m) * (p - 1))
    elif branches_at_y == p + 1:
        g = _half((r - d2.m - 1) * (p - 1))
    elif branches_at_y == 2 * p:
        g = _half((r - 2) * (p - 1))
        printed = (r - 2) * (p - 2)
        if printed != 2 * g:
            report_discrepancy(
                PRINTED_SPLIT_DOUBLE,
                "split double point: printed closed form (r-2)(p-2)/2 differs from the "
                f"vanishing-cycles value (r-2)(p-1)/2 (first seen at p={p}, r={r})")
    else:
        raise InconsistencyError("a double point has 2, p+1 or 2p branches above it")
    if g < 0:
        raise InfeasibleError(f"g_y = {g} < 0")
    if g != rh_genus(p, 0, r * (p - 1), [d1, d2]):
        raise InconsistencyError("closed form disagrees with the vanishing-cycles formula")
    return g


# -- Kato's formula and the wild different --

def kato_genus(n: int, g_x: int, delta_x: int, d_K: int, d_w: int) -> int:
    """g_y + delta_y - 1 as the formula states it."""
    return n * (g_x + delta_x - 1) + d_K - d_w


def lower_break(p: int, m: int) -> int:
    """i(sigma) for z^p - z = phi with pole order m prime to p.

    Uses the uniformizer y = z^a t^b of the extension (v(z) = -m, v(t) = p,
    -am + pb = 1) and sigma(z) = z + 1.
    """
    a = next(a for a in range(1, p) if (a * m) % p == p - 1)
    b = (1 + m * a) // p
    best = None
    for j in range(1, a + 1):
        if _binom_mod(a, j, p):
            val = p * b - m * (a - j)
            best = val if best is None else min(best, val)
    return best


def _binom_mod(n: int, k: int, p: int) -> int:
    return math.comb(n, k) % p


def wild_different_residue(phi, p: int | None = None) -> int:
    """v(different) - e + 1 for the residue extension z^p - z = phi.

    phi is a ResidueSeries (reduced first) or an integer pole order.
    """
    if isinstance(phi, int):
        if p is None:
            raise ValueError("p is required with an integer pole order")
        m = phi
    else:
        from .degeneration import artin_schreier_reduce
        p = phi.field.p
        _, m = artin_schreier_reduce(phi)
    if m == 0:
        return 0
    if m % p == 0:
        raise InconsistencyError(f"pole order {m} divisible by p after reduction")
    d = (p - 1) * lower_break(p, m)
    return d - p + 1


# -- genus of a reducible curve --

def total_arithmetic_genus(components, sing_points) -> int:
    return sum(components) + sum(sing_points)


def point_genus(delta: int, branches: int) -> int:
    return delta - branches + 1


# -- compactification accounting --

@dataclass(frozen=True)
class CapData:
    """The disc glued along a boundary: branch points on it and the genus
    of the special fibre of the cover over it."""

    r_cap: int
    special_genus: int
    label: str


def cap_data(d: DegenerationType, p: int) -> CapData:
    if d.group == ETALE:
        if d.m == 0:
            return CapData(0, 0, "split")
        return CapData(0, (d.m - 1) * (p - 1) // 2, "etale: smooth Artin-Schreier cap")
    if d.m > 0:
        if d.group != ADD:
            raise InconsistencyError(f"type {d.label()} is not realizable by a disc")
        return CapData(0, (d.m - 1) * (p - 1) // 2, "alpha_p: cap with a singular point")
    return CapData(1 - d.m, 0, "radicial: smooth cap")


@dataclass
class Accounting:
    g_YK: int
    g_Yk: int
    g_y: int
    caps: list

    def to_json(self) -> dict:
        return {"g_YK": self.g_YK, "g_Yk": self.g_Yk, "g_y": self.g_y,
                "caps": [{"r_cap": c.r_cap, "special_genus": c.special_genus, "kind": c.label}
                         for c in self.caps]}


def compactify_accounting(types, r: int, p: int, g_x: int = 0, cap_genus=None) -> Accounting:
    """Glue a disc along every boundary and compare both fibres.

    cap_genus(d) may supply the special genus of each cap (e.g. from the
    singularity oracle); otherwise the closed values are used.
    """
    if g_x:
        raise InconsistencyError("compactification is only set up for germs with g_x = 0")
    caps = []
    for d in types:
        c = cap_data(d, p)
        if cap_genus is not None:
            c = CapData(c.r_cap, cap_genus(d), c.label)
        caps.append(c)
    total_r = r + sum(c.r_cap for c in caps)
    twice = p * (2 * g_x - 2) + (p - 1) * total_r + 2
    if twice % 2:
        raise ParityError("generic fibre genus is not an integer")
    g_YK = twice // 2
    g_Yk = g_YK  # flatness
    g_y = g_Yk - sum(c.special_genus for c in caps)
    if g_y < 0:
        raise InfeasibleError(f"compactification gives g_y = {g_y} < 0")
    return Accounting(g_YK, g_Yk, g_y, caps)
