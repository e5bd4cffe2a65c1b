"""Branch points of X^p = f on the generic fibre of a germ.

Roots are located by Newton polygons; a point counts when the order of f
there is prime to p.  Non-reduced branch divisors are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MultiplicityError, PrecisionError
from .series import CoverSpec, LaurentPoly
from .tower import RingTower, Scalar


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v(a_i)); slopes are rise over run."""

    vertices: tuple  # ((i, v), ...) with v a Fraction

    @property
    def segments(self) -> list[tuple[Fraction, int]]:
        out = []
        for (i0, v0), (i1, v1) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(v1 - v0, i1 - i0), i1 - i0))
        return out

    def root_valuations(self) -> list[tuple[Fraction, int]]:
        """(valuation, number of roots) for each segment."""
        return [(-s, n) for s, n in self.segments]

    def count_roots(self, lo=0, hi=math.inf) -> int:
        """Roots with lo < v < hi."""
        return sum(n for v, n in self.root_valuations() if lo < v < hi)

    @property
    def degree_span(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    def to_json(self) -> dict:
        return {
            "vertices": [[i, str(v)] for i, v in self.vertices],
            "slopes": [[str(s), n] for s, n in self.segments],
        }


def newton_polygon(F: LaurentPoly) -> NewtonPolygon:
    if F.is_zero():
        raise PrecisionError("Newton polygon of a series that is zero at precision")
    pts = sorted((i, Fraction(c.valuation())) for i, c in F.coeffs.items())
    hull: list = []
    for pt in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


# -- determinants over K with valuation pivoting --

def determinant(rows: list[list[Scalar]], tower: RingTower) -> Scalar:
    """Gaussian elimination choosing the pivot of least valuation."""
    a = [list(r) for r in rows]
    n = len(a)
    det = tower.one()
    for col in range(n):
        best = None
        for r in range(col, n):
            x = a[r][col]
            if not x.is_zero() and (best is None or x.shift < a[best][col].shift):
                best = r
        if best is None:
            floor = min(a[r][col].absprec for r in range(col, n))
            return tower.zero(floor + det.val_or(0))
        if best != col:
            a[col], a[best] = a[best], a[col]
            det = -det
        piv = a[col][col]
        det = det * piv
        inv = piv.inverse()
        for r in range(col + 1, n):
            x = a[r][col]
            if x.is_zero():
                continue
            fac = x * inv
            a[r] = [a[r][j] - fac * a[col][j] if j > col else a[r][j] for j in range(n)]
    return det


def _dense(F: LaurentPoly) -> list[Scalar]:
    lo, hi = F.span()
    if lo < 0:
        raise ValueError("expected a polynomial")
    return [F[i] for i in range(hi + 1)]


def resultant(F: LaurentPoly, G: LaurentPoly) -> Scalar:
    a, b = _dense(F), _dense(G)
    m, n = len(a) - 1, len(b) - 1
    T = F.tower
    size = m + n
    if size == 0:
        return T.one()
    zero = T.zero()
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return determinant(rows, T)


def derivative(F: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(F.tower, {k - 1: c * k for k, c in F.coeffs.items() if k}, F.floor, F.var)


def discriminant_nonzero(F: LaurentPoly) -> bool:
    if F.span()[1] - F.span()[0] <= 1:
        return True
    return not resultant(F, derivative(F)).is_zero()


# -- branch counting --

@dataclass
class BranchData:
    r: int
    d_eta: int
    points: list = field(default_factory=list)  # (description, count)
    polygons: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"r": self.r, "d_eta": self.d_eta,
                "points": [[d, n] for d, n in self.points],
                "newton_polygons": [np.to_json() for np in self.polygons]}


def germ_region(c: CoverSpec) -> tuple:
    return (0, c.germ.thickness) if c.germ.is_double else (0, math.inf)


def branch_count(c: CoverSpec) -> BranchData:
    p = c.p
    lo, hi = germ_region(c)
    origin_order = 0
    r = 0
    points = []
    polys = []
    relevant = []
    for idx, (poly, k) in enumerate(c.factors):
        if poly.is_zero():
            raise PrecisionError("factor is zero at precision")
        a = poly.span()[0]
        origin_order += a * k
        if k % p == 0:
            continue
        G = poly.mul_T(-a)
        if G.span()[1] == 0:
            continue
        np_ = newton_polygon(G)
        polys.append(np_)
        n = np_.count_roots(lo, hi)
        if n:
            if not discriminant_nonzero(G):
                raise MultiplicityError(
                    f"factor {idx} has repeated roots; non-reduced branch divisors are not supported")
            relevant.append((idx, G))
            r += n
            vals = [str(v) for v, cnt in np_.root_valuations() if lo < v < hi]
            points.append((f"factor {idx}: roots of valuation {','.join(vals)}", n))
    for i in range(len(relevant)):
        for j in range(i + 1, len(relevant)):
            if resultant(relevant[i][1], relevant[j][1]).is_zero():
                raise MultiplicityError(
                    f"factors {relevant[i][0]} and {relevant[j][0]} share a root; branch divisor not reduced")
    if not c.germ.is_double and origin_order % p:
        r += 1
        points.append((f"origin (order {origin_order})", 1))
    return BranchData(r, r * (p - 1), points, polys)


def projective_branch_count(c: CoverSpec) -> int:
    """Branch points of X^p = f over all of P^1_K (f read as a rational function of T).

    Every root of every factor counts, together with 0 and infinity when
    the order of f there is prime to p.  Used to glue discs onto the germ.
    """
    p = c.p
    total = 0
    order0 = 0
    order_inf = 0
    polys = []
    for poly, k in c.factors:
        lo, hi = poly.span()
        order0 += lo * k
        order_inf -= hi * k
        if k % p == 0 or hi == lo:
            continue
        G = poly.mul_T(-lo)
        if not discriminant_nonzero(G):
            raise MultiplicityError("repeated root in a factor; branch divisor not reduced")
        polys.append(G)
        total += hi - lo
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if resultant(polys[i], polys[j]).is_zero():
                raise MultiplicityError("two factors share a root; branch divisor not reduced")
    return total + (order0 % p != 0) + (order_inf % p != 0)
