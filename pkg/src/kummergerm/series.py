"""Series over R and over the residue field.

`LaurentPoly` is a finite element of the boundary ring R[[T]]{T^-1}: a
Laurent polynomial with `Scalar` coefficients.  All boundary computations
here stay inside finite Laurent polynomials; Kummer-class changes are
carried as a numerator and a p-th-power denominator rather than by
expanding an inverse.

`ResidueSeries` is a truncated element of k((t)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NonReducedError, PrecisionError, UsageError
from .gf import FFElem, FiniteField
from .tower import RingTower, Scalar

SPLIT = math.inf


class WindowError(PrecisionError):
    """An operation needed exponents outside the series window."""


class LaurentPoly:
    __slots__ = ("tower", "coeffs", "floor", "var", "window")

    def __init__(self, tower: RingTower, coeffs=None, floor: int | None = None, var: str = "T", window=None):
        self.tower = tower
        self.var = var
        self.window = window
        fl = floor if floor is not None else 1 << 40
        clean = {}
        for k, c in (coeffs or {}).items():
            if isinstance(c, int):
                c = tower.scalar(c)
            if c.is_zero():
                fl = min(fl, c.absprec)
            else:
                clean[k] = c
        self.coeffs = clean
        self.floor = fl
        if window is not None and clean:
            lo, hi = window
            if min(clean) < lo or max(clean) > hi:
                raise WindowError(f"exponents {min(clean)}..{max(clean)} leave window {window}")

    # -- constructors --
    @classmethod
    def constant(cls, tower, c, var="T"):
        return cls(tower, {0: c}, var=var)

    @classmethod
    def monomial(cls, tower, k: int, c=1, var="T"):
        return cls(tower, {k: c}, var=var)

    def _new(self, coeffs, floor=None):
        return LaurentPoly(self.tower, coeffs, self.floor if floor is None else floor, self.var, self.window)

    # -- queries --
    @property
    def pi_precision(self) -> int:
        """Smallest absolute precision among the coefficients."""
        ps = [c.absprec for c in self.coeffs.values()]
        return min(ps + [self.floor])

    def is_zero(self) -> bool:
        return not self.coeffs

    def exponents(self):
        return sorted(self.coeffs)

    def span(self) -> tuple[int, int]:
        if not self.coeffs:
            raise PrecisionError("series indistinguishable from zero")
        return min(self.coeffs), max(self.coeffs)

    def __getitem__(self, k: int) -> Scalar:
        return self.coeffs.get(k, self.tower.zero())

    def gauss_valuation(self) -> int:
        if not self.coeffs:
            raise PrecisionError(f"precision exhausted: series is O(pi^{self.floor})")
        v = min(c.shift for c in self.coeffs.values())
        if v >= self.floor:
            raise PrecisionError(f"precision exhausted: Gauss valuation >= {self.floor}")
        return v

    def residue(self, field: FiniteField | None = None) -> "ResidueSeries":
        F = field or self.tower.residue_field
        out = {}
        for k, c in self.coeffs.items():
            if c.shift < 0:
                raise ValueError("residue of a series with negative Gauss valuation")
            if c.shift == 0:
                r = c.residue()
                if r:
                    out[k] = F(r)
        if self.floor < 1:
            raise PrecisionError("residue undetermined at this precision")
        return ResidueSeries(F, out)

    # -- arithmetic --
    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Scalar)):
            return LaurentPoly.constant(self.tower, other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        floor = min(self.floor, other.floor)
        for k, c in other.coeffs.items():
            if k in out:
                s = out[k] + c
                if s.is_zero():
                    floor = min(floor, s.absprec)
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = c
        return self._new(out, floor)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[int, Scalar] = {}
        # zero coefficients of one factor still bound the product's precision
        floor = 1 << 40
        if self.floor < 1 << 40 and other.coeffs:
            floor = min(floor, self.floor + min(c.shift for c in other.coeffs.values()))
        if other.floor < 1 << 40 and self.coeffs:
            floor = min(floor, other.floor + min(c.shift for c in self.coeffs.values()))
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                prod = a * b
                out[k] = out[k] + prod if k in out else prod
        return self._new(out, floor)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.coeffs) != 1:
                raise ValueError("only monomials can be inverted as Laurent polynomials")
            (k, c), = self.coeffs.items()
            return self._new({-k * (-n): c.inverse() ** (-n)})
        result = LaurentPoly.constant(self.tower, 1, self.var)
        result.window = self.window
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_pi(self, k: int) -> "LaurentPoly":
        return self._new({e: c.mul_pi(k) for e, c in self.coeffs.items()},
                         self.floor + k if self.floor < 1 << 40 else self.floor)

    def mul_T(self, k: int) -> "LaurentPoly":
        return self._new({e + k: c for e, c in self.coeffs.items()})

    def substitute_monomial(self, c: Scalar, k: int, var: str | None = None) -> "LaurentPoly":
        """Image under T -> c * X^k (X the new variable)."""
        out: dict[int, Scalar] = {}
        for e, a in self.coeffs.items():
            term = a * (c ** e)
            out[e * k] = out[e * k] + term if e * k in out else term
        return LaurentPoly(self.tower, out, self.floor, var or self.var, self.window)

    def with_window(self, window) -> "LaurentPoly":
        return LaurentPoly(self.tower, self.coeffs, self.floor, self.var, window)

    def equals(self, other: "LaurentPoly") -> bool:
        return (self - other).is_zero()

    # -- serialisation --
    def to_json(self) -> list:
        return [[k, str(c)] for k, c in sorted(self.coeffs.items())]

    def __str__(self):
        if not self.coeffs:
            return f"O(pi^{self.floor})"
        parts = []
        for k, c in sorted(self.coeffs.items()):
            mono = "" if k == 0 else (f"*{self.var}" if k == 1 else f"*{self.var}^{k}")
            parts.append(f"({scalar_label(c)}){mono}")
        return " + ".join(parts)

    __repr__ = __str__


def scalar_label(c: Scalar) -> str:
    """Short form pi^v * (unit residue) used in reports."""
    if c.is_zero():
        return f"O(pi^{c.absprec})"
    u = c.mul_pi(-c.shift).residue().to_int()
    if c.shift == 0:
        return str(u)
    return f"{u}*pi^{c.shift}" if u != 1 else f"pi^{c.shift}"


def gauss_valuation(f: LaurentPoly) -> int:
    return f.gauss_valuation()


class ResidueSeries:
    """Element of k((t)) known for exponents < prec (prec None: exact)."""

    __slots__ = ("field", "coeffs", "prec")

    def __init__(self, field: FiniteField, coeffs=None, prec: int | None = None):
        self.field = field
        self.prec = prec
        self.coeffs = {k: (v if isinstance(v, FFElem) else field(v)) for k, v in (coeffs or {}).items()
                       if v and (prec is None or k < prec)}

    def _new(self, coeffs, prec):
        return ResidueSeries(self.field, coeffs, prec)

    def is_zero(self) -> bool:
        return not self.coeffs

    def ord(self) -> int:
        if not self.coeffs:
            raise PrecisionError("residue series is zero to its precision")
        return min(self.coeffs)

    def coeff(self, k: int) -> FFElem:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient t^{k} beyond precision t^{self.prec}")
        return self.coeffs.get(k, self.field.zero)

    def __add__(self, other):
        if isinstance(other, (int, FFElem)):
            other = ResidueSeries(self.field, {0: other})
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return self._new(out, _minprec(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ResidueSeries":
        return self._new({k: v * c for k, v in self.coeffs.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, FFElem)):
            return self.scale(other)
        out: dict[int, FFElem] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out[i + j] + a * b if i + j in out else a * b
        prec = None
        if self.prec is not None and other.coeffs:
            prec = self.prec + min(other.coeffs)
        if other.prec is not None and self.coeffs:
            cand = other.prec + min(self.coeffs)
            prec = cand if prec is None else min(prec, cand)
        return self._new(out, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use inverse() for negative powers")
        result = ResidueSeries(self.field, {0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "ResidueSeries":
        out = {k - 1: v * k for k, v in self.coeffs.items() if k % self.field.p}
        return self._new(out, None if self.prec is None else self.prec - 1)

    def inverse(self, relprec: int) -> "ResidueSeries":
        """1/self to relative t-adic precision relprec."""
        v = self.ord()
        if self.prec is not None:
            relprec = min(relprec, self.prec - v)
        u0 = self.coeffs[v].inverse()
        # normalise to 1 + higher terms and invert by recursion on coefficients
        b = {k - v: c * u0 for k, c in self.coeffs.items()}
        inv = {0: self.field.one}
        for n in range(1, relprec):
            acc = self.field.zero
            for k in range(1, n + 1):
                if k in b and (n - k) in inv:
                    acc = acc + b[k] * inv[n - k]
            if acc:
                inv[n] = -acc
        return self._new({k - v: c * u0 for k, c in inv.items()}, relprec - v)

    def truncate(self, prec: int) -> "ResidueSeries":
        return self._new(self.coeffs, _minprec(self.prec, prec))

    def is_pth_power(self) -> bool:
        p = self.field.p
        return all(k % p == 0 for k in self.coeffs)

    def pth_root(self) -> "ResidueSeries":
        p = self.field.p
        if not self.is_pth_power():
            raise ValueError("not a p-th power")
        return self._new({k // p: v.pth_root() for k, v in self.coeffs.items()},
                         None if self.prec is None else -(-self.prec // p))

    def equals(self, other: "ResidueSeries") -> bool:
        return (self - other).is_zero()

    def to_json(self) -> list:
        return [[k, v.serialize()] for k, v in sorted(self.coeffs.items())]

    def __str__(self):
        if not self.coeffs:
            body = "0"
        else:
            body = " + ".join(f"{v}*t^{k}" if k else str(v) for k, v in sorted(self.coeffs.items()))
        return body if self.prec is None else f"{body} + O(t^{self.prec})"

    __repr__ = __str__


def _minprec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# -- germs and covers --

@dataclass(frozen=True)
class GermDescriptor:
    kind: str  # "smooth" | "double"
    thickness: int = 0

    def __post_init__(self):
        if self.kind not in ("smooth", "double"):
            raise UsageError(f"unknown germ kind {self.kind!r}")
        if self.kind == "double" and self.thickness < 1:
            raise UsageError("a double point needs thickness e >= 1")

    @property
    def is_double(self) -> bool:
        return self.kind == "double"

    def to_json(self) -> dict:
        d = {"kind": self.kind}
        if self.is_double:
            d["thickness"] = self.thickness
        return d


SMOOTH = GermDescriptor("smooth")


@dataclass
class CoverSpec:
    """X^p = f on a germ, f kept as a product of Laurent-polynomial factors."""

    tower: RingTower
    germ: GermDescriptor
    factors: list  # [(LaurentPoly in T, exponent)]
    label: str = ""
    equation: str = ""
    _f: LaurentPoly | None = field(default=None, repr=False)

    @property
    def p(self) -> int:
        return self.tower.p

    @property
    def f(self) -> LaurentPoly:
        if self._f is None:
            acc = LaurentPoly.constant(self.tower, 1)
            for poly, k in self.factors:
                acc = acc * (poly ** k)
            if acc.is_zero():
                raise UsageError("f must be nonzero")
            self._f = acc
        return self._f

    def boundary(self, side: int = 2) -> LaurentPoly:
        """Boundary series; on a smooth germ the only boundary is side 2 (T)."""
        if not self.germ.is_double:
            if side != 2:
                raise UsageError("a smooth germ has a single boundary")
            return self.f
        return localize_double(self.f, self.germ, side)

    def to_json(self) -> dict:
        return {
            "tower": {"p": self.tower.p, "extra_ram": self.tower.s, "precision": self.tower.base_precision},
            "germ": self.germ.to_json(),
            "equation": self.equation,
            "label": self.label,
        }


def localize_double(f: LaurentPoly, germ: GermDescriptor, side: int) -> LaurentPoly:
    """Boundary series of a double-point element written in T (S = pi^e / T).

    side 2 is the boundary of the prime (pi, S): the series in T itself.
    side 1 is the boundary of the prime (pi, T): substitute T = pi^e S^-1.
    """
    if not germ.is_double:
        raise UsageError("localize_double needs a double-point germ")
    if side == 2:
        return f
    if side != 1:
        raise UsageError("side must be 1 or 2")
    T = f.tower
    return f.substitute_monomial(T.pi_power(germ.thickness), -1, var="S")


# -- unit normal form and Kummer generator adjustment --

def normalize_unit(f: LaurentPoly) -> tuple[int, int, LaurentPoly]:
    """f = pi^a T^b u with residue(u) in k[[t]] having nonzero constant term."""
    a = f.gauss_valuation()
    g = f.mul_pi(-a)
    b = g.residue().ord()
    return a, b, g.mul_T(-b)


@dataclass
class KummerAdjustment:
    """g = numerator / witness^p with g - 1 of Gauss valuation `level`.

    `wbar` is residue((numerator - witness^p) / pi^level), so the residue of
    (g - 1)/pi^level is wbar / residue(witness)^p.  level is SPLIT when g is
    a p-th power to the working precision.
    """

    level: float
    numerator: LaurentPoly
    witness: LaurentPoly
    wbar: ResidueSeries | None
    steps: int = 0

    @property
    def g(self) -> LaurentPoly:
        if len(self.witness.coeffs) == 1 and 0 in self.witness.coeffs:
            return self.numerator * self.witness[0].inverse() ** self.numerator.tower.p
        raise ValueError("g is a quotient; use numerator and witness")

    @property
    def is_split(self) -> bool:
        return self.level == SPLIT


def kummer_adjust(f: LaurentPoly, max_steps: int = 10_000) -> KummerAdjustment:
    """Raise the level of f modulo p-th powers until it stops or reaches p*v(lam)."""
    T = f.tower
    p = T.p
    a, b, u = normalize_unit(f)
    if a % p or b % p:
        raise ValueError("kummer_adjust needs pi- and T-exponents divisible by p")
    A = u
    D = LaurentPoly.constant(T, 1).with_window(f.window)
    etale = p * T.v_lambda
    steps = 0
    while True:
        diff = A - D ** p
        if diff.is_zero() or _gv_or_none(diff) is None:
            if diff.pi_precision > etale:
                return KummerAdjustment(SPLIT, A, D, None, steps)
            raise PrecisionError(
                f"level undetermined: A - D^p is O(pi^{diff.pi_precision}) but certifying a p-th power "
                f"needs precision > {etale}")
        N = diff.gauss_valuation()
        if N > etale:
            return KummerAdjustment(SPLIT, A, D, None, steps)
        wbar = diff.mul_pi(-N).residue()
        if N == etale:
            return KummerAdjustment(N, A, D, wbar, steps)
        if not wbar.is_pth_power():
            if N % p:
                raise NonReducedError(
                    f"special fibre not reduced: boundary level {N} is not divisible by p={p}")
            return KummerAdjustment(N, A, D, wbar, steps)
        if N % p:
            raise NonReducedError(
                f"special fibre not reduced over this ring: level {N} needs a p-th root of pi")
        root = wbar.pth_root()
        C = LaurentPoly(T, {k: T.lift(c) for k, c in root.coeffs.items()}, window=f.window)
        D = D + C.mul_pi(N // p)
        steps += 1
        if steps > max_steps:
            raise PrecisionError("kummer_adjust did not terminate")


def _gv_or_none(f: LaurentPoly):
    try:
        return f.gauss_valuation()
    except PrecisionError:
        return None


# -- parsing --

class _Parser:
    def __init__(self, text: str, tower: RingTower, germ: GermDescriptor):
        self.text = text
        self.tower = tower
        self.germ = germ
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise UsageError(f"parse error in {self.text!r}: expected {expected or 'token'} at position {self.i}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.peek() is not None:
            raise UsageError(f"parse error in {self.text!r}: trailing {self.peek()!r}")
        return node

    # nodes: ("sum", [(sign, term)]), ("prod", [(atom, exponent)])
    def expr(self):
        terms = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        terms.append((sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
            terms.append((sign, self.term()))
        return ("sum", terms)

    def term(self):
        facs = [self.factor(1)]
        while self.peek() in ("*", "/"):
            op = self.take()
            facs.append(self.factor(-1 if op == "/" else 1))
        return ("prod", facs)

    def factor(self, sgn):
        atom = self.atom()
        k = 1
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() in ("-", "+"):
                neg = self.take() == "-"
            tok = self.take()
            if tok == "p":
                k = self.tower.p
            elif tok.isdigit():
                k = int(tok)
            else:
                raise UsageError(f"parse error in {self.text!r}: bad exponent {tok!r}")
            k = -k if neg else k
        return (atom, sgn * k)

    def atom(self):
        tok = self.take()
        if tok == "(":
            node = self.expr()
            self.take(")")
            return node
        if tok.isdigit():
            return ("const", int(tok))
        if tok in ("pi", "lam", "p", "T", "S", "zeta"):
            return ("sym", tok)
        raise UsageError(f"parse error in {self.text!r}: unknown symbol {tok!r}")

    # -- evaluation --
    def value(self, node) -> LaurentPoly:
        T = self.tower
        kind = node[0]
        if kind == "const":
            return LaurentPoly.constant(T, node[1])
        if kind == "sym":
            name = node[1]
            if name == "pi":
                return LaurentPoly.constant(T, T.pi)
            if name == "lam":
                return LaurentPoly.constant(T, T.lam)
            if name == "zeta":
                return LaurentPoly.constant(T, T.zeta)
            if name == "p":
                return LaurentPoly.constant(T, T.p)
            if name == "T":
                return LaurentPoly.monomial(T, 1)
            if name == "S":
                if not self.germ.is_double:
                    raise UsageError("S is only defined on a double-point germ")
                return LaurentPoly.monomial(T, -1, T.pi_power(self.germ.thickness))
        if kind == "sum":
            acc = None
            for sign, t in node[1]:
                v = self.value(t)
                v = v if sign > 0 else -v
                acc = v if acc is None else acc + v
            return acc
        if kind == "prod":
            acc = LaurentPoly.constant(T, 1)
            for atom, k in node[1]:
                acc = acc * _power(self.value(atom), k, T.p)
            return acc
        raise AssertionError(kind)

    def factors(self, node):
        """Top-level multiplicative structure as [(poly, exponent)]."""
        if node[0] == "sum" and len(node[1]) == 1:
            sign, term = node[1][0]
            out = []
            for atom, k in term[1]:
                poly = self.value(atom)
                if len(poly.coeffs) != 1 and k < 0:
                    k %= self.tower.p  # same Kummer class
                out.append((poly, k))
            if sign < 0:
                out.append((LaurentPoly.constant(self.tower, -1), 1))
            return out
        return [(self.value(node), 1)]


def _power(poly: LaurentPoly, k: int, p: int) -> LaurentPoly:
    if k < 0 and len(poly.coeffs) != 1:
        raise UsageError("negative powers are only allowed on monomials inside sums")
    return poly ** k


def _tokenize(text: str) -> list[str]:
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(text[i:j])
            i = j
        elif ch.isalpha():
            j = i
            while j < len(text) and text[j].isalpha():
                j += 1
            toks.append(text[i:j])
            i = j
        elif ch in "+-*/^()":
            toks.append(ch)
            i += 1
        else:
            raise UsageError(f"unexpected character {ch!r} in {text!r}")
    return toks


def parse_laurent(text: str, tower: RingTower, germ: GermDescriptor = SMOOTH) -> LaurentPoly:
    ps = _Parser(text, tower, germ)
    return ps.value(ps.parse())


def parse_cover(text: str, tower: RingTower, germ: GermDescriptor = SMOOTH, label: str = "") -> CoverSpec:
    ps = _Parser(text, tower, germ)
    factors = ps.factors(ps.parse())
    spans = [abs(e) for poly, _ in factors for e in poly.coeffs] or [1]
    m_max = max(max(spans), 1)
    window = (-4 * tower.p * m_max * max(1, len(factors)) - 4 * tower.p, 4 * tower.p * m_max * max(1, len(factors)) + 4 * tower.p)
    factors = [(poly.with_window(window), k) for poly, k in factors]
    return CoverSpec(tower, germ, factors, label=label, equation=text)


def laurent_from_json(data: list, tower: RingTower, var: str = "T") -> LaurentPoly:
    """[(exponent, scalar-string), ...] with scalar strings in the parser's syntax."""
    coeffs = {}
    for k, s in data:
        c = parse_laurent(str(s), tower)
        if set(c.coeffs) - {0}:
            raise UsageError(f"coefficient {s!r} must not involve T")
        coeffs[int(k)] = c[0]
    return LaurentPoly(tower, coeffs, var=var)
