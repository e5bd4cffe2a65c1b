"""Coefficient ring R: a totally ramified tower over Z_p containing zeta_p.

The tower is Z_p -> Z_p[lam] -> Z_p[pi] with lam = zeta_p - 1 a root of the
Eisenstein polynomial Phi_p(1 + x), followed by an optional Eisenstein step
pi^s = lam.  The composite ring is Z_p[pi] / E(pi) with
E(pi) = Phi_p(1 + pi^s), an Eisenstein polynomial of degree e = s(p - 1), so

    v(pi) = 1,   v(lam) = s,   v(p) = e.

A `Scalar` is pi^shift * r with r a unit of R known modulo pi^rprec
(floating-point style precision).  Zero at finite precision is a separate
state: `is_zero()` is True and `valuation()` raises PrecisionError.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache

from .errors import PrecisionError
from .gf import get_field, is_prime

DEFAULT_PRECISION = 64
EXACT = 1 << 40


class RingTower:
    def __init__(self, p: int, extra_ramification: int = 1, base_precision: int = DEFAULT_PRECISION):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if extra_ramification < 1:
            raise ValueError("extra_ramification must be >= 1")
        if base_precision < 2:
            raise ValueError("base_precision must be >= 2")
        self.p = p
        self.s = extra_ramification
        self.e_abs = extra_ramification * (p - 1)
        self.residue_degree = 1
        e = self.e_abs
        self.M = -(-base_precision // e) + 1
        self.pM = p**self.M
        self.cap = e * (self.M - 1)
        self.base_precision = base_precision
        # pi^e = sum_j red[j] * pi^(s j), from Phi_p(1 + y) = sum_j C(p, j+1) y^j
        self._red = [(self.s * j, (-math.comb(p, j + 1)) % self.pM) for j in range(p - 1)]
        # E(pi) = pi^e + p B(pi);  p / pi^e = -1/B
        B = [0] * e
        for j in range(p - 1):
            B[self.s * j] = math.comb(p, j + 1) // p
        self._U = None
        self._U = _vneg(self._vinv(B), self.pM)
        self._pi_pows = {0: self._unit_vec(1)}
        self.residue_field = get_field(p, 1)

    # -- identity / serialisation --
    @property
    def v_lambda(self) -> int:
        return self.s

    @property
    def v_p(self) -> int:
        return self.e_abs

    @property
    def steps(self) -> list[str]:
        out = [f"lam^{self.p - 1} + ... : Phi_{self.p}(1 + lam) = 0"]
        if self.s > 1:
            out.append(f"pi^{self.s} - lam = 0")
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "extra_ram": self.s, "precision": self.base_precision, "steps": self.steps}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "RingTower":
        if isinstance(data, str):
            data = json.loads(data)
        return make_tower(data["p"], data.get("extra_ram", 1), data.get("precision", DEFAULT_PRECISION))

    def __repr__(self):
        return f"RingTower(p={self.p}, v(lam)={self.s}, v(p)={self.e_abs}, prec={self.cap})"

    def __eq__(self, other):
        return isinstance(other, RingTower) and (self.p, self.s, self.cap) == (other.p, other.s, other.cap)

    def __hash__(self):
        return hash((self.p, self.s, self.cap))

    # -- raw vector arithmetic in Z/p^M [pi]/E --
    def _unit_vec(self, c: int) -> tuple:
        return (c % self.pM,) + (0,) * (self.e_abs - 1)

    def _vmul(self, a, b) -> tuple:
        e, pM = self.e_abs, self.pM
        prod = _convolve(a, b)
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                c %= pM
                base = k - e
                for off, r in self._red:
                    prod[base + off] += c * r
        return tuple(x % pM for x in prod[:e]) if len(prod) >= e else tuple(x % pM for x in prod) + (0,) * (e - len(prod))

    def _vinv(self, a) -> tuple:
        """Inverse of a unit vector by Newton iteration."""
        p, pM = self.p, self.pM
        c0 = a[0] % p
        if c0 == 0:
            raise ZeroDivisionError("not a unit")
        y = self._unit_vec(pow(c0, -1, p))
        prec = 1
        two = self._unit_vec(2)
        while prec < self.e_abs * self.M:
            ay = self._vmul(a, y)
            y = self._vmul(y, tuple((t - u) % pM for t, u in zip(two, ay)))
            prec *= 2
        return y

    def _vshift_up(self, a, k: int) -> tuple:
        """a * pi^k."""
        if k == 0:
            return a
        return self._vmul(a, self._pi_pow(k))

    def _pi_pow(self, k: int) -> tuple:
        v = self._pi_pows.get(k)
        if v is None:
            e = self.e_abs
            if k < e:
                v = tuple(1 if i == k else 0 for i in range(e))
            elif k == e:
                red = [0] * e
                for off, r in self._red:
                    red[off] = r
                v = tuple(red)
            else:
                v = self._vmul(self._pi_pow(k // 2), self._pi_pow(k - k // 2))
            self._pi_pows[k] = v
        return v

    def _vval(self, a, bound: int) -> int | None:
        """Valuation of the stored vector, or None if >= bound."""
        e, p = self.e_abs, self.p
        best = None
        for i, c in enumerate(a):
            if c:
                vp = 0
                while c % p == 0:
                    c //= p
                    vp += 1
                v = e * vp + i
                if best is None or v < best:
                    best = v
        if best is None or best >= bound:
            return None
        return best

    def _vdiv_pi(self, a, k: int) -> tuple:
        """a / pi^k for a vector of valuation >= k."""
        if k == 0:
            return a
        e, p, pM = self.e_abs, self.p, self.pM
        q, j = divmod(k, e)
        if q:
            pq = p**q
            a = tuple(c // pq for c in a)
            a = self._vmul(a, self._pow_U(q))
        for _ in range(j):
            c0 = a[0] // p
            rest = list(a[1:]) + [0]
            tail = self._vmul(self._unit_vec(c0), self._U)
            # c0' * U * pi^(e-1): only the constant of U*c0' lands on pi^(e-1) after shift
            shifted = self._vshift_up(tail, e - 1)
            a = tuple((x + y) % pM for x, y in zip(rest, shifted))
        return a

    @lru_cache(maxsize=None)
    def _pow_U(self, q: int) -> tuple:
        if q == 1:
            return self._U
        return self._vmul(self._pow_U(q - 1), self._U)

    # -- element constructors --
    def scalar(self, n: int = 0) -> "Scalar":
        if n == 0:
            return Scalar(self, self._unit_vec(0), EXACT, 0)
        return Scalar._make(self, self._unit_vec(n), 0, self.cap)

    def zero(self, absprec: int | None = None) -> "Scalar":
        return Scalar(self, self._unit_vec(0), EXACT if absprec is None else absprec, 0)

    def one(self) -> "Scalar":
        return self.scalar(1)

    @property
    def pi(self) -> "Scalar":
        return Scalar(self, self._unit_vec(1), 1, self.cap)

    @property
    def lam(self) -> "Scalar":
        return Scalar(self, self._unit_vec(1), self.s, self.cap)

    @property
    def zeta(self) -> "Scalar":
        return self.one() + self.lam

    def p_elem(self) -> "Scalar":
        return self.scalar(self.p)

    def from_digits(self, digits: dict[int, int], absprec: int | None = None) -> "Scalar":
        """sum_i digits[i] * pi^i with integer digits (any integers)."""
        acc = self.zero(absprec)
        for i, c in digits.items():
            if c:
                acc = acc + self.scalar(c) * self.pi_power(i)
        return acc

    def pi_power(self, k: int) -> "Scalar":
        return Scalar(self, self._unit_vec(1), k, self.cap)

    def lift(self, x) -> "Scalar":
        """Fixed section k -> R on the prime field: c -> integer in [0, p)."""
        return self.scalar(int(x))


def _convolve(a, b) -> list:
    # Kronecker substitution: pack into big ints, multiply once
    n, m = len(a), len(b)
    bound = max(max(a), max(b), 1)
    bits = (bound * bound * min(n, m)).bit_length() + 1
    A = 0
    for x in reversed(a):
        A = (A << bits) | x
    B = 0
    for x in reversed(b):
        B = (B << bits) | x
    C = A * B
    mask = (1 << bits) - 1
    out = []
    for _ in range(n + m - 1):
        out.append(C & mask)
        C >>= bits
    return out


def _vneg(a, pM):
    return tuple((-x) % pM for x in a)


class Scalar:
    """pi^shift * r, r a unit known modulo pi^rprec; rprec == 0 means zero."""

    __slots__ = ("tower", "r", "shift", "rprec")

    def __init__(self, tower: RingTower, r: tuple, shift: int, rprec: int):
        self.tower = tower
        self.r = r
        self.shift = shift
        self.rprec = rprec

    @staticmethod
    def _make(tower: RingTower, r, shift: int, rprec: int) -> "Scalar":
        rprec = min(rprec, tower.cap)
        if rprec <= 0:
            return Scalar(tower, tower._unit_vec(0), shift + max(rprec, 0), 0)
        v = tower._vval(r, rprec)
        if v is None:
            return Scalar(tower, tower._unit_vec(0), shift + rprec, 0)
        if v:
            r = tower._vdiv_pi(r, v)
        return Scalar(tower, r, shift + v, rprec - v)

    # -- queries --
    def is_zero(self) -> bool:
        return self.rprec == 0

    @property
    def absprec(self) -> int:
        return self.shift + self.rprec

    @property
    def guaranteed_precision(self) -> int:
        return self.absprec

    def valuation(self) -> int:
        if self.rprec == 0:
            raise PrecisionError(f"precision exhausted: element is O(pi^{self.shift})")
        return self.shift

    def val_or(self, default):
        return default if self.rprec == 0 else self.shift

    def residue(self):
        F = self.tower.residue_field
        if self.rprec == 0:
            if self.shift >= 1:
                return F.zero
            raise PrecisionError("residue undetermined: element is O(1)")
        if self.shift < 0:
            raise ValueError("residue of an element of negative valuation")
        if self.shift > 0:
            return F.zero
        return F(self.r[0] % self.tower.p)

    # -- arithmetic --
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return self.tower.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = self.tower
        if self.rprec == 0 and other.rprec == 0:
            return T.zero(min(self.absprec, other.absprec))
        if self.rprec == 0:
            self, other = other, self
        if other.rprec == 0:
            if other.absprec <= self.shift:
                return T.zero(other.absprec)
            return Scalar(T, self.r, self.shift, min(self.rprec, other.absprec - self.shift))
        m = min(self.shift, other.shift)
        a = T._vshift_up(self.r, self.shift - m)
        b = T._vshift_up(other.r, other.shift - m)
        r = tuple((x + y) % T.pM for x, y in zip(a, b))
        return Scalar._make(T, r, m, min(self.absprec, other.absprec) - m)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.tower, _vneg(self.r, self.tower.pM), self.shift, self.rprec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = self.tower
        if self.rprec == 0 or other.rprec == 0:
            if self.rprec == 0 and other.rprec == 0:
                return T.zero(self.absprec + other.absprec)
            z, x = (self, other) if self.rprec == 0 else (other, self)
            return T.zero(z.absprec + x.shift)
        return Scalar(T, T._vmul(self.r, other.r), self.shift + other.shift, min(self.rprec, other.rprec))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.rprec == 0:
            raise PrecisionError("cannot invert an element indistinguishable from zero")
        T = self.tower
        return Scalar(T, T._vinv(self.r), -self.shift, self.rprec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_pi(self, k: int) -> "Scalar":
        """Exact multiplication by pi^k (k may be negative)."""
        if self.rprec == 0:
            return self.tower.zero(self.absprec + k) if self.absprec < EXACT // 2 else self
        return Scalar(self.tower, self.r, self.shift + k, self.rprec)

    def __eq__(self, other):
        """Equality within the joint precision."""
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Scalar is unhashable: equality is precision dependent")

    # -- serialisation --
    def digits(self) -> dict[int, int]:
        """pi-adic digits in {0..p-1} up to the absolute precision."""
        out = {}
        x = self
        while not x.is_zero() and x.shift < self.absprec:
            k = x.shift
            c = x.mul_pi(-k).residue().to_int()
            out[k] = c
            x = x - self.tower.scalar(c).mul_pi(k)
        return out

    def __str__(self):
        if self.rprec == 0:
            return f"O(pi^{self.absprec})"
        terms = [f"{c}*pi^{i}" if i else str(c) for i, c in sorted(self.digits().items())]
        return " + ".join(terms) + f" + O(pi^{self.absprec})"

    __repr__ = __str__


def make_tower(p: int, extra_ramification: int = 1, base_precision: int = DEFAULT_PRECISION) -> RingTower:
    return _make_tower_cached(p, extra_ramification, base_precision)


@lru_cache(maxsize=64)
def _make_tower_cached(p, s, prec):
    return RingTower(p, s, prec)


def valuation(x: Scalar) -> int:
    return x.valuation()


def residue(x: Scalar):
    return x.residue()
