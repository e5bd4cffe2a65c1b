"""Finite fields F_{p^d} with compatible embeddings.

Each F_{p^d} is presented by a primitive polynomial chosen so that the
generator of F_{p^d} raised to (p^d - 1)/(p^k - 1) is the chosen generator
of F_{p^k} for every k | d (the Conway compatibility condition).  The
embedding F_{p^k} -> F_{p^d} is then a shift of discrete logarithms, and
embeddings along a chain a | b | c commute by construction.

Elements are stored as integers 0 <= v < q whose base-p digits are the
coefficients of the polynomial basis 1, x, ..., x^(d-1).
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

MAX_FIELD_SIZE = 1 << 20
ROOT_SEARCH_LIMIT = 200_000

_lock = threading.Lock()
_fields: dict[tuple[int, int], "FiniteField"] = {}
_moduli: dict[tuple[int, int], tuple[int, ...]] = {}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial arithmetic over F_p (coefficient lists, low degree first) --

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, mod, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    d = len(mod) - 1
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] = (prod[k - d + j] - c * mod[j]) % p
    return _trim(prod[:d])


def _ppowmod(base, e, mod, p):
    result = [1]
    while e:
        if e & 1:
            result = _pmulmod(result, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return result


def _peval_in(poly_coeffs, elem, mod, p):
    """Evaluate an F_p-polynomial at an element of F_p[x]/(mod)."""
    acc: list[int] = []
    for c in reversed(poly_coeffs):
        acc = _pmulmod(acc, elem, mod, p)
        if c:
            if not acc:
                acc = [0]
            acc[0] = (acc[0] + c) % p
            _trim(acc)
    return acc


def compatible_modulus(p: int, d: int) -> tuple[int, ...]:
    """Primitive monic polynomial of degree d satisfying the compatibility
    condition with every proper-divisor degree (cached)."""
    key = (p, d)
    if key in _moduli:
        return _moduli[key]
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if d == 1:
        # smallest primitive root g; modulus x - g
        order = p - 1
        for g in range(1, p):
            if p == 2 or all(pow(g, order // r, p) != 1 for r in prime_factors(order)):
                mod = ((-g) % p, 1)
                _moduli[key] = mod
                return mod
    q = p**d
    order = q - 1
    rs = prime_factors(order)
    subs = [k for k in range(1, d) if d % k == 0]
    sub_mods = {k: compatible_modulus(p, k) for k in subs}
    for idx in range(1, p**d):
        low = [(idx // p**i) % p for i in range(d)]
        mod = low + [1]
        x = [0, 1]
        if _ppowmod(x, order, mod, p) != [1]:
            continue
        if any(_ppowmod(x, order // r, mod, p) == [1] for r in rs):
            continue
        ok = True
        for k in subs:
            y = _ppowmod(x, order // (p**k - 1), mod, p)
            if _peval_in(list(sub_mods[k]), y, mod, p):
                ok = False
                break
        if ok:
            _moduli[key] = tuple(mod)
            return _moduli[key]
    raise RuntimeError(f"no compatible modulus for F_{p}^{d}")


class FiniteField:
    """F_{p^d} with log/antilog tables."""

    def __init__(self, p: int, d: int):
        q = p**d
        if q > MAX_FIELD_SIZE:
            raise ValueError(f"F_{p}^{d} exceeds the desk-scale limit")
        self.p = p
        self.d = d
        self.q = q
        self.modulus = compatible_modulus(p, d)
        mod = list(self.modulus)
        antilog = [0] * (q - 1)
        log = [-1] * q
        vec = [1] + [0] * (d - 1)
        for i in range(q - 1):
            v = 0
            for j in reversed(range(d)):
                v = v * p + vec[j]
            antilog[i] = v
            log[v] = i
            # multiply by x
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for j in range(d):
                    vec[j] = (vec[j] - top * mod[j]) % p
        self._antilog = antilog
        self._log = log
        self.zero = FFElem(self, 0)
        self.one = FFElem(self, 1)

    def __repr__(self):
        return f"GF({self.p}^{self.d})"

    def __call__(self, v) -> "FFElem":
        if isinstance(v, FFElem):
            return v.to_field(self)
        return FFElem(self, v % self.p)

    def from_int(self, v: int) -> "FFElem":
        """Element whose base-p digits are v's (polynomial-basis encoding)."""
        if not 0 <= v < self.q:
            raise ValueError("encoding out of range")
        return FFElem(self, v)

    @property
    def gen(self) -> "FFElem":
        return FFElem(self, self._antilog[1 % (self.q - 1)] if self.q > 2 else 1)

    def elements(self):
        for v in range(self.q):
            yield FFElem(self, v)

    def is_subfield_of(self, other: "FiniteField") -> bool:
        return self.p == other.p and other.d % self.d == 0

    # raw integer-level arithmetic
    def _add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        r, scale = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            r += ((da + db) % p) * scale
            scale *= p
        return r

    def _neg(self, a: int) -> int:
        p = self.p
        if p == 2:
            return a
        r, scale = 0, 1
        while a:
            a, da = divmod(a, p)
            r += ((-da) % p) * scale
            scale *= p
        return r

    def _mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._antilog[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        return self._antilog[(self._log[a] * e) % (self.q - 1)]


class FFElem:
    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.field is self.field:
                return self, other
            a, b = self.field, other.field
            if a.is_subfield_of(b):
                return self.to_field(b), other
            if b.is_subfield_of(a):
                return self, other.to_field(a)
            big = get_field(a.p, math.lcm(a.d, b.d))
            return self.to_field(big), other.to_field(big)
        if isinstance(other, int):
            return self, FFElem(self.field, other % self.field.p)
        return NotImplemented

    def to_field(self, target: FiniteField) -> "FFElem":
        src = self.field
        if target is src:
            return self
        if not src.is_subfield_of(target):
            raise ValueError(f"{src} does not embed in {target}")
        if self.v == 0:
            return target.zero
        shift = (target.q - 1) // (src.q - 1)
        return FFElem(target, target._antilog[(src._log[self.v] * shift) % (target.q - 1)])

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        a, b = c
        return FFElem(a.field, a.field._add(a.v, b.v))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.field, self.field._neg(self.v))

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        a, b = c
        return FFElem(a.field, a.field._add(a.v, a.field._neg(b.v)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        a, b = c
        return FFElem(a.field, a.field._mul(a.v, b.v))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return FFElem(self.field, self.field._pow(self.v, e))

    def inverse(self) -> "FFElem":
        return self ** -1

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        a, b = c
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, int):
            other = FFElem(self.field, other % self.field.p)
        if not isinstance(other, FFElem):
            return NotImplemented
        if other.field is not self.field:
            try:
                a, b = self._coerce(other)
            except ValueError:
                return False
            return a.v == b.v
        return self.v == other.v

    def __hash__(self):
        # hash on the image in the prime field when possible
        if self.v < self.field.p:
            return hash(("ff", self.field.p, self.v))
        return hash(("ff", self.field.p, self.field.d, self.v))

    def __bool__(self):
        return self.v != 0

    def is_zero(self) -> bool:
        return self.v == 0

    def pth_root(self) -> "FFElem":
        f = self.field
        return self ** (f.q // f.p)

    def frobenius(self, k: int = 1) -> "FFElem":
        return self ** (self.field.p**k)

    def minimal_degree(self) -> int:
        """Degree of the smallest subfield containing this element."""
        for k in range(1, self.field.d + 1):
            if self.field.d % k == 0 and self.frobenius(k) == self:
                return k
        return self.field.d

    def to_int(self) -> int:
        """Integer representative in [0, p) for prime-field elements."""
        if self.v >= self.field.p:
            raise ValueError(f"{self} is not in the prime field")
        return self.v

    def __int__(self):
        return self.to_int()

    def __repr__(self):
        f = self.field
        if self.v < f.p:
            return str(self.v)
        if self.v == 0:
            return "0"
        return f"x{f.d}^{f._log[self.v]}"

    def serialize(self) -> str:
        """Digits in the generator basis: 'c0+c1*x+...' of F_{p^d}."""
        f = self.field
        if f.d == 1:
            return str(self.v)
        digits, v = [], self.v
        for _ in range(f.d):
            v, r = divmod(v, f.p)
            digits.append(r)
        terms = [f"{c}*x^{i}" if i else str(c) for i, c in enumerate(digits) if c]
        return f"[GF({f.p}^{f.d})] " + ("+".join(terms) or "0")


def get_field(p: int, d: int = 1) -> FiniteField:
    key = (p, d)
    with _lock:
        f = _fields.get(key)
        if f is None:
            f = FiniteField(p, d)
            _fields[key] = f
        return f


class ResidueContext:
    """Append-only stand-in for an algebraically closed residue field.

    Tracks the smallest F_{p^d} containing every element handed out so far;
    extension requests only ever enlarge it.
    """

    def __init__(self, p: int):
        self.p = p
        self._degree = 1
        self._lock = threading.Lock()

    @property
    def field(self) -> FiniteField:
        return get_field(self.p, self._degree)

    @property
    def degree(self) -> int:
        return self._degree

    def extend(self, d: int) -> FiniteField:
        if d < 1:
            raise ValueError("degree must be positive")
        with self._lock:
            self._degree = math.lcm(self._degree, d)
            return get_field(self.p, self._degree)


@lru_cache(maxsize=None)
def residue_context(p: int) -> ResidueContext:
    return ResidueContext(p)


def extend_residue(p: int, d: int) -> FiniteField:
    """Field of the shared residue context for p after adjoining F_{p^d}."""
    return residue_context(p).extend(d)


# -- univariate root finding over finite fields (desk scale) --

def poly_eval(coeffs: list, x: FFElem) -> FFElem:
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divide_linear(coeffs: list, a: FFElem) -> list:
    """Quotient of coeffs (low first) by (X - a); assumes a is a root."""
    n = len(coeffs) - 1
    out = [a.field.zero] * n
    carry = a.field.zero
    for i in range(n, 0, -1):
        carry = coeffs[i] + carry * a
        out[i - 1] = carry
    return out


def roots_with_multiplicity(coeffs: list, base: FiniteField, max_degree: int = 12):
    """Roots of a polynomial over `base`, found in the smallest extension
    F_{q^D} where it splits.  Returns (field, [(root, multiplicity)])."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        return base, []
    for D in range(1, max_degree + 1):
        if base.q**D > ROOT_SEARCH_LIMIT:
            break
        field = get_field(base.p, base.d * D)
        cs = [c.to_field(field) if isinstance(c, FFElem) else field(c) for c in coeffs]
        found = []
        total = 0
        for x in field.elements():
            if poly_eval(cs, x) == 0:
                mult = 0
                cur = cs
                while len(cur) > 1 and poly_eval(cur, x) == 0:
                    cur = poly_divide_linear(cur, x)
                    mult += 1
                found.append((x, mult))
                total += mult
        if total == deg:
            return field, found
    raise ValueError("polynomial does not split within the degree bound")
