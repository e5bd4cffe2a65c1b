"""Invariants of plane curve germs over finite fields by blowing up.

delta = sum of m_P (m_P - 1) / 2 over the infinitely near points P of
the germ; the number of branches is the number of smooth infinitely near
points where the process stops.  Points that are only defined over an
extension are handled one Frobenius orbit at a time, weighted by the
orbit size, so the results are geometric invariants.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .errors import NonReducedError, ResolutionLimitError, UsageError
from .gf import FFElem, FiniteField, get_field, roots_with_multiplicity

DEFAULT_BLOWUP_LIMIT = 64


class BiPoly:
    """Polynomial in z, t over a finite field: {(i, j): c} for c z^i t^j."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FiniteField, coeffs=None):
        self.field = field
        clean = {}
        for k, c in (coeffs or {}).items():
            if not isinstance(c, FFElem):
                c = field(c)
            if c:
                clean[k] = c
        self.coeffs = clean

    @classmethod
    def var(cls, field, name):
        return cls(field, {(1, 0) if name == "z" else (0, 1): 1})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly(self.field, {(0, 0): other})
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return BiPoly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly(self.field, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, BiPoly):
            other = BiPoly(self.field, {(0, 0): other})
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            c = other if isinstance(other, FFElem) else self.field(other)
            return BiPoly(self.field, {k: v * c for k, v in self.coeffs.items()})
        out = {}
        for (a, b), c in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                k = (a + a2, b + b2)
                out[k] = out[k] + c * c2 if k in out else c * c2
        return BiPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BiPoly(self.field, {(0, 0): 1})
        for _ in range(n):
            out = out * self
        return out

    def multiplicity(self) -> int:
        return min(a + b for a, b in self.coeffs)

    def degree(self) -> int:
        return max(a + b for a, b in self.coeffs)

    def is_pth_power(self) -> bool:
        p = self.field.p
        return all(a % p == 0 and b % p == 0 for a, b in self.coeffs)

    def translate_z(self, alpha: FFElem) -> "BiPoly":
        """f(z + alpha, t)."""
        p = self.field.p
        out = {}
        for (a, b), c in self.coeffs.items():
            for i in range(a + 1):
                binom = math.comb(a, i) % p
                if not binom:
                    continue
                term = c * binom * (alpha ** (a - i)) if a - i else c * binom
                k = (i, b)
                out[k] = out[k] + term if k in out else term
        return BiPoly(self.field, out)

    def linear_change(self, a, b, c, d) -> "BiPoly":
        """f(a z + b t, c z + d t)."""
        Z = BiPoly(self.field, {(1, 0): a, (0, 1): b})
        T = BiPoly(self.field, {(1, 0): c, (0, 1): d})
        out = BiPoly(self.field)
        for (i, j), coef in self.coeffs.items():
            out = out + (Z ** i) * (T ** j) * coef
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for (a, b), c in sorted(self.coeffs.items()):
            mono = "*".join(x for x in (f"z^{a}" if a else "", f"t^{b}" if b else "") if x)
            parts.append(f"{c.to_int() if c.field.d == 1 else c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


@dataclass
class SingularityInvariants:
    delta: int
    branches: int
    multiplicity_sequence: list = field(default_factory=list)
    blowups: int = 0

    @property
    def genus(self) -> int:
        return self.delta - self.branches + 1

    def to_json(self) -> dict:
        return {"delta": self.delta, "branches": self.branches, "genus": self.genus,
                "multiplicity_sequence": self.multiplicity_sequence, "blowups": self.blowups}


class _State:
    def __init__(self, limit):
        self.delta = 0
        self.branches = 0
        self.seq = []
        self.blowups = 0
        self.limit = limit


def _frobenius_orbits(roots, q: int):
    """Group roots into orbits of x -> x^q; returns [(representative, size)]."""
    seen = set()
    out = []
    for x, _ in sorted(roots, key=lambda rm: rm[0].v):
        key = x.v
        if key in seen:
            continue
        size = 0
        y = x
        while True:
            seen.add(y.v)
            size += 1
            y = y ** q
            if y == x:
                break
        out.append((x, size))
    return out


def _chart_z(f: BiPoly, m: int, alpha: FFElem | None) -> BiPoly:
    """Strict transform under z = t (z1 + alpha), centred at z1 = 0."""
    out = {}
    for (a, b), c in f.coeffs.items():
        out[(a, a + b - m)] = c
    g = BiPoly(f.field, out)
    return g.translate_z(alpha) if alpha is not None and alpha else g


def _chart_t(f: BiPoly, m: int) -> BiPoly:
    """Strict transform under t = z t1, centred at t1 = 0."""
    return BiPoly(f.field, {(a + b - m, b): c for (a, b), c in f.coeffs.items()})


def _walk(f: BiPoly, K: FiniteField, weight: int, st: _State) -> None:
    if f.is_zero():
        raise NonReducedError("germ is identically zero")
    m = f.multiplicity()
    if m == 0:
        raise UsageError("germ does not pass through the origin")
    st.seq.append(m)
    if m == 1:
        st.branches += weight
        return
    st.delta += weight * m * (m - 1) // 2
    st.blowups += 1
    if st.blowups > st.limit:
        raise ResolutionLimitError(f"resolution needs more than {st.limit} blow-ups")
    cone = [f.coeffs.get((a, m - a), K.zero) for a in range(m + 1)]
    nonzero = [c for c in cone if c]
    if len(nonzero) == 1 and cone[0]:
        roots, L = [], K
    else:
        L, roots = roots_with_multiplicity(cone, K, max_degree=max(12, m))
    for alpha, size in _frobenius_orbits(roots, K.q):
        field_ = get_field(K.p, math.lcm(K.d, alpha.minimal_degree()))
        _walk(_chart_z(f, m, alpha), field_, weight * size, st)
    if not cone[m]:
        _walk(_chart_t(f, m), K, weight, st)


def resolve(f: BiPoly, limit: int = DEFAULT_BLOWUP_LIMIT) -> SingularityInvariants:
    if f.is_pth_power():
        raise NonReducedError("germ is a p-th power, hence not reduced")
    st = _State(limit)
    _walk(f, f.field, 1, st)
    return SingularityInvariants(st.delta, st.branches, st.seq, st.blowups)


def branches(f: BiPoly, limit: int = DEFAULT_BLOWUP_LIMIT) -> int:
    return resolve(f, limit).branches


# -- parsing --

_FIELD_RE = re.compile(r"^\s*(?:GF|F)\(?\s*(\d+)\s*(?:\^\s*(\d+))?\s*\)?\s*$")


def parse_field(name: str) -> FiniteField:
    m = _FIELD_RE.match(name)
    if not m:
        raise UsageError(f"cannot parse field {name!r}; use GF(p) or GF(p^d)")
    return get_field(int(m.group(1)), int(m.group(2) or 1))


def parse_germ(text: str, field: FiniteField | str) -> BiPoly:
    """Polynomial in z, t; '=' is read as 'minus'."""
    if isinstance(field, str):
        field = parse_field(field)
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        text = f"({lhs}) - ({rhs})"
    toks = re.findall(r"\d+|[zt]|[-+*^()]", text.replace(" ", ""))
    if "".join(toks) != text.replace(" ", ""):
        raise UsageError(f"cannot parse germ {text!r}")
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take():
        pos[0] += 1
        return toks[pos[0] - 1]

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term() * sign
        while peek() in ("+", "-"):
            op = take()
            acc = acc + term() if op == "+" else acc - term()
        return acc

    def term():
        acc = factor()
        while peek() == "*":
            take()
            acc = acc * factor()
        return acc

    def factor():
        tok = take()
        if tok == "(":
            base = expr()
            if take() != ")":
                raise UsageError("unbalanced parentheses")
        elif tok.isdigit():
            base = BiPoly(field, {(0, 0): int(tok)})
        elif tok in ("z", "t"):
            base = BiPoly.var(field, tok)
        else:
            raise UsageError(f"unexpected token {tok!r}")
        if peek() == "^":
            take()
            base = base ** int(take())
        return base

    out = expr()
    if peek() is not None:
        raise UsageError(f"trailing input in {text!r}")
    return out


# -- Artin-Schreier curves --

def artin_schreier_plane_model(p: int, m: int) -> dict:
    """Local equations of the projective closure of t^m (z^p - z) = 1.

    The affine part is smooth: dF/dz = -t^m vanishes only on t = 0 where
    F = -1.  Both singular points lie on the line at infinity W = 0.
    """
    F = get_field(p)
    at_0_1_0 = parse_germ(f"z^{p} - z*t^{p - 1} - t^{m + p}", F)  # coordinates z, W
    at_1_0_0 = parse_germ(f"t^{m} - t^{m}*z^{p - 1} - z^{m + p}", F)  # coordinates W, t
    return {"degree": m + p, "points": {"[0:1:0]": at_0_1_0, "[1:0:0]": at_1_0_0}}


def artin_schreier_smooth_genus(p: int, m: int, limit: int = DEFAULT_BLOWUP_LIMIT) -> int:
    """Genus of the smooth projective model of z^p - z = t^-m, by resolution."""
    if m % p == 0:
        raise UsageError(f"pole order {m} must be prime to p={p}")
    model = artin_schreier_plane_model(p, m)
    d = model["degree"]
    deltas = [resolve(g, limit).delta for g in model["points"].values()]
    return (d - 1) * (d - 2) // 2 - sum(deltas)


def kummer_germ(p: int, M: int, d: int = 1) -> BiPoly:
    """z^p - t^M."""
    return parse_germ(f"z^{p} - t^{M}", get_field(p, d))
