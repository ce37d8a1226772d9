"""Exact univariate polynomials: characteristic polynomials, Sturm sequences,
real root isolation and refinement.

``UniPoly`` holds a dense ascending coefficient tuple.  Root finding works
over the rationals; arithmetic and :func:`char_poly` work over any
commutative coefficient ring (the parametric field included).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .interval import Interval


class UniPoly:
    """Dense univariate polynomial, ``coeffs[i]`` multiplies ``t**i``."""

    __slots__ = ("coeffs", "_int")

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) if isinstance(c, int) else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._int = None

    def integer_form(self) -> tuple:
        """(D, [c_0..c_d]) with integer c_i and self = sum c_i t^i / D (rational coefficients only)."""
        if self._int is None:
            den = 1
            for c in self.coeffs:
                d = Fraction(c).denominator
                if d != 1:
                    den = den * d // math.gcd(den, d)
            self._int = (den, [int(Fraction(c) * den) for c in self.coeffs])
        return self._int

    def exact_value(self, x) -> Fraction:
        """p(x) at a rational x through one integer Horner pass."""
        D, cs = self.integer_form()
        if not cs:
            return Fraction(0)
        x = Fraction(x)
        return Fraction(_homogeneous(cs, x.numerator, x.denominator), D * x.denominator ** (len(cs) - 1))

    @classmethod
    def from_roots(cls, roots) -> "UniPoly":
        p = cls([Fraction(1)])
        for r in roots:
            p = p * cls([-Fraction(r), Fraction(1)])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lc(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return self.coeffs == UniPoly([other]).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return self.to_string()

    def to_string(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if mono and cs == "1":
                body = mono
            elif mono:
                body = f"{cs}*{mono}" if "/" not in cs or cs[0].isdigit() else f"({cs})*{mono}"
            else:
                body = cs
            parts.append((" - " if neg else " + ") + body if parts else ("-" if neg else "") + body)
        return "".join(parts)

    # -- ring operations -------------------------------------------------------

    def _lift(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = UniPoly([self.coeffs[0] ** 0 if self.coeffs else 1])
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = self.coeffs[-1]
        return UniPoly([c / lc for c in self.coeffs])

    def divmod(self, other: "UniPoly"):
        """Quotient and remainder over a field."""
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.coeffs
        dl = d[-1]
        q = [0] * max(len(r) - len(d) + 1, 0)
        for k in range(len(r) - len(d), -1, -1):
            c = r[k + len(d) - 1] / dl
            q[k] = c
            if c != 0:
                for i, x in enumerate(d):
                    r[k + i] = r[k + i] - c * x
        return UniPoly(q), UniPoly(r[: len(d) - 1])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def map_coeffs(self, fn) -> "UniPoly":
        return UniPoly([fn(c) for c in self.coeffs])

    # -- interval evaluation ----------------------------------------------------

    def horner_interval(self, x: Interval) -> Interval:
        acc = Interval.point(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_interval(self, x: Interval) -> Interval:
        """Enclosure of the range over ``x`` (rational coefficients).

        Second-order Taylor form at the midpoint m:
        |p(m+h) - p(m) - p'(m) h| <= h^2/2 * sum i(i-1)|c_i| R^(i-2), R >= |x|.
        Tight for the narrow intervals produced by root refinement.
        """
        if x.lo == x.hi:
            return Interval.point(self.exact_value(x.lo))
        D, cs = self.integer_form()
        if len(cs) <= 1:
            return Interval.point(self.exact_value(0))
        m = x.mid
        r = x.hi - m
        pm = self.exact_value(m)
        dcs = [i * c for i, c in enumerate(cs)][1:]
        n, d = m.numerator, m.denominator
        dpm = Fraction(_homogeneous(dcs, n, d), D * d ** (len(dcs) - 1))
        R = math.ceil(max(abs(x.lo), abs(x.hi)))
        b2 = 0
        for i in range(len(cs) - 1, 1, -1):
            b2 = b2 * R + i * (i - 1) * abs(cs[i])
        spread = abs(dpm) * r + Fraction(b2, 2 * D) * r * r
        return Interval(pm - spread, pm + spread)


# ---------------------------------------------------------------------------
# characteristic polynomial


def char_poly(M: Sequence[Sequence]) -> UniPoly:
    """det(t*I - M) by Berkowitz's division-free recurrence."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if n == 0:
        return UniPoly([Fraction(1)])
    one = M[0][0] ** 0 if hasattr(M[0][0], "__pow__") else 1
    zero = one - one
    # coefficient vector, highest degree first
    vect = [one]
    for i in range(n):
        a = M[i][i]
        R = [M[i][k] for k in range(i)]
        C = [M[k][i] for k in range(i)]
        col = [one, -a]
        v = C
        for _ in range(i):
            col.append(-sum((r * x for r, x in zip(R, v)), zero))
            v = [sum((M[r][k] * v[k] for k in range(i)), zero) for r in range(i)]
        # lower-triangular Toeplitz (i+2) x (i+1) times vect
        new = []
        for r in range(i + 2):
            s = zero
            for k in range(min(r, i) + 1):
                s = s + col[r - k] * vect[k]
            new.append(s)
        vect = new
    return UniPoly(list(reversed(vect)))


# ---------------------------------------------------------------------------
# gcd and squarefree part over the rationals


def _to_int(p: UniPoly) -> list:
    den = 1
    for c in p.coeffs:
        d = Fraction(c).denominator
        den = den * d // math.gcd(den, d)
    out = [int(Fraction(c) * den) for c in p.coeffs]
    return _primitive(out)


def _primitive(cs: list) -> list:
    g = 0
    for c in cs:
        g = math.gcd(g, c)
        if g == 1:
            return cs
    return [c // g for c in cs] if g > 1 else cs


def _prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer coefficient lists (ascending)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        while r and r[-1] == 0:
            r.pop()
    return r


def gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd of rational polynomials (primitive remainder sequence)."""
    a, b = _to_int(p) if p else [], _to_int(q) if q else []
    if not a:
        return UniPoly(b).monic() if b else UniPoly()
    if not b:
        return UniPoly(a).monic()
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r) if r else []
    return UniPoly([Fraction(c) for c in a]).monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    """p / gcd(p, p'), monic."""
    if not p:
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree == 0:
        return UniPoly([Fraction(1)])
    g = gcd(p, p.derivative())
    q, r = p.divmod(g)
    assert not r
    return q.monic()


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation


def sturm_sequence(p: UniPoly) -> list:
    """Sturm chain of ``p`` as primitive integer coefficient lists.

    Terms are scaled by positive constants only, so sign variations are the
    same as for the textbook chain ``p, p', -rem(p, p'), ...``.
    """
    a = _to_int(p)
    if a[-1] < 0:
        a = [-c for c in a]
    b = _to_int(UniPoly([Fraction(c) for c in a]).derivative()) if len(a) > 1 else []
    seq = [a]
    if not b:
        return seq
    seq.append(b)
    while True:
        a, b = seq[-2], seq[-1]
        if len(b) == 1:
            break
        r = _prem(a, b)
        if not r:
            break
        # prem = lc(b)^k * rem with k = deg a - deg b + 1; we want -rem
        k = len(a) - len(b) + 1
        sign = -1 if (b[-1] < 0 and k % 2 == 1) else 1
        r = [-sign * c for c in r]
        seq.append(_primitive(r))
    return seq


def _homogeneous(cs: list, n: int, d: int) -> int:
    """sum c_i n^i d^(deg-i): the value at n/d scaled by d^deg."""
    acc = 0
    dp = 1
    for c in reversed(cs):
        acc = acc * n + c * dp
        dp *= d
    return acc


def _sign_at(cs: list, x: Fraction) -> int:
    acc = _homogeneous(cs, x.numerator, x.denominator)
    return (acc > 0) - (acc < 0)


def _variations(seq: list, x: Fraction) -> int:
    last = 0
    v = 0
    for cs in seq:
        s = _sign_at(cs, x)
        if s == 0:
            continue
        if last and s != last:
            v += 1
        last = s
    return v


class EndpointRoot(ValueError):
    pass


def sturm_count(p: UniPoly, a, b, seq: list | None = None) -> int:
    """Number of distinct real roots of squarefree ``p`` in the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if p(a) == 0 or p(b) == 0:
        raise EndpointRoot("interval endpoint is a root")
    seq = seq or sturm_sequence(p)
    return _variations(seq, a) - _variations(seq, b)


def cauchy_bound(p: UniPoly) -> Fraction:
    """Integer B with every real root strictly inside (-B, B)."""
    lc = abs(Fraction(p.lc))
    m = max((abs(Fraction(c)) for c in p.coeffs[:-1]), default=Fraction(0))
    return Fraction(math.floor(m / lc) + 2)


@dataclass(frozen=True)
class IsolatingInterval:
    """[lo, hi] holding exactly one root of the squarefree ``subject``."""

    lo: Fraction
    hi: Fraction
    subject: UniPoly

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def as_interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    def __float__(self):
        return float(self.mid)


def isolate_roots(p: UniPoly) -> list:
    """One isolating interval per distinct real root, sorted ascending."""
    if not p:
        raise ValueError("zero polynomial")
    q = squarefree_part(p)
    if q.degree < 1:
        return []
    if q.degree == 1:
        r = -Fraction(q.coeffs[0]) / Fraction(q.coeffs[1])
        return [IsolatingInterval(r, r, q)]
    seq = sturm_sequence(q)
    cs = seq[0]
    B = cauchy_bound(q)
    out = []
    stack = [(-B, B, _variations(seq, -B) - _variations(seq, B))]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append(IsolatingInterval(lo, hi, q))
            continue
        mid = (lo + hi) / 2
        if _sign_at(cs, mid) == 0:
            out.append(IsolatingInterval(mid, mid, q))
            delta = (hi - lo) / 4
            while True:
                a, b = mid - delta, mid + delta
                if _sign_at(cs, a) and _sign_at(cs, b) and _variations(seq, a) - _variations(seq, b) == 1:
                    break
                delta /= 2
            stack.append((lo, a, _variations(seq, lo) - _variations(seq, a)))
            stack.append((b, hi, _variations(seq, b) - _variations(seq, hi)))
            continue
        vm = _variations(seq, mid)
        stack.append((mid, hi, vm - _variations(seq, hi)))
        stack.append((lo, mid, _variations(seq, lo) - vm))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine(iv: IsolatingInterval, eps) -> IsolatingInterval:
    """Bisect until width <= eps, keeping the sign change (or pinning an exact root)."""
    eps = Fraction(eps)
    lo, hi, p = iv.lo, iv.hi, iv.subject
    if lo == hi:
        return iv
    cs = p.integer_form()[1]
    slo = _sign_at(cs, lo)
    if slo == 0:
        return IsolatingInterval(lo, lo, p)
    if _sign_at(cs, hi) == 0:
        return IsolatingInterval(hi, hi, p)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s = _sign_at(cs, mid)
        if s == 0:
            return IsolatingInterval(mid, mid, p)
        if s == slo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi, p)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def real_roots(p: UniPoly, eps=Fraction(1, 10**12)) -> list:
    """Isolate and refine every real root to width ``eps``."""
    return [refine(iv, eps) for iv in isolate_roots(p)]


def count_real_roots(p: UniPoly) -> int:
    q = squarefree_part(p)
    if q.degree < 1:
        return 0
    seq = sturm_sequence(q)
    B = cauchy_bound(q)
    return _variations(seq, -B) - _variations(seq, B)
