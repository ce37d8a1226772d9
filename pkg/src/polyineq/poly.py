"""Sparse multivariate polynomials over an exact coefficient field.

A polynomial stores a dictionary mapping exponent tuples to nonzero
coefficients.  Coefficients come from a field object; :data:`QQ` realizes the
rationals with :class:`fractions.Fraction`, and :mod:`polyineq.ratfunc`
provides rational functions in parameters.  Any coefficient type supporting
``+ - * /``, equality and hashing works, so the same code runs over both.

Polynomials are immutable; every operation returns a new canonical value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .interval import Interval

Monomial = tuple  # tuple[int, ...]


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    """Polynomial text could not be parsed; ``line``/``col`` are 1-based."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} (line {line}, column {col})")


# ---------------------------------------------------------------------------
# coefficient field


class RationalField:
    """The field of rational numbers, with ``Fraction`` elements."""

    name = "QQ"
    parametric = False
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def format(self, c: Fraction) -> str:
        return str(c)

    def parameter(self, name: str):
        return None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or graded reverse lex order.

    ``perm`` lists variable indices from greatest to least; the default is the
    ring's declared order (first variable greatest).
    """

    kind: str
    perm: tuple

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"not a permutation: {self.perm}")

    @classmethod
    def lex(cls, nvars: int, perm: Sequence[int] | None = None) -> "MonomialOrder":
        return cls("lex", tuple(range(nvars)) if perm is None else tuple(perm))

    @classmethod
    def grevlex(cls, nvars: int, perm: Sequence[int] | None = None) -> "MonomialOrder":
        return cls("grevlex", tuple(range(nvars)) if perm is None else tuple(perm))

    @property
    def nvars(self) -> int:
        return len(self.perm)

    @cached_property
    def key(self):
        """Sort key: larger key means larger monomial."""
        perm = self.perm
        if self.kind == "lex":
            if perm == tuple(range(len(perm))):
                return tuple
            return lambda m: tuple([m[i] for i in perm])
        rev = tuple(reversed(perm))
        return lambda m: (sum(m), tuple([-m[i] for i in rev]))

    def max(self, monomials: Iterable[Monomial]) -> Monomial:
        return max(monomials, key=self.key)

    def sorted(self, monomials: Iterable[Monomial], descending: bool = True) -> list:
        return sorted(monomials, key=self.key, reverse=descending)

    def greater(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) > self.key(b)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x + y for x, y in zip(a, b)])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x - y for x, y in zip(a, b)])


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


# ---------------------------------------------------------------------------
# rings and polynomials


@dataclass(frozen=True)
class Ring:
    """Polynomial ring: ordered variable names plus a coefficient field."""

    names: tuple
    field: object = QQ

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("a ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    @property
    def zero_monomial(self) -> Monomial:
        return (0,) * len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(self.field.one)

    def constant(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {self.zero_monomial: c} if c != 0 else {})

    def gen(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): self.field.one})

    @property
    def gens(self) -> tuple:
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, m: Monomial, c=None) -> "Polynomial":
        c = self.field.one if c is None else self.field(c)
        return Polynomial(self, {tuple(m): c} if c != 0 else {})

    def from_dict(self, terms: dict) -> "Polynomial":
        field = self.field
        out = {}
        for m, c in terms.items():
            c = field(c)
            if c != 0:
                out[tuple(m)] = c
        return Polynomial(self, out)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise RingMismatch(f"{x.ring} vs {self}")
            return x
        if isinstance(x, str):
            return parse(x, self)
        return self.constant(x)

    def lex(self) -> MonomialOrder:
        return MonomialOrder.lex(self.nvars)

    def grevlex(self) -> MonomialOrder:
        return MonomialOrder.grevlex(self.nvars)

    def with_field(self, field) -> "Ring":
        return Ring(self.names, field)

    def __repr__(self):
        return f"Ring({', '.join(self.names)}; {self.field!r})"


class Polynomial:
    """Immutable sparse polynomial; ``terms`` never stores zero coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic structure ----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.ring.zero_monomial in self.terms)

    def constant_term(self):
        return self.terms.get(self.ring.zero_monomial, self.ring.field.zero)

    def __len__(self):
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree(self, var: int | str) -> int:
        if isinstance(var, str):
            var = self.ring.index(var)
        if not self.terms:
            return -1
        return max(m[var] for m in self.terms)

    def variables(self) -> set:
        """Indices of variables that actually occur."""
        out = set()
        for m in self.terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if self.is_constant():
            try:
                return self.constant_term() == self.ring.field(other)
            except (TypeError, ValueError):
                return False
        return False

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.ring.field(other)
            if c == 0:
                return self.ring.zero()
            return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple([x + y for x, y in zip(m1, m2)])
                s = get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial(self.ring, {m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant() or other.is_zero():
                raise ValueError("can only divide by a nonzero constant")
            other = other.constant_term()
        c = self.ring.field(other)
        return Polynomial(self.ring, {m: a / c for m, a in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, m: Monomial, c) -> "Polynomial":
        return Polynomial(
            self.ring, {tuple([x + y for x, y in zip(k, m)]): a * c for k, a in self.terms.items()}
        )

    # -- orders ---------------------------------------------------------------

    def leading_term(self, order: MonomialOrder | None = None):
        """Return ``(monomial, coefficient)`` of the largest term under ``order``."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        order = order or self.ring.lex()
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def leading_monomial(self, order: MonomialOrder | None = None) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.leading_term(order)[1]

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.terms:
            return self
        return self / self.leading_coefficient(order)

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        order = order or self.ring.lex()
        return [(m, self.terms[m]) for m in order.sorted(self.terms)]

    # -- calculus and evaluation ------------------------------------------------

    def diff(self, var: int | str) -> "Polynomial":
        if isinstance(var, str):
            var = self.ring.index(var)
        out = {}
        for m, c in self.terms.items():
            e = m[var]
            if e:
                mm = list(m)
                mm[var] = e - 1
                out[tuple(mm)] = c * e
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence):
        if len(point) != self.ring.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        field = self.ring.field
        pt = [field(x) for x in point]
        total = field.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def evaluate_interval(self, box: Sequence) -> Interval:
        """Enclosure of the range of ``self`` over a box of intervals."""
        if len(box) != self.ring.nvars:
            raise ValueError(f"box has {len(box)} coordinates, ring has {self.ring.nvars}")
        box = [b if isinstance(b, Interval) else Interval.point(b) for b in box]
        powers: dict = {}
        lo = hi = Fraction(0)
        for m, c in self.terms.items():
            acc = Interval(c, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    p = powers.get(key)
                    if p is None:
                        p = powers[key] = box[i] ** e
                    acc = acc * p
            lo += acc.lo
            hi += acc.hi
        return Interval(lo, hi)

    def subs(self, values: dict) -> "Polynomial":
        """Substitute field constants for some variables (by index or name)."""
        field = self.ring.field
        vals = {}
        for k, v in values.items():
            vals[self.ring.index(k) if isinstance(k, str) else k] = field(v)
        out: dict = {}
        for m, c in self.terms.items():
            mm = list(m)
            for i, v in vals.items():
                if mm[i]:
                    c = c * v ** mm[i]
                    mm[i] = 0
            if c != 0:
                key = tuple(mm)
                s = out.get(key)
                out[key] = c if s is None else s + c
        return Polynomial(self.ring, {m: c for m, c in out.items() if c != 0})

    def compose(self, images: Sequence["Polynomial"], target: Ring | None = None) -> "Polynomial":
        """Substitute ``images[i]`` for variable ``i``; images live in ``target``."""
        if len(images) != self.ring.nvars:
            raise ValueError("need one image per variable")
        target = target or images[0].ring
        cache: dict = {}
        total = target.zero()
        for m, c in self.terms.items():
            term = target.constant(c)
            for i, e in enumerate(m):
                if e:
                    p = cache.get((i, e))
                    if p is None:
                        p = cache[(i, e)] = images[i] ** e
                    term = term * p
            total = total + term
        return total

    def map_coeffs(self, fn, ring: Ring) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            c = fn(c)
            if c != 0:
                out[m] = c
        return Polynomial(ring, out)

    def embed(self, ring: Ring) -> "Polynomial":
        """Rename into a ring whose variables include all of ours."""
        idx = [ring.index(n) for n in self.ring.names]
        out = {}
        for m, c in self.terms.items():
            mm = [0] * ring.nvars
            for i, e in zip(idx, m):
                mm[i] = e
            out[tuple(mm)] = ring.field(c)
        return Polynomial(ring, out)

    # -- printing -------------------------------------------------------------

    def to_string(self, order: MonomialOrder | None = None) -> str:
        if not self.terms:
            return "0"
        field = self.ring.field
        names = self.ring.names
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
            )
            cs = field.format(c)
            negative = cs.startswith("-") and not cs.startswith("-(")
            if negative:
                cs = cs[1:]
            if not mono:
                body = cs
            elif cs == "1":
                body = mono
            else:
                if not _SIMPLE_COEFF.fullmatch(cs):
                    cs = f"({cs})"
                body = f"{cs}*{mono}"
            if not parts:
                parts.append(("-" if negative else "") + body)
            else:
                parts.append((" - " if negative else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r})"


_SIMPLE_COEFF = re.compile(r"[\w/^*]+|\(.*\)")


# ---------------------------------------------------------------------------
# multivariate division


def divide(f: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder):
    """Multivariate division of ``f`` by an ordered list of divisors.

    Each step divides the current leading term by the first divisor whose
    leading term divides it.  Returns ``(quotients, remainder)`` with
    ``f == sum(q*d) + r`` and no term of ``r`` divisible by any divisor's
    leading term.
    """
    ring = f.ring
    for d in divisors:
        if d.ring != ring:
            raise RingMismatch(f"{d.ring} vs {ring}")
        if d.is_zero():
            raise ZeroDivisionError("zero divisor in division")
    key = order.key
    leads = [d.leading_term(order) for d in divisors]
    quotients = [dict() for _ in divisors]
    p = dict(f.terms)
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for i, (lm, lc) in enumerate(leads):
            if mono_divides(lm, m):
                q_m = mono_div(m, lm)
                q_c = c / lc
                quotients[i][q_m] = quotients[i].get(q_m, 0) + q_c
                for dm, dc in divisors[i].terms.items():
                    k = tuple([x + y for x, y in zip(dm, q_m)])
                    v = p.get(k)
                    v = -q_c * dc if v is None else v - q_c * dc
                    if v == 0:
                        p.pop(k, None)
                    else:
                        p[k] = v
                break
        else:
            rem[m] = c
            del p[m]
    quots = [Polynomial(ring, {m: c for m, c in q.items() if c != 0}) for q in quotients]
    return quots, Polynomial(ring, rem)


# ---------------------------------------------------------------------------
# text grammar

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    toks = []
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = mt.lastgroup
        start = mt.start(kind)
        tok = mt.group(kind)
        if kind == "op" and tok == "**":
            tok = "^"
        toks.append((kind, tok, start))
        pos = mt.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("num", "id") or tok[1] == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected {tok[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            tok = self.take()
            q = self.unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    self.error("division only by nonzero constants", tok)
                p = p / q.constant_term()
        return p

    def unary(self) -> Polynomial:
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer literal", tok)
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "id":
            if val in self.ring.names:
                return self.ring.gen(val)
            c = self.ring.field.parameter(val)
            if c is not None:
                return self.ring.constant(c)
            self.error(f"unknown variable {val!r}", tok)
        if val == "(":
            p = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return p
        self.error(f"unexpected {val!r}" if val else "unexpected end of input", tok)


def parse(text: str, ring: Ring) -> Polynomial:
    """Parse ``text`` (operators ``+ - * / ^``, parentheses) into ``ring``."""
    return _Parser(text, ring).parse()
