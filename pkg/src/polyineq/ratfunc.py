"""Rational functions in parameter variables, used as a coefficient field.

A :class:`ParamField` plays the same role as :data:`polyineq.poly.QQ`, but its
elements are reduced fractions ``num/den`` of polynomials in the parameters.
Canonical form: ``gcd(num, den) = 1`` and ``den`` monic under grevlex, so
equal functions have equal representations.

The multivariate gcds are delegated to python-flint's ``fmpq_mpoly``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Sequence

import flint

from .poly import QQ, Polynomial, Ring


class DenominatorVanishes(ZeroDivisionError):
    """A coefficient is undefined at the requested parameter point."""

    def __init__(self, index, theta):
        self.index = index
        self.theta = tuple(theta)
        super().__init__(f"denominator of coefficient {index} vanishes at theta={list(map(str, self.theta))}")


def _fq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class RationalFunction:
    """Element of Q(theta).  Use the owning :class:`ParamField` to build one."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "ParamField", num, den=None, _reduced: bool = False):
        self.field = field
        if den is None:
            den = field._one
        if not _reduced:
            if den.is_zero():
                raise ZeroDivisionError("rational function with zero denominator")
            if num.is_zero():
                den = field._one
            elif not den.is_constant():
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    # -- conversion ------------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise ValueError("rational functions over different parameter sets")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    @property
    def numerator(self) -> Polynomial:
        return self.field._to_poly(self.num)

    @property
    def denominator(self) -> Polynomial:
        return self.field._to_poly(self.den)

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return _to_fraction(self.num.leading_coefficient()) if not self.num.is_zero() else Fraction(0)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction(self.field, self.num + o.num, self.den, _reduced=True)
        if self.den == o.den:
            return RationalFunction(self.field, self.num + o.num, self.den)
        return RationalFunction(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return RationalFunction(self.field, self.num * o.num, self.den, _reduced=True)
        a, b, c, d = self.num, self.den, o.num, o.den
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        if not g1.is_one():
            a, d = a / g1, d / g1
        if not g2.is_one():
            c, b = c / g2, b / g2
        num, den = a * c, b * d
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction(self.field, num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        return RationalFunction(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.field, self.num ** k, self.den ** k, _reduced=True)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.field == other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            if not self.den.is_one():
                return False
            if other == 0:
                return self.num.is_zero()
            return self.num.is_constant() and self.num == self.field._ctx.from_dict({self.field._zero_exp: _fq(other)})
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash((tuple(sorted(self.num.to_dict().items())), tuple(sorted(self.den.to_dict().items()))))

    def __bool__(self):
        return not self.num.is_zero()

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, theta: Sequence) -> Fraction:
        vals = [_fq(t) for t in theta]
        if len(vals) != self.field.nparams:
            raise ValueError("parameter arity mismatch")
        d = self.den(*vals) if not self.den.is_constant() else self.den.leading_coefficient()
        if d == 0:
            raise DenominatorVanishes(None, theta)
        n = self.num(*vals) if not self.num.is_constant() else (
            self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0))
        return _to_fraction(n / d)

    def __str__(self):
        return self.field.format(self)

    def __repr__(self):
        return f"RationalFunction({self})"


class ParamField:
    """The field Q(theta_1, ..., theta_k) over named parameters."""

    parametric = True

    def __init__(self, names: Sequence[str]):
        self.names = tuple(names)
        if not self.names:
            raise ValueError("need at least one parameter")
        self._ctx = flint.fmpq_mpoly_ctx.get(self.names, "degrevlex")
        self._zctx = flint.fmpz_mpoly_ctx.get(self.names, "degrevlex")
        self._zero_exp = (0,) * len(self.names)
        self._one = self._ctx.from_dict({self._zero_exp: 1})
        self.zero = RationalFunction(self, self._ctx.from_dict({}), self._one, _reduced=True)
        self.one = RationalFunction(self, self._one, self._one, _reduced=True)
        self.param_ring = Ring(self.names, QQ)

    @property
    def name(self) -> str:
        return f"QQ({','.join(self.names)})"

    @property
    def nparams(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, ParamField) and other.names == self.names

    def __hash__(self):
        return hash(("ParamField", self.names))

    def __repr__(self):
        return self.name

    def __call__(self, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            if x.field != self:
                raise ValueError("rational function from another parameter field")
            return x
        if isinstance(x, Polynomial):
            return self.from_polynomial(x)
        if isinstance(x, str):
            x = Fraction(x.strip())
        return RationalFunction(self, self._ctx.from_dict({self._zero_exp: _fq(x)}) if x != 0 else self._ctx.from_dict({}),
                                self._one, _reduced=True)

    def parameter(self, name: str):
        if name not in self.names:
            return None
        e = [0] * len(self.names)
        e[self.names.index(name)] = 1
        return RationalFunction(self, self._ctx.from_dict({tuple(e): 1}), self._one, _reduced=True)

    def gens(self) -> tuple:
        return tuple(self.parameter(n) for n in self.names)

    def from_polynomial(self, p: Polynomial, den: Polynomial | None = None) -> RationalFunction:
        """Build num/den from polynomials over QQ in the parameter variables."""
        num = self._from_poly(p)
        d = self._one if den is None else self._from_poly(den)
        return RationalFunction(self, num, d)

    def _from_poly(self, p: Polynomial):
        if p.ring.names != self.names:
            p = p.embed(self.param_ring)
        return self._ctx.from_dict({m: _fq(c) for m, c in p.terms.items()})

    def _to_poly(self, q) -> Polynomial:
        return Polynomial(self.param_ring, {tuple(int(e) for e in m): _to_fraction(c) for m, c in q.to_dict().items()})

    # -- fraction-free view: polynomials over Z[theta] --------------------------

    def clear_denominators(self, coeffs: Sequence[RationalFunction]) -> list:
        """Integer parameter polynomials q_i with q_i = c * coeffs[i] for one nonzero c."""
        L = self._one
        for c in coeffs:
            if not c.den.is_one():
                L = L * (c.den / L.gcd(c.den))
        scaled = [c.num * (L / c.den) if not c.den.is_one() else c.num * L for c in coeffs]
        den = 1
        for q in scaled:
            for v in q.coeffs():
                d = int(v.q)
                if d != 1:
                    den = den * d // _igcd(den, d)
        out = []
        for q in scaled:
            out.append(self._zctx.from_dict({e: int(v.p) * (den // int(v.q)) for e, v in q.to_dict().items()}))
        return out

    def from_integral(self, num, den=None) -> RationalFunction:
        """num/den for fmpz_mpoly inputs over the same parameters."""
        n = self._ctx.from_dict({e: int(v) for e, v in num.to_dict().items()})
        d = self._one if den is None else self._ctx.from_dict({e: int(v) for e, v in den.to_dict().items()})
        return RationalFunction(self, n, d)

    def format(self, c: RationalFunction) -> str:
        num = self._to_poly(c.num).to_string(self.param_ring.grevlex())
        if c.den.is_one():
            return num
        den = self._to_poly(c.den).to_string(self.param_ring.grevlex())
        if len(c.num.to_dict()) > 1:
            num = f"({num})"
        return f"{num}/({den})"

    def guard_polynomials(self, c: RationalFunction) -> list:
        """Parameter polynomials whose vanishing makes ``c`` zero or undefined."""
        out = []
        for q in (c.num, c.den):
            if q.is_zero() or q.is_constant():
                continue
            lc = q.leading_coefficient()
            out.append(self._to_poly(q / lc))
        return out


def specialize(f: Polynomial, theta: Sequence, ring: Ring | None = None) -> Polynomial:
    """Evaluate every coefficient of ``f`` (over a ParamField) at ``theta``."""
    field = f.ring.field
    if not isinstance(field, ParamField):
        raise TypeError("specialize needs a polynomial over a parameter field")
    if len(theta) != field.nparams:
        raise ValueError(f"expected {field.nparams} parameter values, got {len(theta)}")
    target = ring or f.ring.with_field(QQ)
    out = {}
    for idx, (m, c) in enumerate(f.sorted_terms()):
        try:
            v = c.evaluate(theta)
        except DenominatorVanishes:
            raise DenominatorVanishes(idx, theta) from None
        if v != 0:
            out[m] = v
    return Polynomial(target, out)


def specialize_guards(guards, theta) -> list:
    """Guards that vanish at ``theta`` (empty means the generic result applies)."""
    return [g for g in guards if g.evaluate([Fraction(t) for t in theta]) == 0]
