"""Parametric characteristic polynomials by specialization and interpolation.

Running the quotient linear algebra directly over Q(theta) is exact but the
intermediate rational functions swell far beyond the size of the answer.  When
the generic quotient has a multiplication matrix M_f whose characteristic
polynomial has coefficients that are polynomials in theta (the usual case
when f is integral over Q[theta]), those coefficients can be recovered from
exact rational specializations:

1. compute the parametric grevlex basis once (cheap, fraction-free) to learn
   the generic staircase;
2. at every node of a total-degree lower set of parameter points, compute the
   specialized basis, check that it has the generic staircase, and take the
   characteristic polynomial of the specialized M_f over Q;
3. Newton-interpolate each coefficient on the lower set;
4. confirm the result at extra random points, and optionally exactly, by
   reducing chi(f) modulo the parametric basis.

The degree bound is found adaptively: a result is only returned once the
check points agree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groebner import DEFAULT_BUDGET, Budget, GroebnerBasis, Ideal, buchberger, normal_form
from .poly import QQ, Polynomial, Ring
from .quotient import mult_matrix, rational_char_poly, standard_basis
from .ratfunc import ParamField, specialize
from .univariate import UniPoly


class InterpolationFailure(RuntimeError):
    """No degree up to the cap reproduced the check points."""


@dataclass(frozen=True)
class ParametricCharPoly:
    chi: UniPoly                 # monic in t, coefficients in Q(theta) (polynomial in theta)
    generic_basis: GroebnerBasis  # parametric grevlex basis of the ideal
    guards: tuple                # parameter polynomials from the basis computation
    total_degree: int            # interpolation degree that passed the checks
    nodes: int                   # number of specializations used
    exact: bool                  # chi(f) reduced to zero modulo the parametric basis


def _lower_set(nparams: int, degree: int) -> list:
    """Multi-indices with total degree <= degree, sorted by total degree."""
    out = [a for a in itertools.product(range(degree + 1), repeat=nparams) if sum(a) <= degree]
    out.sort(key=lambda a: (sum(a), a))
    return out


def _abscissae(rng: random.Random, count: int, spread: int) -> list:
    return [Fraction(v) for v in rng.sample(range(-spread, spread + 1), count)]


class _Specializer:
    """Characteristic polynomial of M_f at rational parameter points."""

    def __init__(self, ideal: Ideal, f: Polynomial, generic: GroebnerBasis, budget: Budget):
        self.ideal = ideal
        self.f = f
        self.ring_q = ideal.ring.with_field(QQ)
        self.leads = sorted(generic.leading_monomials)
        self.budget = budget
        self.cache: dict = {}

    def __call__(self, theta: tuple):
        if theta in self.cache:
            return self.cache[theta]
        try:
            gens = [specialize(g, theta, self.ring_q) for g in self.ideal.generators]
            f = specialize(self.f, theta, self.ring_q)
        except ZeroDivisionError:
            self.cache[theta] = None
            return None
        G = buchberger(Ideal(gens, self.ring_q), self.ring_q.grevlex(), self.budget)
        if sorted(G.leading_monomials) != self.leads:
            self.cache[theta] = None
            return None
        A = standard_basis(G)
        chi = rational_char_poly(mult_matrix(A, f).matrix)
        self.cache[theta] = chi.coeffs
        return chi.coeffs


def _newton_coefficients(indices, nodes_1d, values) -> list:
    """Newton coefficients on a lower set.

    The basis function for index a is prod_r prod_{m < a_r} (theta_r - x_r[m]);
    it vanishes at every node b unless a <= b componentwise, so the system is
    triangular in order of total degree.
    """
    k = len(nodes_1d)
    # factor[r][m][i] = prod_{l < m} (x_r[i] - x_r[l])
    factor = []
    for r in range(k):
        xs = nodes_1d[r]
        tab = []
        for m in range(len(xs)):
            row = []
            for i in range(len(xs)):
                acc = Fraction(1)
                for l in range(m):
                    acc *= xs[i] - xs[l]
                row.append(acc)
            tab.append(row)
        factor.append(tab)
    width = len(values[0])
    coeffs = {}
    for b, val in zip(indices, values):
        acc = list(val)
        for a in itertools.product(*[range(x + 1) for x in b]):
            if a == b:
                continue
            ca = coeffs[a]
            w = Fraction(1)
            for r in range(k):
                w *= factor[r][a[r]][b[r]]
            if w:
                for c in range(width):
                    if ca[c]:
                        acc[c] -= ca[c] * w
        w = Fraction(1)
        for r in range(k):
            w *= factor[r][b[r]][b[r]]
        coeffs[b] = [v / w for v in acc]
    return coeffs


def _to_monomial_form(coeffs: dict, nodes_1d, ring: Ring, width: int) -> list:
    k = len(nodes_1d)
    basis_cache: dict = {}

    def newton_basis(a):
        p = basis_cache.get(a)
        if p is None:
            if sum(a) == 0:
                p = ring.one()
            else:
                r = max(i for i in range(k) if a[i] > 0)
                prev = tuple(a[i] - (1 if i == r else 0) for i in range(k))
                p = newton_basis(prev) * (ring.gen(r) - nodes_1d[r][a[r] - 1])
            basis_cache[a] = p
        return p

    out = [ring.zero() for _ in range(width)]
    for a, cs in sorted(coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        nb = None
        for c in range(width):
            if cs[c]:
                nb = nb or newton_basis(a)
                out[c] = out[c] + nb * cs[c]
    return out


def _evaluate(polys: Sequence[Polynomial], theta) -> list:
    return [p.evaluate(theta) for p in polys]


def parametric_charpoly(I, f: Polynomial, seed: int = 0, start_degree: int | None = None,
                        max_degree: int = 96, checks: int = 4, exact: bool = False,
                        spread: int = 60, budget: Budget = DEFAULT_BUDGET) -> ParametricCharPoly:
    """chi(t) = det(t - M_f) over Q(theta) for a zero-dimensional parametric ideal.

    Only valid when the coefficients of chi are polynomials in theta; if no
    degree up to ``max_degree`` passes the random checks,
    :class:`InterpolationFailure` is raised.
    """
    ideal = I if isinstance(I, Ideal) else Ideal(I)
    ring = ideal.ring
    fld = ring.field
    if not isinstance(fld, ParamField):
        raise TypeError("parametric_charpoly needs a parameter coefficient field")
    generic = buchberger(ideal, ring.grevlex(), budget)
    A = standard_basis(generic)
    ell = A.dimension
    spec = _Specializer(ideal, f, generic, budget)
    k = fld.nparams
    rng = random.Random(seed)
    degree = ell if start_degree is None else start_degree
    while degree <= max_degree:
        for _ in range(8):
            nodes_1d = [_abscissae(rng, degree + 1, max(spread, degree + 1)) for _ in range(k)]
            indices = _lower_set(k, degree)
            values = []
            for a in indices:
                chi = spec(tuple(nodes_1d[r][a[r]] for r in range(k)))
                if chi is None:
                    break
                values.append(list(chi) + [Fraction(0)] * (ell + 1 - len(chi)))
            else:
                break
        else:
            raise InterpolationFailure("specialization keeps hitting the guard set")
        coeffs = _newton_coefficients(indices, nodes_1d, values)
        polys = _to_monomial_form(coeffs, nodes_1d, fld.param_ring, ell + 1)
        ok = True
        tested = 0
        while tested < checks:
            theta = tuple(Fraction(rng.randint(-10 * spread, 10 * spread), rng.randint(1, 7)) for _ in range(k))
            got = spec(theta)
            if got is None:
                continue
            tested += 1
            if list(got) + [Fraction(0)] * (ell + 1 - len(got)) != _evaluate(polys, theta):
                ok = False
                break
        if ok:
            chi = UniPoly([fld.from_polynomial(p) for p in polys])
            proven = False
            if exact:
                proven = verify_charpoly(chi, f, generic)
                if not proven:
                    raise InterpolationFailure("interpolated polynomial fails the exact membership check")
            return ParametricCharPoly(chi, generic, tuple(generic.guards), degree, len(spec.cache), proven)
        degree += max(4, degree // 2)
    raise InterpolationFailure(f"no interpolation degree <= {max_degree} matched the check points")


def verify_charpoly(chi: UniPoly, f: Polynomial, G: GroebnerBasis) -> bool:
    """Exact test that chi(f) lies in the ideal (Horner modulo G over Q(theta))."""
    ring = G.ring
    acc = ring.zero()
    for c in reversed(chi.coeffs):
        acc = normal_form(acc * f + ring.constant(c), G)
    return acc.is_zero()
