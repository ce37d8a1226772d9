"""Finite-dimensional quotient algebras k[x]/I from a Groebner basis.

The standard monomials (those outside the leading-term ideal) form a basis.
Normal forms of monomials are computed once and memoized: a monomial one step
outside the staircase (a *border* monomial) is reduced by the basis directly,
anything further out is built as ``x_i * NF(m / x_i)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .groebner import GroebnerBasis, normal_form
from .poly import Polynomial, mono_divides
from .univariate import UniPoly, char_poly


class NotZeroDimensional(ValueError):
    pass


def is_zero_dimensional(G: GroebnerBasis) -> bool:
    """Every variable has a pure power among the leading monomials."""
    lms = G.leading_monomials
    if any(not any(m) for m in lms):
        return True
    n = G.ring.nvars
    pure = set()
    for m in lms:
        support = [i for i, e in enumerate(m) if e]
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == n


@dataclass
class QuotientAlgebra:
    source: GroebnerBasis
    basis_monomials: tuple
    index: dict = field(repr=False)
    _nf_cache: dict = field(default_factory=dict, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis_monomials)

    @property
    def ring(self):
        return self.source.ring

    @property
    def field(self):
        return self.source.ring.field

    # -- normal forms as coordinate vectors (sparse dicts index -> coeff) ------

    def monomial_coords(self, m: tuple) -> dict:
        if m in self.index:
            return {self.index[m]: self.field.one}
        hit = self._nf_cache.get(m)
        if hit is not None:
            return hit
        i = next(i for i, e in enumerate(m) if e)
        below = list(m)
        below[i] -= 1
        below = tuple(below)
        if below in self.index:
            # border monomial: reduce it by the basis
            r = normal_form(self.ring.monomial(m), self.source)
            vec = {self.index[mm]: c for mm, c in r.terms.items()}
        else:
            vec = {}
            for k, c in self.monomial_coords(below).items():
                b = list(self.basis_monomials[k])
                b[i] += 1
                for kk, cc in self.monomial_coords(tuple(b)).items():
                    v = vec.get(kk)
                    v = c * cc if v is None else v + c * cc
                    if v == 0:
                        vec.pop(kk, None)
                    else:
                        vec[kk] = v
        self._nf_cache[m] = vec
        return vec

    def coordinates(self, f: Polynomial) -> dict:
        vec: dict = {}
        for m, c in f.terms.items():
            for k, cc in self.monomial_coords(m).items():
                v = vec.get(k)
                v = c * cc if v is None else v + c * cc
                if v == 0:
                    vec.pop(k, None)
                else:
                    vec[k] = v
        return vec

    def element(self, coords: dict) -> Polynomial:
        return Polynomial(self.ring, {self.basis_monomials[k]: c for k, c in coords.items() if c != 0})

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.element(self.coordinates(f))


def standard_basis(G: GroebnerBasis) -> QuotientAlgebra:
    """Staircase monomials of ``G``, ascending in its order (1 first)."""
    if not is_zero_dimensional(G):
        raise NotZeroDimensional("ideal is not zero-dimensional")
    lms = G.leading_monomials
    n = G.ring.nvars
    seen = set()
    if not any(not any(m) for m in lms):
        start = (0,) * n
        queue = deque([start])
        while queue:
            m = queue.popleft()
            if m in seen or any(mono_divides(lm, m) for lm in lms):
                continue
            seen.add(m)
            for i in range(n):
                nxt = list(m)
                nxt[i] += 1
                queue.append(tuple(nxt))
    basis = tuple(G.order.sorted(seen, descending=False))
    return QuotientAlgebra(G, basis, {m: k for k, m in enumerate(basis)})


@dataclass(frozen=True)
class MultMatrix:
    of: Polynomial
    matrix: tuple

    def __matmul__(self, other: "MultMatrix"):
        return mat_mul(self.matrix, other.matrix)


def mult_matrix(A: QuotientAlgebra, f: Polynomial) -> MultMatrix:
    """Matrix of multiplication by ``f``; column k holds NF(f * b_k)."""
    if f.ring != A.ring:
        raise ValueError("polynomial from another ring")
    d = A.dimension
    zero = A.field.zero
    cols = []
    for b in A.basis_monomials:
        cols.append(A.coordinates(f.mul_term(b, A.field.one)))
    matrix = tuple(tuple(cols[k].get(j, zero) for k in range(d)) for j in range(d))
    return MultMatrix(f, matrix)


def mat_mul(a, b) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def trace(M) -> object:
    return sum((M[i][i] for i in range(len(M))), Fraction(0))


def basis_traces(A: QuotientAlgebra) -> list:
    """Tr(M_{b_m}) for every standard monomial b_m."""
    d = A.dimension
    out = []
    for bm in A.basis_monomials:
        t = Fraction(0)
        for k, bk in enumerate(A.basis_monomials):
            prod = tuple(x + y for x, y in zip(bm, bk))
            t += A.monomial_coords(prod).get(k, 0)
        out.append(t)
    return out


def trace_of(A: QuotientAlgebra, f: Polynomial, traces: list | None = None):
    """Tr(M_f) computed linearly from the basis traces."""
    traces = traces if traces is not None else basis_traces(A)
    return sum((c * traces[k] for k, c in A.coordinates(f).items()), Fraction(0))


def trace_form(A: QuotientAlgebra) -> tuple:
    """Symmetric matrix T[j][k] = Tr(M_{b_j} M_{b_k}) = Tr(M_{b_j b_k})."""
    if getattr(A.field, "parametric", False):
        raise TypeError("trace form signature needs rational coefficients")
    traces = basis_traces(A)
    d = A.dimension
    rows = [[Fraction(0)] * d for _ in range(d)]
    for j in range(d):
        for k in range(j, d):
            prod = tuple(x + y for x, y in zip(A.basis_monomials[j], A.basis_monomials[k]))
            v = sum((c * traces[m] for m, c in A.monomial_coords(prod).items()), Fraction(0))
            rows[j][k] = rows[k][j] = v
    return tuple(tuple(r) for r in rows)


def _descartes(coeffs) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature_and_rank(T) -> tuple:
    """(signature, rank) of a symmetric rational matrix, exactly.

    All eigenvalues of a symmetric matrix are real, so Descartes' rule of
    signs on chi_T(t) and chi_T(-t) counts positive and negative eigenvalues
    exactly; the multiplicity of t = 0 is the nullity.
    """
    n = len(T)
    if n == 0:
        return 0, 0
    chi = rational_char_poly(T)
    cs = list(chi.coeffs)
    pos = _descartes(cs)
    neg = _descartes([c if i % 2 == 0 else -c for i, c in enumerate(cs)])
    return pos - neg, pos + neg


def real_count(T) -> int:
    return signature_and_rank(T)[0]


def rank_of(T) -> int:
    return signature_and_rank(T)[1]


def rational_char_poly(M):
    """char_poly for rational matrices via an integer-scaled copy (faster)."""
    n = len(M)
    den = 1
    for row in M:
        for c in row:
            d = Fraction(c).denominator
            if d != 1:
                den = den * d // gcd(den, d)
    if den == 1:
        chi = char_poly([[int(c) for c in row] for row in M])
        return UniPoly([Fraction(c) for c in chi.coeffs])
    scaled = [[int(Fraction(c) * den) for c in row] for row in M]
    chi = char_poly(scaled)
    # chi_{DM}(D t) = D^n chi_M(t)
    return UniPoly([Fraction(b * den ** k, den ** n) for k, b in enumerate(chi.coeffs)])

