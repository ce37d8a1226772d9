"""Real solutions of zero-dimensional systems, three ways.

* ``solve_eigen``: real eigenvalues of the coordinate multiplication matrices,
  combined into candidate tuples and filtered by interval certification.
* ``compute_rur`` / ``solve_rur``: rational univariate representation built
  from traces, coordinates are ``g_i(t) / g_0(t)`` at the roots of ``chi``.
* ``compute_pur`` / ``solve_pur``: shape-position lex basis of ``I + <t - s>``
  for a random linear form ``s``, coordinates are ``rho_i(t)`` at the roots of
  ``eta``.

Every route returns :class:`SolutionBox` objects whose coordinate intervals
have rational endpoints and have been checked against all generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .groebner import DEFAULT_BUDGET, Budget, GroebnerBasis, Ideal, buchberger
from .interval import Interval
from .poly import QQ, Polynomial, Ring
from .quotient import (
    QuotientAlgebra,
    basis_traces,
    mult_matrix,
    rational_char_poly,
    signature_and_rank,
    standard_basis,
    trace_form,
)
from .univariate import IsolatingInterval, UniPoly, char_poly, isolate_roots, refine, squarefree_part

DEFAULT_TOL = Fraction(1, 10**12)
MAX_HALVINGS = 64
CERTIFIED, CANDIDATE, REJECTED = "certified", "candidate", "rejected"


class NonSeparating(ValueError):
    def __init__(self, message: str, tries: int = 1):
        super().__init__(message)
        self.tries = tries


class ShapeFailure(RuntimeError):
    """No drawn linear form put the ideal in shape position."""

    def __init__(self, message: str, tries: int, last_basis=None):
        super().__init__(message)
        self.tries = tries
        self.last_basis = last_basis


# ---------------------------------------------------------------------------
# boxes


@dataclass(frozen=True)
class SolutionBox:
    coordinates: tuple
    status: str = CERTIFIED

    @property
    def midpoint(self) -> tuple:
        return tuple(iv.mid for iv in self.coordinates)

    @property
    def width(self) -> Fraction:
        return max((iv.width for iv in self.coordinates), default=Fraction(0))

    def overlaps(self, other: "SolutionBox", slack=0) -> bool:
        return all(a.lo - slack <= b.hi and b.lo - slack <= a.hi for a, b in zip(self.coordinates, other.coordinates))

    def project(self, indices: Sequence[int]) -> "SolutionBox":
        return SolutionBox(tuple(self.coordinates[i] for i in indices), self.status)

    def __repr__(self):
        inner = ", ".join(f"{float(iv.mid):.12g}" for iv in self.coordinates)
        return f"SolutionBox(({inner}), {self.status})"


def certify(generators: Sequence[Polynomial], coords: Sequence[Interval]) -> bool:
    """True when every generator's interval enclosure on the box contains 0."""
    for g in generators:
        if not g.evaluate_interval(coords).contains_zero():
            return False
    return True


def sort_boxes(boxes):
    return sorted(boxes, key=lambda b: b.midpoint)


def _as_ideal(I) -> Ideal:
    return I if isinstance(I, Ideal) else Ideal(list(I))


def _grevlex_algebra(ideal: Ideal, budget: Budget):
    G = buchberger(ideal, ideal.ring.grevlex(), budget)
    return G, standard_basis(G)


def _require_rational(ring: Ring, what: str):
    if ring.field != QQ:
        raise TypeError(f"{what} needs rational coefficients; specialize parameters first")


# ---------------------------------------------------------------------------
# eigenvalue method


def solve_eigen(I, tol=DEFAULT_TOL, budget: Budget = DEFAULT_BUDGET) -> list:
    """Certified real solutions from the real eigenvalues of the M_{x_i}."""
    ideal = _as_ideal(I)
    ring = ideal.ring
    _require_rational(ring, "solve_eigen")
    tol = Fraction(tol)
    G, A = _grevlex_algebra(ideal, budget)
    if A.dimension == 0:
        return []
    expected = signature_and_rank(trace_form(A))[0]
    eig = []
    for i in range(ring.nvars):
        chi = rational_char_poly(mult_matrix(A, ring.gen(i)).matrix)
        eig.append([refine(iv, tol) for iv in isolate_roots(chi)])
    gens = ideal.generators
    hulls = [Interval(vals[0].lo, vals[-1].hi) if vals else None for vals in eig]
    if any(h is None for h in hulls):
        return []

    found = []

    def dfs(i: int, chosen: list):
        if i == ring.nvars:
            found.append(list(chosen))
            return
        for iv in eig[i]:
            box = [c.as_interval() for c in chosen] + [iv.as_interval()] + hulls[i + 1:]
            if certify(gens, box):
                chosen.append(iv)
                dfs(i + 1, chosen)
                chosen.pop()

    dfs(0, [])

    if len(found) != expected:
        # try to shake out spurious tuples by refining further
        survivors = []
        for tup in found:
            cur = list(tup)
            ok = True
            for _ in range(MAX_HALVINGS):
                cur = [refine(c, c.width / 2) if not c.exact else c for c in cur]
                if not certify(gens, [c.as_interval() for c in cur]):
                    ok = False
                    break
                if all(c.exact for c in cur):
                    break
            if ok:
                survivors.append(cur)
        found = survivors
    status = CERTIFIED if len(found) == expected else CANDIDATE
    return sort_boxes(SolutionBox(tuple(c.as_interval() for c in tup), status) for tup in found)


# ---------------------------------------------------------------------------
# rational univariate representation


@dataclass(frozen=True)
class RURRepresentation:
    chi: UniPoly
    g0: UniPoly
    gi: tuple
    separating_f: Polynomial
    generators: tuple = ()
    chi_squarefree: UniPoly | None = None
    tries: int = 1

    @property
    def degree(self) -> int:
        return self.chi_squarefree.degree


def _draw_linear_form(rng: random.Random, ring: Ring, bound: int) -> Polynomial:
    while True:
        cs = [rng.randint(-bound, bound) for _ in range(ring.nvars)]
        if any(cs):
            break
    out = ring.zero()
    for i, c in enumerate(cs):
        if c:
            out = out + ring.gen(i) * c
    return out


def _horner_polys(chibar: UniPoly) -> list:
    """H_0 = 1, H_j = t H_{j-1} + a_{d-j} for the monic chi-bar of degree d."""
    d = chibar.degree
    a = chibar.coeffs
    H = [UniPoly([Fraction(1)])]
    for j in range(1, d):
        H.append(H[-1] * UniPoly([0, 1]) + a[d - j])
    return H


def _rur_for(A: QuotientAlgebra, f: Polynomial, rank: int, traces: list):
    ring = A.ring
    Mf = mult_matrix(A, f).matrix
    chi = rational_char_poly(Mf)
    chibar = squarefree_part(chi)
    d = chibar.degree
    if d != rank:
        return None, chi
    H = _horner_polys(chibar)
    # coordinate vectors of f^i for i < d
    ell = A.dimension
    vec = [Fraction(0)] * ell
    vec[A.index[(0,) * ring.nvars]] = Fraction(1)
    powers = []
    for _ in range(d):
        powers.append(vec)
        vec = [sum((Mf[r][k] * vec[k] for k in range(ell) if vec[k]), Fraction(0)) for r in range(ell)]
    coord_mats = [mult_matrix(A, ring.gen(i)).matrix for i in range(ring.nvars)]

    def g_of(mat):
        out = UniPoly()
        for i, p in enumerate(powers):
            w = p if mat is None else [sum((mat[r][k] * p[k] for k in range(ell) if p[k]), Fraction(0)) for r in range(ell)]
            tr = sum((traces[k] * w[k] for k in range(ell) if w[k]), Fraction(0))
            if tr:
                out = out + H[d - 1 - i] * tr
        return out

    g0 = g_of(None)
    gi = tuple(g_of(M) for M in coord_mats)
    return (chi, chibar, g0, gi), chi


def compute_rur(I, f="auto", seed: int = 0, max_tries: int = 20, budget: Budget = DEFAULT_BUDGET) -> RURRepresentation:
    """RUR with respect to ``f`` (or a random separating linear form)."""
    ideal = _as_ideal(I)
    ring = ideal.ring
    _require_rational(ring, "compute_rur")
    G, A = _grevlex_algebra(ideal, budget)
    if A.dimension == 0:
        one = UniPoly([Fraction(1)])
        fx = ring.gen(0) if f == "auto" else f
        return RURRepresentation(one, UniPoly(), tuple(UniPoly() for _ in range(ring.nvars)), fx,
                                 tuple(ideal.generators), one)
    T = trace_form(A)
    rank = signature_and_rank(T)[1]
    traces = basis_traces(A)
    if f != "auto":
        if isinstance(f, str):
            f = ring(f)
        got, chi = _rur_for(A, f, rank, traces)
        if got is None:
            raise NonSeparating(f"{f} does not separate the {rank} points")
        chi, chibar, g0, gi = got
        return RURRepresentation(chi, g0, gi, f, tuple(ideal.generators), chibar)
    rng = random.Random(seed)
    bound = 10
    for attempt in range(1, max_tries + 1):
        cand = _draw_linear_form(rng, ring, bound)
        got, _ = _rur_for(A, cand, rank, traces)
        if got is not None:
            chi, chibar, g0, gi = got
            return RURRepresentation(chi, g0, gi, cand, tuple(ideal.generators), chibar, attempt)
        bound *= 2
    raise NonSeparating(f"no separating linear form in {max_tries} draws", max_tries)


def _outward(x: Interval, tol: Fraction) -> Interval:
    """Round endpoints outward to a dyadic grid at most tol/8 apart."""
    k = max(0, (8 / tol).__ceil__().bit_length())
    scale = 1 << k
    lo = Fraction((x.lo * scale).__floor__(), scale)
    hi = Fraction((x.hi * scale).__ceil__(), scale)
    return Interval(lo, hi)


def _map_root(iv: IsolatingInterval, tol: Fraction, coords_of):
    """Refine ``iv`` until ``coords_of`` yields boxes of width <= tol.

    ``coords_of`` returns a list of intervals or None when the enclosure is
    not yet usable (e.g. a denominator interval still contains zero).
    """
    cur = iv
    for _ in range(8 * MAX_HALVINGS):
        coords = coords_of(cur.as_interval())
        shrink = 16
        if coords is not None:
            # enclosure widths scale about linearly once the interval is small
            spread = max(c.width for c in coords)
            coords = [_outward(c, tol) for c in coords]
            if all(c.width <= tol for c in coords):
                return coords, True
            shrink = min(max(shrink, (4 * spread / tol).__ceil__()), 1 << 20)
        if cur.exact:
            return coords, coords is not None
        cur = refine(cur, cur.width / shrink)
    coords = coords_of(cur.as_interval())
    return coords, False


def solve_rur(R: RURRepresentation, tol=DEFAULT_TOL) -> list:
    tol = Fraction(tol)
    if R.chi_squarefree is None or R.chi_squarefree.degree < 1:
        return []
    out = []
    for iv in isolate_roots(R.chi_squarefree):

        def coords_of(x: Interval):
            den = R.g0.eval_interval(x)
            if den.contains_zero():
                return None
            return [g.eval_interval(x) / den for g in R.gi]

        coords, ok = _map_root(iv, tol, coords_of)
        if coords is None:
            raise ZeroDivisionError("g0 vanishes on a root interval; retry with another separating form")
        box = SolutionBox(tuple(coords), CERTIFIED if ok else CANDIDATE)
        if not certify(R.generators, coords):
            continue
        out.append(box)
    return sort_boxes(out)


# ---------------------------------------------------------------------------
# polynomial univariate representation


@dataclass(frozen=True)
class PURRepresentation:
    eta: UniPoly
    rho: tuple
    separating_s: Polynomial
    guards: tuple = ()
    generators: tuple = ()
    tries: int = 1
    method: str = "fglm"
    basis: GroebnerBasis | None = field(default=None, compare=False, repr=False)

    @property
    def field(self):
        return self.separating_s.ring.field

    def lex_basis_polys(self, ring_t: Ring) -> list:
        """The shape basis {eta(t), x_n - rho_n(t), ..., x_1 - rho_1(t)} in ``ring_t``."""
        n = ring_t.nvars - 1
        t = ring_t.gen(n)
        out = [_uni_to_poly(self.eta, t)]
        for i in range(n - 1, -1, -1):
            out.append(ring_t.gen(i) - _uni_to_poly(self.rho[i], t))
        return out


def _uni_to_poly(u: UniPoly, t: Polynomial) -> Polynomial:
    ring = t.ring
    k = ring.nvars - 1
    terms = {}
    for e, c in enumerate(u.coeffs):
        if c != 0:
            m = [0] * ring.nvars
            m[k] = e
            terms[tuple(m)] = c
    return Polynomial(ring, terms)


def extend_ring(ring: Ring, name: str = "t") -> Ring:
    while name in ring.names:
        name += "_"
    return Ring(tuple(ring.names) + (name,), ring.field)


class _Span:
    """Incremental Gaussian elimination that remembers combinations."""

    def __init__(self, field):
        self.field = field
        self.rows = []  # (pivot, row dict, combo dict)
        self.inverted = []

    def express(self, w: dict):
        w = dict(w)
        combo: dict = {}
        for pivot, row, rc in self.rows:
            c = w.get(pivot)
            if c is None or c == 0:
                continue
            for k, v in row.items():
                nv = w.get(k, 0) - c * v
                if nv == 0:
                    w.pop(k, None)
                else:
                    w[k] = nv
            for k, v in rc.items():
                nv = combo.get(k, 0) + c * v
                if nv == 0:
                    combo.pop(k, None)
                else:
                    combo[k] = nv
        return w, combo

    def add(self, w: dict, label) -> bool:
        rest, combo = self.express(w)
        if not rest:
            return False
        pivot = min(rest)
        pv = rest[pivot]
        self.inverted.append(pv)
        row = {k: v / pv for k, v in rest.items()}
        rc = {k: -v / pv for k, v in combo.items()}
        rc[label] = rc.get(label, 0) + self.field.one / pv
        self.rows.append((pivot, row, rc))
        return True


def _pur_by_change_of_order(A: QuotientAlgebra, s: Polynomial):
    """Shape basis via linear algebra on the quotient; None if not in shape position."""
    ring = A.ring
    fld = ring.field
    ell = A.dimension
    span = _Span(fld)
    vec = {A.index[(0,) * ring.nvars]: fld.one}
    cols = {}
    for k in range(ell):
        if not span.add(vec, k):
            return None, span.inverted
        nxt: dict = {}
        for j, c in vec.items():
            col = cols.get(j)
            if col is None:
                col = cols[j] = A.coordinates(s.mul_term(A.basis_monomials[j], fld.one))
            for r, v in col.items():
                nv = nxt.get(r, 0) + c * v
                if nv == 0:
                    nxt.pop(r, None)
                else:
                    nxt[r] = nv
        vec = nxt
    rest, combo = span.express(vec)
    assert not rest
    eta = [fld.zero] * (ell + 1)
    eta[ell] = fld.one
    for k, c in combo.items():
        eta[k] = -c
    rho = []
    for i in range(ring.nvars):
        rest, combo = span.express(A.coordinates(ring.gen(i)))
        assert not rest
        cs = [fld.zero] * ell
        for k, c in combo.items():
            cs[k] = c
        rho.append(UniPoly(cs))
    return (UniPoly(eta), tuple(rho)), span.inverted


def _pur_by_lex_basis(ideal: Ideal, s: Polynomial, budget: Budget):
    ring = ideal.ring
    rt = extend_ring(ring)
    n = ring.nvars
    gens = [g.embed(rt) for g in ideal.generators]
    t = rt.gen(n)
    G = buchberger(Ideal(gens + [t - s.embed(rt)]), rt.lex(), budget)
    return _read_shape(G, n), G


def _read_shape(G: GroebnerBasis, n: int):
    if len(G.elements) != n + 1:
        return None
    fld = G.ring.field
    eta = None
    rho = [None] * n
    for g in G.elements:
        lm = g.leading_monomial(G.order)
        if not any(lm[:n]):
            if eta is not None:
                return None
            cs = [fld.zero] * (lm[n] + 1)
            for m, c in g.terms.items():
                cs[m[n]] = c
            eta = UniPoly(cs)
            continue
        support = [i for i in range(n) if lm[i]]
        if len(support) != 1 or lm[support[0]] != 1 or lm[n] != 0:
            return None
        i = support[0]
        cs = {}
        for m, c in g.terms.items():
            if m == lm:
                continue
            if any(m[:n]):
                return None
            cs[m[n]] = -c
        top = max(cs, default=-1)
        rho[i] = UniPoly([cs.get(e, fld.zero) for e in range(top + 1)])
    if eta is None or any(r is None for r in rho):
        return None
    return eta, tuple(rho)


def compute_pur(I, seed: int = 0, max_tries: int = 8, method: str = "fglm",
                budget: Budget = DEFAULT_BUDGET, s: Polynomial | None = None) -> PURRepresentation:
    """Shape-position lex basis of I + <t - s(x)> for a random linear s.

    ``method="fglm"`` derives the lex basis from the grevlex quotient by
    linear algebra (it is the reduced lex basis whenever the shape exists);
    ``method="lex"`` runs Buchberger directly under lex with t smallest.
    A caller-supplied ``s`` is tried first; random forms follow if it does
    not separate.
    """
    ideal = _as_ideal(I)
    ring = ideal.ring
    rng = random.Random(seed)
    bound = 10
    A = None
    G0 = None
    if method == "fglm":
        G0, A = _grevlex_algebra(ideal, budget)
        if A.dimension == 0:
            s = _draw_linear_form(rng, ring, bound)
            return PURRepresentation(UniPoly([ring.field.one]), tuple(UniPoly() for _ in range(ring.nvars)), s,
                                     _collect_guards(ring, G0.guards, []), tuple(ideal.generators), 1, method)
    elif method != "lex":
        raise ValueError(f"unknown PUR method {method!r}")
    last = None
    first = s
    for attempt in range(1, max_tries + 1):
        if attempt == 1 and first is not None:
            s = first
        else:
            s = _draw_linear_form(rng, ring, bound)
        if method == "fglm":
            got, inverted = _pur_by_change_of_order(A, s)
            guards = _collect_guards(ring, G0.guards, inverted)
            basis = None
        else:
            got, basis = _pur_by_lex_basis(ideal, s, budget)
            if basis.is_unit():
                return PURRepresentation(UniPoly([ring.field.one]), tuple(UniPoly() for _ in range(ring.nvars)), s,
                                         tuple(basis.guards), tuple(ideal.generators), attempt, method, basis)
            guards = tuple(basis.guards)
            last = basis
        if got is not None:
            eta, rho = got
            return PURRepresentation(eta, rho, s, guards, tuple(ideal.generators), attempt, method, basis)
        if attempt > 1 or first is None:
            bound *= 2
    raise ShapeFailure(f"no shape position after {max_tries} draws (ideal may not be radical)", max_tries, last)


def _collect_guards(ring: Ring, base, inverted) -> tuple:
    fld = ring.field
    if not getattr(fld, "parametric", False):
        return ()
    out = list(base)
    seen = set(out)
    for c in inverted:
        for q in fld.guard_polynomials(c):
            if q not in seen:
                seen.add(q)
                out.append(q)
    return tuple(out)


def substitute_mod(g: Polynomial, rho: Sequence[UniPoly], eta: UniPoly) -> UniPoly:
    """g(rho_1(t), ..., rho_n(t)) reduced modulo eta(t)."""
    if eta.degree < 1:
        return UniPoly()
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = UniPoly([g.ring.field.one]) if e == 0 else (power(i, e - 1) * rho[i]) % eta
        return cache[key]

    acc = UniPoly()
    for m, c in g.terms.items():
        term = UniPoly([c])
        for i, e in enumerate(m):
            if e:
                term = (term * power(i, e)) % eta
        acc = acc + term
    return acc % eta


def check_pur_identity(P: PURRepresentation) -> bool:
    """Every generator vanishes identically on x_i := rho_i(t) modulo eta."""
    return all(substitute_mod(g, P.rho, P.eta).is_zero() for g in P.generators)


def specialize_pur(P: PURRepresentation, theta) -> PURRepresentation:
    """Evaluate a parametric PUR at ``theta`` (raises DenominatorVanishes)."""
    from .ratfunc import DenominatorVanishes, specialize

    def spec_uni(u: UniPoly, idx):
        out = []
        for c in u.coeffs:
            try:
                out.append(c.evaluate(theta))
            except DenominatorVanishes:
                raise DenominatorVanishes(idx, theta) from None
        return UniPoly(out)

    eta = spec_uni(P.eta, "eta")
    if eta.degree != P.eta.degree:
        raise DenominatorVanishes("eta leading coefficient", theta)
    rho = tuple(spec_uni(r, f"rho[{i}]") for i, r in enumerate(P.rho))
    gens = tuple(specialize(g, theta) for g in P.generators)
    s = specialize(P.separating_s, theta)
    return PURRepresentation(eta, rho, s, (), gens, P.tries, P.method)


def solve_pur(P: PURRepresentation, tol=DEFAULT_TOL) -> list:
    if P.field != QQ:
        raise TypeError("solve_pur needs rational coefficients; specialize parameters first")
    tol = Fraction(tol)
    if P.eta.degree < 1:
        return []
    out = []
    for iv in isolate_roots(P.eta):
        coords, ok = _map_root(iv, tol, lambda x: [r.eval_interval(x) for r in P.rho])
        if not certify(P.generators, coords):
            continue
        out.append(SolutionBox(tuple(coords), CERTIFIED if ok else CANDIDATE))
    return sort_boxes(out)


# ---------------------------------------------------------------------------
# facade


def solve(I, algorithm: str = "eigen", tol=DEFAULT_TOL, seed: int = 0, budget: Budget = DEFAULT_BUDGET,
          separating: Polynomial | None = None) -> list:
    """Certified boxes for the real points of I.

    ``separating`` is a first-choice separating form for the rur/pur routes.
    """
    if algorithm == "eigen":
        return solve_eigen(I, tol, budget)
    if algorithm == "rur":
        R = None
        if separating is not None:
            try:
                R = compute_rur(I, separating, seed, budget=budget)
            except NonSeparating:
                R = None
        return solve_rur(R or compute_rur(I, "auto", seed, budget=budget), tol)
    if algorithm == "pur":
        return solve_pur(compute_pur(I, seed, budget=budget, s=separating), tol)
    raise ValueError(f"unknown algorithm {algorithm!r}")
