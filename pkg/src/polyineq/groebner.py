"""Reduced Groebner bases by Buchberger's algorithm.

Pairs are processed by the normal strategy (smallest lcm degree first, ties
broken by the monomial order) and pruned with the Gebauer-Moeller update,
which implements Buchberger's product and chain criteria.

Over the rationals the reduction runs fraction-free on primitive integer
polynomials; any other field uses monic reducers and field division.  For
parametric fields the leading coefficients inverted along the way are kept
as *guards*: the result is valid at every parameter value where no guard
vanishes.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .poly import (
    QQ,
    MonomialOrder,
    Polynomial,
    Ring,
    RingMismatch,
    mono_div,
    mono_divides,
    mono_lcm,
)


class BudgetExceeded(RuntimeError):
    """Groebner computation stopped by its step/degree/time budget."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 200_000
    max_degree: int = 200
    max_seconds: float | None = None


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple

    def __init__(self, generators: Sequence[Polynomial], ring: Ring | None = None):
        gens = tuple(generators)
        if ring is None:
            if not gens:
                raise ValueError("an ideal needs generators or a ring")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise RingMismatch(f"{g.ring} vs {ring}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(g for g in gens if not g.is_zero()))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic basis sorted by ascending leading monomial."""

    ring: Ring
    order: MonomialOrder
    elements: tuple
    guards: tuple = dc_field(default=())

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def leading_monomials(self) -> list:
        return [g.leading_monomial(self.order) for g in self.elements]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()


# ---------------------------------------------------------------------------
# integer keys for monomials


def _int_key(order: MonomialOrder):
    """Map monomials to ints increasing with the order (exponents < 2**20)."""
    shift = 20
    n = order.nvars
    perm = order.perm
    if order.kind == "lex":
        def key(m):
            k = 0
            for i in perm:
                k = (k << shift) | m[i]
            return k
    else:
        rev = tuple(reversed(perm))
        top = (1 << shift) - 1

        def key(m):
            k = sum(m)
            for i in rev:
                k = (k << shift) | (top - m[i])
            return k
    return key


class _Keys(dict):
    def __init__(self, order):
        super().__init__()
        self.fn = _int_key(order)

    def __missing__(self, m):
        k = self[m] = self.fn(m)
        return k


# ---------------------------------------------------------------------------
# coefficient handling


def _primitive_int(terms: dict) -> dict:
    """Scale a rational polynomial to a primitive integer one, positive lc unknown."""
    den = 1
    for c in terms.values():
        if isinstance(c, Fraction):
            d = c.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
    out = {m: int(c * den) for m, c in terms.items()}
    g = 0
    for c in out.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    if g > 1:
        out = {m: c // g for m, c in out.items()}
    return out


def _content_divide(terms: dict) -> dict:
    g = 0
    for c in terms.values():
        g = math.gcd(g, c)
        if g == 1:
            return terms
    if g > 1:
        return {m: c // g for m, c in terms.items()}
    return terms


class _IntArith:
    """Fraction-free arithmetic for rational coefficients."""

    def load(self, terms: dict) -> dict:
        return _primitive_int(terms)

    def prepare(self, terms: dict, keys) -> dict:
        t = _primitive_int(terms)
        lm = max(t, key=keys.__getitem__)
        if t[lm] < 0:
            t = {m: -c for m, c in t.items()}
        return t

    def spoly(self, f, lmf, g, lmg, lcm):
        a, b = f[lmf], g[lmg]
        d = math.gcd(a, b)
        fa, gb = b // d, a // d
        tf, tg = mono_div(lcm, lmf), mono_div(lcm, lmg)
        out = {}
        for m, c in f.items():
            out[tuple([x + y for x, y in zip(m, tf)])] = fa * c
        for m, c in g.items():
            k = tuple([x + y for x, y in zip(m, tg)])
            v = out.get(k, 0) - gb * c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def reduce(self, p: dict, basis, lms, keys, full: bool = True, skip: int = -1) -> dict:
        """Reduce ``p`` by ``basis`` (integer dicts); returns a primitive result."""
        p = dict(p)
        heap = [-keys[m] for m in p]
        heapq.heapify(heap)
        key_to_mono = {keys[m]: m for m in p}
        done = set()
        steps = 0
        while heap:
            k = -heapq.heappop(heap)
            m = key_to_mono.get(k)
            if m is None or k in done or m not in p:
                continue
            done.add(k)
            for j, lm in enumerate(lms):
                if j != skip and mono_divides(lm, m):
                    break
            else:
                if not full:
                    return _content_divide(p)
                continue
            g = basis[j]
            c = p[m]
            b = g[lm]
            d = math.gcd(c, b)
            fp, fg = b // d, c // d
            if fp != 1:
                if fp == -1:
                    p = {mm: -v for mm, v in p.items()}
                else:
                    p = {mm: fp * v for mm, v in p.items()}
            t = mono_div(m, lm)
            for gm, gc in g.items():
                kk = tuple([x + y for x, y in zip(gm, t)])
                v = p.get(kk)
                if v is None:
                    p[kk] = -fg * gc
                    ik = keys[kk]
                    if ik not in key_to_mono:
                        key_to_mono[ik] = kk
                    heapq.heappush(heap, -ik)
                else:
                    v -= fg * gc
                    if v:
                        p[kk] = v
                    else:
                        del p[kk]
            steps += 1
            if steps % 8 == 0:
                p = _content_divide(p)
        return _content_divide(p)

    def finish(self, terms: dict, ring: Ring, keys):
        lm = max(terms, key=keys.__getitem__)
        lc = terms[lm]
        return Polynomial(ring, {m: Fraction(c, lc) for m, c in terms.items()}), lc


class _FieldArith:
    """Monic arithmetic over an arbitrary field."""

    def __init__(self, field):
        self.field = field
        self.inverted: list = []

    def load(self, terms: dict) -> dict:
        return dict(terms)

    def prepare(self, terms: dict, keys) -> dict:
        lm = max(terms, key=keys.__getitem__)
        lc = terms[lm]
        if lc != 1:
            self.inverted.append(lc)
            terms = {m: c / lc for m, c in terms.items()}
        return terms

    def spoly(self, f, lmf, g, lmg, lcm):
        tf, tg = mono_div(lcm, lmf), mono_div(lcm, lmg)
        out = {}
        for m, c in f.items():
            out[tuple([x + y for x, y in zip(m, tf)])] = c
        for m, c in g.items():
            k = tuple([x + y for x, y in zip(m, tg)])
            v = out.get(k)
            v = -c if v is None else v - c
            if v != 0:
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def reduce(self, p: dict, basis, lms, keys, full: bool = True, skip: int = -1) -> dict:
        p = dict(p)
        heap = [-keys[m] for m in p]
        heapq.heapify(heap)
        key_to_mono = {keys[m]: m for m in p}
        done = set()
        while heap:
            k = -heapq.heappop(heap)
            m = key_to_mono.get(k)
            if m is None or k in done or m not in p:
                continue
            done.add(k)
            for j, lm in enumerate(lms):
                if j != skip and mono_divides(lm, m):
                    break
            else:
                if not full:
                    return p
                continue
            g = basis[j]
            c = p[m]
            t = mono_div(m, lm)
            for gm, gc in g.items():
                kk = tuple([x + y for x, y in zip(gm, t)])
                v = p.get(kk)
                if v is None:
                    p[kk] = -c * gc
                    ik = keys[kk]
                    if ik not in key_to_mono:
                        key_to_mono[ik] = kk
                    heapq.heappush(heap, -ik)
                else:
                    v = v - c * gc
                    if v != 0:
                        p[kk] = v
                    else:
                        del p[kk]
        return p

    def finish(self, terms: dict, ring: Ring, keys):
        lm = max(terms, key=keys.__getitem__)
        lc = terms[lm]
        if lc != 1:
            self.inverted.append(lc)
            terms = {m: c / lc for m, c in terms.items()}
        return Polynomial(ring, terms), lc


def _poly_content(coeffs) -> object:
    g = None
    for c in sorted(coeffs, key=lambda q: len(q)):
        g = c if g is None else g.gcd(c)
        if g.is_one():
            break
    return g


class _PolyArith:
    """Fraction-free arithmetic over Z[theta] for a parameter field Q(theta).

    Elements are dicts of fmpz_mpoly coefficients, kept primitive (coefficient
    content divided out).  Pseudo-reduction multiplies by leading
    coefficients instead of dividing, so no rational functions appear until
    :meth:`finish`.  Every leading coefficient that the field version would
    invert is recorded, so the specialization guards are the same.
    """

    def __init__(self, field):
        self.field = field
        self.leading: list = []

    def _primitive(self, terms: dict) -> dict:
        g = _poly_content(terms.values())
        if g is None or g.is_one():
            return terms
        if g.is_constant():
            g = g.leading_coefficient()
            if g == 1 or g == -1:
                return terms
        return {m: c / g for m, c in terms.items()}

    def load(self, terms: dict) -> dict:
        items = list(terms.items())
        qs = self.field.clear_denominators([c for _, c in items])
        return self._primitive({m: q for (m, _), q in zip(items, qs)})

    def _normalized(self, t: dict, keys) -> dict:
        lm = max(t, key=keys.__getitem__)
        if t[lm].leading_coefficient() < 0:
            t = {m: -c for m, c in t.items()}
        return t, lm

    def prepare(self, terms: dict, keys) -> dict:
        t, lm = self._normalized(self._primitive(terms), keys)
        if not t[lm].is_constant():
            self.leading.append(t[lm])
        return t

    def spoly(self, f, lmf, g, lmg, lcm):
        a, b = f[lmf], g[lmg]
        d = a.gcd(b)
        fa, gb = b / d, a / d
        tf, tg = mono_div(lcm, lmf), mono_div(lcm, lmg)
        out = {}
        for m, c in f.items():
            out[tuple([x + y for x, y in zip(m, tf)])] = fa * c
        for m, c in g.items():
            k = tuple([x + y for x, y in zip(m, tg)])
            v = out.get(k)
            v = -(gb * c) if v is None else v - gb * c
            if not v.is_zero():
                out[k] = v
            else:
                out.pop(k, None)
        return out

    def reduce(self, p: dict, basis, lms, keys, full: bool = True, skip: int = -1) -> dict:
        p = dict(p)
        heap = [-keys[m] for m in p]
        heapq.heapify(heap)
        key_to_mono = {keys[m]: m for m in p}
        done = set()
        steps = 0
        while heap:
            k = -heapq.heappop(heap)
            m = key_to_mono.get(k)
            if m is None or k in done or m not in p:
                continue
            done.add(k)
            for j, lm in enumerate(lms):
                if j != skip and mono_divides(lm, m):
                    break
            else:
                if not full:
                    return self._primitive(p)
                continue
            g = basis[j]
            c = p[m]
            b = g[lm]
            d = c.gcd(b)
            fp, fg = b / d, c / d
            if not fp.is_one():
                p = {mm: fp * v for mm, v in p.items()}
            t = mono_div(m, lm)
            for gm, gc in g.items():
                kk = tuple([x + y for x, y in zip(gm, t)])
                v = p.get(kk)
                if v is None:
                    p[kk] = -(fg * gc)
                    ik = keys[kk]
                    if ik not in key_to_mono:
                        key_to_mono[ik] = kk
                    heapq.heappush(heap, -ik)
                else:
                    v = v - fg * gc
                    if not v.is_zero():
                        p[kk] = v
                    else:
                        del p[kk]
            steps += 1
            if steps % 4 == 0:
                p = self._primitive(p)
        return self._primitive(p)

    @property
    def inverted(self) -> list:
        return [self.field.from_integral(q) for q in self.leading]

    def finish(self, terms: dict, ring: Ring, keys):
        t, lm = self._normalized(self._primitive(terms), keys)
        lc = t[lm]
        if not lc.is_constant():
            self.leading.append(lc)
        F = self.field
        return Polynomial(ring, {m: F.from_integral(c, lc) for m, c in t.items()}), F.from_integral(lc)


def _arith(ring: Ring):
    if ring.field == QQ:
        return _IntArith()
    if hasattr(ring.field, "clear_denominators"):
        return _PolyArith(ring.field)
    return _FieldArith(ring.field)


# ---------------------------------------------------------------------------
# Buchberger


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S(f, g) = (L/LT(f))*f - (L/LT(g))*g with L the lcm of leading monomials."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    lmf, lcf = f.leading_term(order)
    lmg, lcg = g.leading_term(order)
    lcm = mono_lcm(lmf, lmg)
    return f.mul_term(mono_div(lcm, lmf), 1 / lcf) - g.mul_term(mono_div(lcm, lmg), 1 / lcg)


def _update(G_lms, live, pairs, new_idx, new_lm, pair_key):
    """Gebauer-Moeller installation of a new basis element.

    ``G_lms`` holds every leading monomial ever installed; ``live`` the same
    list with superseded entries replaced by None.
    """
    # drop old pairs whose lcm is strictly divisible by the new leading monomial
    kept = []
    for (i, j, L) in pairs:
        if (
            mono_divides(new_lm, L)
            and mono_lcm(G_lms[i], new_lm) != L
            and mono_lcm(G_lms[j], new_lm) != L
        ):
            continue
        kept.append((i, j, L))
    # candidate pairs with the new element
    cands = []
    for i, lm in enumerate(live):
        if lm is None or i == new_idx:
            continue
        L = mono_lcm(lm, new_lm)
        coprime = all(a == 0 or b == 0 for a, b in zip(lm, new_lm))
        cands.append((L, i, coprime))
    # chain criterion among the new pairs: keep only lcm-minimal ones
    by_lcm: dict = {}
    for L, i, coprime in cands:
        by_lcm.setdefault(L, []).append((i, coprime))
    lcms = sorted(by_lcm, key=pair_key)
    minimal = []
    for L in lcms:
        if not any(mono_divides(M, L) for M in minimal):
            minimal.append(L)
    for L in minimal:
        group = by_lcm[L]
        # product criterion: if any element of the group is coprime, the lcm is useless
        if any(coprime for _, coprime in group):
            continue
        i = min(i for i, _ in group)
        kept.append((i, new_idx, L))
    return kept


def buchberger(
    ideal: Ideal | Sequence[Polynomial],
    order: MonomialOrder | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(ideal)
    ring = ideal.ring
    order = order or ring.lex()
    if order.nvars != ring.nvars:
        raise ValueError("order arity does not match ring")
    keys = _Keys(order)
    arith = _arith(ring)
    start = time.monotonic()

    def pair_key(L):
        # normal strategy: smallest lcm in the monomial order itself
        return keys[L]

    gens = [arith.load(g.terms) for g in ideal.generators if not g.is_zero()]
    if not gens:
        return GroebnerBasis(ring, order, (), ())
    for g in gens:
        if len(g) == 1 and ring.zero_monomial in g:
            return GroebnerBasis(ring, order, (ring.one(),), tuple(_guards(ring, arith)))

    basis: list = []      # integer or monic dicts, by index
    all_lms: list = []    # leading monomial of every element ever installed
    active: list = []     # False once a later leading monomial divides it
    pairs: list = []

    def install(p):
        nonlocal pairs
        p = arith.prepare(p, keys)
        lm = max(p, key=keys.__getitem__)
        idx = len(basis)
        basis.append(p)
        all_lms.append(lm)
        active.append(True)
        live = [lm_ if active[k] else None for k, lm_ in enumerate(all_lms)]
        pairs = _update(all_lms, live, pairs, idx, lm, pair_key)
        for k in range(idx):
            if active[k] and mono_divides(lm, all_lms[k]):
                active[k] = False

    def reducers():
        idx = [k for k in range(len(basis)) if active[k]]
        return [basis[k] for k in idx], [all_lms[k] for k in idx]

    gens.sort(key=lambda d: pair_key(max(d, key=keys.__getitem__)))
    for g in gens:
        r = arith.reduce(g, *reducers(), keys)
        if not r:
            continue
        if len(r) == 1 and ring.zero_monomial in r:
            return GroebnerBasis(ring, order, (ring.one(),), tuple(_guards(ring, arith)))
        install(r)

    processed = 0
    while pairs:
        pairs.sort(key=lambda t: pair_key(t[2]), reverse=True)
        i, j, L = pairs.pop()
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} S-pairs")
        if sum(L) > budget.max_degree:
            raise BudgetExceeded(f"S-pair degree {sum(L)} exceeds {budget.max_degree}")
        if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
            raise BudgetExceeded(f"time budget of {budget.max_seconds}s exhausted")
        s = arith.spoly(basis[i], all_lms[i], basis[j], all_lms[j], L)
        if not s:
            continue
        r = arith.reduce(s, *reducers(), keys)
        if not r:
            continue
        if len(r) == 1 and ring.zero_monomial in r:
            return GroebnerBasis(ring, order, (ring.one(),), tuple(_guards(ring, arith)))
        install(r)

    # minimal basis, then full inter-reduction
    polys, leads = reducers()
    perm = sorted(range(len(polys)), key=lambda k: keys[leads[k]])
    polys = [polys[k] for k in perm]
    leads = [leads[k] for k in perm]
    elements = []
    for idx, p in enumerate(polys):
        r = arith.reduce(p, polys, leads, keys, skip=idx)
        poly, _ = arith.finish(r, ring, keys)
        elements.append(poly)
    return GroebnerBasis(ring, order, tuple(elements), tuple(_guards(ring, arith, elements)))


def _guards(ring: Ring, arith, elements=()):
    field = ring.field
    if not getattr(field, "parametric", False):
        return []
    found = []
    seen = set()
    candidates = list(getattr(arith, "inverted", []))
    for g in elements:
        candidates.extend(g.terms.values())
    for c in candidates:
        for q in field.guard_polynomials(c):
            if q not in seen:
                seen.add(q)
                found.append(q)
    return found


# ---------------------------------------------------------------------------
# queries on a basis


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by ``G``; zero iff ``f`` lies in the ideal."""
    if f.ring != G.ring:
        raise RingMismatch(f"{f.ring} vs {G.ring}")
    if f.is_zero() or not G.elements:
        return f
    keys = _Keys(G.order)
    arith = _FieldArith(G.ring.field)
    basis = [g.terms for g in G.elements]
    lms = G.leading_monomials
    return Polynomial(G.ring, arith.reduce(f.terms, basis, lms, keys))


def elimination_basis(G: GroebnerBasis, j: int) -> list:
    """Elements of a lex basis free of the ``j`` greatest variables.

    By the Elimination Theorem these form a reduced Groebner basis of the
    ``j``-th elimination ideal.
    """
    if G.order.kind != "lex":
        raise ValueError("elimination needs a lex basis")
    n = G.ring.nvars
    if not 0 <= j <= n:
        raise ValueError(f"j must lie in [0, {n}]")
    eliminated = set(G.order.perm[:j])
    return [g for g in G.elements if not (g.variables() & eliminated)]


def is_groebner(polys: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return True
    ring = polys[0].ring
    keys = _Keys(order)
    arith = _FieldArith(ring.field)
    monic = [p.monic(order) for p in polys]
    basis = [p.terms for p in monic]
    lms = [p.leading_monomial(order) for p in monic]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            L = mono_lcm(lms[a], lms[b])
            s = arith.spoly(basis[a], lms[a], basis[b], lms[b], L)
            if s and arith.reduce(s, basis, lms, keys):
                return False
    return True


def is_reduced(polys: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Monic, and no term of any element divisible by another's leading monomial."""
    lms = [p.leading_monomial(order) for p in polys]
    for i, p in enumerate(polys):
        if p.leading_coefficient(order) != 1:
            return False
        for m in p.terms:
            for j, lm in enumerate(lms):
                if j != i and mono_divides(lm, m):
                    return False
    return True
