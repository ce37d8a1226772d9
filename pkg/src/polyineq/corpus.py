"""Seeded random zero-dimensional systems for cross-checking the solvers."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .groebner import Ideal, buchberger
from .poly import Ring, parse
from .quotient import is_zero_dimensional, rank_of, standard_basis, trace_form


@dataclass(frozen=True)
class CorpusConfig:
    size: int = 24
    seed: int = 2024
    nvars: tuple = (2, 3)
    max_degree: int = 3
    max_dimension: int = 20  # keep the quotient small enough for exact solving
    coeff_bound: int = 5
    terms: int = 4
    radical: bool = True  # shape-basis solving needs a radical ideal


def _random_poly(rng: random.Random, ring: Ring, degree: int, cfg: CorpusConfig):
    n = ring.nvars
    monos = [m for m in itertools.product(range(degree + 1), repeat=n) if sum(m) <= degree]
    top = [m for m in monos if sum(m) == degree]
    chosen = {rng.choice(top)}
    while len(chosen) < min(cfg.terms, len(monos)):
        chosen.add(rng.choice(monos))
    terms = {}
    for m in chosen:
        c = 0
        while c == 0:
            c = rng.randint(-cfg.coeff_bound, cfg.coeff_bound)
        terms[m] = c
    return ring.from_dict(terms)


def random_systems(cfg: CorpusConfig = CorpusConfig()) -> list:
    """``cfg.size`` zero-dimensional systems as (name, Ideal) pairs."""
    rng = random.Random(cfg.seed)
    names = ("x", "y", "z")
    out = []
    while len(out) < cfg.size:
        n = rng.choice(cfg.nvars)
        ring = Ring(names[:n])
        degrees = [rng.randint(1, cfg.max_degree) for _ in range(n)]
        gens = [_random_poly(rng, ring, d, cfg) for d in degrees]
        ideal = Ideal(gens, ring)
        G = buchberger(ideal, ring.grevlex())
        if G.is_unit() or not is_zero_dimensional(G):
            continue
        A = standard_basis(G)
        if A.dimension > cfg.max_dimension:
            continue
        if cfg.radical and rank_of(trace_form(A)) != A.dimension:
            continue
        out.append((f"random{len(out):02d}", ideal))
    return out


def fixtures() -> list:
    """The hand-made systems: circle/line, x^2 + 1, x^2 - 2 and a shifted point."""
    R2 = Ring(("x", "y"))
    R1 = Ring(("x",))
    return [
        ("circle_line", Ideal([parse("x^2 + y^2 - 1", R2), parse("x - y", R2)])),
        ("no_real_points", Ideal([parse("x^2 + 1", R1)])),
        ("sqrt2", Ideal([parse("x^2 - 2", R1)])),
        ("point", Ideal([parse("x - 1", R2), parse("y + 2", R2)])),
    ]


def corpus(cfg: CorpusConfig = CorpusConfig()) -> list:
    return fixtures() + random_systems(cfg)
