"""Polynomial inequality feasibility through Lagrangian stationarity.

To find a point with p_k(x) >= 0 (k > l) and p_k(x) > 0 (k <= l), introduce a
slack w_k and multiplier v_k per inequality and look at the stationary points
of

    H = J + sum_{k<=l} v_k (w_k^2 p_k - 1) + sum_{k>l} v_k (p_k - w_k^2),
    J = sum_i alpha_i (x_i - beta_i)^2 + sum_k gamma_k (w_k - delta_k)^2.

Every real stationary point has p_k = w_k^2 >= 0 (resp. p_k = 1/w_k^2 > 0),
and a generic choice of penalties makes the stationary system zero-dimensional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .groebner import DEFAULT_BUDGET, Budget, Ideal
from .interval import Interval
from .poly import Polynomial, Ring
from .quotient import NotZeroDimensional
from .solvers import CERTIFIED, DEFAULT_TOL, ShapeFailure, SolutionBox, solve

FEASIBLE, INFEASIBLE, INDETERMINATE = "feasible", "infeasible", "indeterminate"
MAX_REDRAWS = 5


@dataclass(frozen=True)
class Penalties:
    alpha: tuple
    beta: tuple
    gamma: tuple
    delta: tuple

    def as_strings(self) -> dict:
        return {k: [str(c) for c in getattr(self, k)] for k in ("alpha", "beta", "gamma", "delta")}


@dataclass(frozen=True)
class FeasibilityProblem:
    polys: tuple
    strict_count: int = 0
    penalties: Penalties | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise ValueError("need at least one inequality")
        if not 0 <= self.strict_count <= len(self.polys):
            raise ValueError("strict_count out of range")
        ring = self.polys[0].ring
        if any(p.ring != ring for p in self.polys):
            raise ValueError("inequalities live in different rings")
        if self.penalties is not None:
            pen = self.penalties
            if len(pen.alpha) != ring.nvars or len(pen.beta) != ring.nvars:
                raise ValueError("alpha/beta must have one entry per variable")
            if len(pen.gamma) != len(self.polys) or len(pen.delta) != len(self.polys):
                raise ValueError("gamma/delta must have one entry per inequality")
            if any(a == 0 for a in pen.alpha) or any(g == 0 for g in pen.gamma):
                raise ValueError("alpha and gamma entries must be nonzero")

    @property
    def ring(self) -> Ring:
        return self.polys[0].ring

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def s(self) -> int:
        return len(self.polys)


def draw_penalties(seed: int, n: int, s: int, redraw: int = 0) -> Penalties:
    """Integer penalties: alpha, gamma in [1, 10], beta, delta in [-10, 10]."""
    rng = random.Random(seed if redraw == 0 else f"{seed}/{redraw}")
    alpha = tuple(Fraction(rng.randint(1, 10)) for _ in range(n))
    beta = tuple(Fraction(rng.randint(-10, 10)) for _ in range(n))
    gamma = tuple(Fraction(rng.randint(1, 10)) for _ in range(s))
    delta = tuple(Fraction(rng.randint(-10, 10)) for _ in range(s))
    return Penalties(alpha, beta, gamma, delta)


def _fresh(names: list, base: str) -> str:
    name = base
    while name in names:
        name += "_"
    names.append(name)
    return name


def lagrangian_ring(prob: FeasibilityProblem) -> Ring:
    """Ring over (x_1..x_n, v_1..v_s, w_1..w_s), same coefficient field."""
    names = list(prob.ring.names)
    for k in range(prob.s):
        _fresh(names, f"v{k + 1}")
    for k in range(prob.s):
        _fresh(names, f"w{k + 1}")
    return Ring(tuple(names), prob.ring.field)


def _penalties(prob: FeasibilityProblem) -> Penalties:
    return prob.penalties if prob.penalties is not None else draw_penalties(prob.seed, prob.n, prob.s)


def build_objective(prob: FeasibilityProblem) -> Polynomial:
    """J = sum alpha_i (x_i - beta_i)^2 + sum gamma_k (w_k - delta_k)^2, in R[x, v, w]."""
    R = lagrangian_ring(prob)
    pen = _penalties(prob)
    n, s = prob.n, prob.s
    J = R.zero()
    for i in range(n):
        J = J + (R.gen(i) - pen.beta[i]) ** 2 * pen.alpha[i]
    for k in range(s):
        J = J + (R.gen(n + s + k) - pen.delta[k]) ** 2 * pen.gamma[k]
    return J


def build_lagrangian(prob: FeasibilityProblem) -> Polynomial:
    R = lagrangian_ring(prob)
    n, s, l = prob.n, prob.s, prob.strict_count
    H = build_objective(prob)
    for k, p in enumerate(prob.polys):
        pk = p.embed(R)
        v, w = R.gen(n + k), R.gen(n + s + k)
        if k < l:
            H = H + v * (w * w * pk - 1)
        else:
            H = H + v * (pk - w * w)
    return H


def stationary_system(prob: FeasibilityProblem) -> Ideal:
    """All n + 2s partial derivatives of H, in variable order (x, v, w)."""
    H = build_lagrangian(prob)
    return Ideal([H.diff(i) for i in range(H.ring.nvars)])


@dataclass(frozen=True)
class FeasiblePoint:
    box: SolutionBox
    margins: tuple  # interval enclosure of each p_k on the box
    exact: bool  # every p_k certified (>= 0 or > 0) with no tolerance

    @property
    def midpoint(self) -> tuple:
        return self.box.midpoint


@dataclass
class FeasibilityOutcome:
    verdict: str
    points: list
    stationary_points_full: list
    penalties: Penalties
    redraws: int = 0
    algorithm: str = "pur"
    notes: list = field(default_factory=list)


def check_point(prob: FeasibilityProblem, coords: Sequence[Interval], tol=DEFAULT_TOL):
    """Interval-check the inequalities on an x-box.

    Returns (ok, exact, margins).  ``exact`` means every nonstrict p_k has a
    nonnegative lower bound and every strict one a positive lower bound;
    ``ok`` relaxes nonstrict ones to lower bound >= -tol, which is what a
    point on the boundary p_k = 0 can achieve with a box of nonzero width.
    """
    margins = tuple(p.evaluate_interval(coords) for p in prob.polys)
    exact = True
    ok = True
    for k, m in enumerate(margins):
        if k < prob.strict_count:
            if not m.lo > 0:
                exact = ok = False
        else:
            if m.lo < 0:
                exact = False
                if m.lo < -tol or m.hi < 0:
                    ok = False
    return ok, exact, margins


def _merge(boxes: list) -> list:
    out = []
    for b in boxes:
        if any(b.overlaps(o) for o in out):
            continue
        out.append(b)
    return out


def solve_feasibility(prob: FeasibilityProblem, algorithm: str = "pur", tol=DEFAULT_TOL,
                      accept_tol=Fraction(1, 10**6), budget: Budget = DEFAULT_BUDGET,
                      max_redraws: int = MAX_REDRAWS, separating: int | None = None) -> FeasibilityOutcome:
    """Solve the stationary system and read off feasible points.

    Verdicts: feasible when some projected point passes :func:`check_point`;
    infeasible when the certified stationary set is empty; indeterminate
    otherwise.  Penalties are redrawn (up to ``max_redraws`` times) when the
    stationary system is not zero-dimensional or the solver cannot put it in
    shape position.  ``separating`` optionally names an x-variable (by index)
    to try first as the separating form of the rur/pur routes.
    """
    notes = []
    last_exc = None
    for redraw in range(max_redraws + 1):
        if redraw == 0 and prob.penalties is not None:
            pen = prob.penalties
        else:
            pen = draw_penalties(prob.seed, prob.n, prob.s, redraw)
        attempt = replace(prob, penalties=pen)
        ideal = stationary_system(attempt)
        try:
            sep = ideal.ring.gen(separating) if separating is not None else None
            boxes = solve(ideal, algorithm, tol, seed=prob.seed + redraw, budget=budget, separating=sep)
        except (NotZeroDimensional, ShapeFailure) as exc:
            last_exc = exc
            notes.append(f"redraw {redraw}: {exc}")
            continue
        break
    else:
        return FeasibilityOutcome(INDETERMINATE, [], [], pen, max_redraws, algorithm,
                                  notes + [f"redraw cap reached: {last_exc}"])
    certified = [b for b in boxes if b.status == CERTIFIED]
    if not boxes:
        notes.append("empty certified stationary set: infeasible per the Lagrangian reduction")
        return FeasibilityOutcome(INFEASIBLE, [], [], pen, redraw, algorithm, notes)
    n = prob.n
    points = []
    for b in _merge([b.project(range(n)) for b in certified]):
        ok, exact, margins = check_point(prob, b.coordinates, accept_tol)
        if ok:
            points.append(FeasiblePoint(b, margins, exact))
    if points:
        verdict = FEASIBLE
    else:
        verdict = INDETERMINATE
        notes.append("no stationary point passed direct certification")
    return FeasibilityOutcome(verdict, points, boxes, pen, redraw, algorithm, notes)
