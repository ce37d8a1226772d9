from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyineq import ParamField, Ring, parse
from polyineq.inequalities import (FEASIBLE, INFEASIBLE, FeasibilityProblem, Penalties, build_lagrangian,
                                   build_objective, draw_penalties, solve_feasibility, stationary_system)

R1 = Ring(("x",))
PEN_NAMES = ["alpha1", "alpha2", "beta1", "beta2", "gamma1", "gamma2", "delta1", "delta2"]
P1_TEXT = "-(16 - x1^2)*x2^2 + (-16 + x1^2 + 8*x2)^2"
P2_TEXT = "5*x1^2 - x1^4 - 4*x2^2 + x2^4"

# The six stationarity generators printed for the quartic pair with symbolic penalties.
REFERENCE_GENERATORS = [
    "v1*(10*x1 - 4*x1^3) + 2*v2*x1*((w2^2 - x2)^2 + 2*(-8*w2^2 + x1^2 + 8*(x2 - 2))) + 2*alpha1*(x1 - beta1)",
    "4*v1*((w1^2 - x2)^2 - 2)*(x2 - w1^2) - 2*v2*((x1^2 + 48)*w2^2 - 48*x2 - x1^2*(x2 + 8) + 128)"
    " + 2*alpha2*(x2 - beta2)",
    "-x1^4 + 5*x1^2 + (w1^2 - x2)^4 - 4*(w1^2 - x2)^2",
    "(-8*w2^2 + x1^2 + 8*(x2 - 2))^2 + (x1^2 - 16)*(w2^2 - x2)^2",
    "8*v1*w1*(2 - (w1^2 - x2)^2)*(x2 - w1^2) + 2*gamma1*(w1 - delta1)",
    "4*v2*w2*((x1^2 + 48)*w2^2 - 48*x2 - x1^2*(x2 + 8) + 128) + 2*gamma2*(w2 - delta2)",
]


def problem(texts, strict=0, pen=None, names=("x",)):
    R = Ring(tuple(names))
    return FeasibilityProblem(tuple(parse(t, R) for t in texts), strict, pen)


def unit_pen(alpha=1, beta=0, gamma=1, delta=0):
    return Penalties((Fraction(alpha),), (Fraction(beta),), (Fraction(gamma),), (Fraction(delta),))


def symbolic_quartic_pair():
    F = ParamField(PEN_NAMES)
    R = Ring(("x1", "x2"), F)
    a1, a2, b1, b2, g1, g2, d1, d2 = F.gens()
    pen = Penalties((a1, a2), (b1, b2), (g1, g2), (d1, d2))
    return FeasibilityProblem((parse(P1_TEXT, R), parse(P2_TEXT, R)), 0, pen)


def test_objective_examples():
    J = build_objective(problem(["x"], pen=unit_pen()))
    assert J == parse("x^2 + w1^2", J.ring)
    J = build_objective(problem(["x"], pen=unit_pen(2, 3, 1, 1)))
    assert J == parse("2*(x - 3)^2 + (w1 - 1)^2", J.ring)
    assert J.total_degree() == 2


def test_lagrangian_examples():
    H = build_lagrangian(problem(["x"], pen=unit_pen()))
    assert H == parse("x^2 + w1^2 + v1*(x - w1^2)", H.ring)
    H = build_lagrangian(problem(["x"], strict=1, pen=unit_pen()))
    assert H == parse("x^2 + w1^2 + v1*(w1^2*x - 1)", H.ring)


def test_stationary_system_example():
    I = stationary_system(problem(["x"], pen=unit_pen()))
    R = I.ring
    assert list(I.generators) == [parse("2*x + v1", R), parse("x - w1^2", R), parse("2*w1 - 2*v1*w1", R)]


def test_generator_count():
    prob = symbolic_quartic_pair()
    assert len(stationary_system(prob).generators) == prob.n + 2 * prob.s


def test_multiplier_partials_are_slack_constraints():
    prob = symbolic_quartic_pair()
    I = stationary_system(prob)
    R = I.ring
    assert I.generators[2] == parse(P1_TEXT, R) - parse("w1^2", R)
    assert I.generators[3] == parse(P2_TEXT, R) - parse("w2^2", R)


def test_reference_generators_are_gradient_of_substituted_lagrangian():
    """The printed generators are the gradient of J + v1 p2(x1, x2 - w1^2) + v2 p1(x1, x2 - w2^2).

    This pins down exactly how they differ from the slack form built here.
    """
    prob = symbolic_quartic_pair()
    I = stationary_system(prob)
    R = I.ring
    J = build_objective(prob)
    x1, x2 = R.gen("x1"), R.gen("x2")
    p1, p2 = parse(P1_TEXT, R), parse(P2_TEXT, R)
    v1, v2, w1, w2 = (R.gen(n) for n in ("v1", "v2", "w1", "w2"))
    H = J + v1 * p2.compose([x1, x2 - w1 * w1, v1, v2, w1, w2]) + v2 * p1.compose([x1, x2 - w2 * w2, v1, v2, w1, w2])
    reference = [parse(t, R) for t in REFERENCE_GENERATORS]
    assert reference == [H.diff(i) for i in range(R.nvars)]
    assert reference != list(I.generators)


def test_draw_penalties():
    a = draw_penalties(7, 2, 3)
    assert a == draw_penalties(7, 2, 3)
    assert all(x != 0 for x in a.alpha + a.gamma)
    assert all(1 <= x <= 10 for x in a.alpha + a.gamma)
    assert all(-10 <= x <= 10 for x in a.beta + a.delta)
    draws = {draw_penalties(seed, 2, 2) for seed in range(100)}
    assert len(draws) == 100
    assert draw_penalties(7, 2, 3, redraw=1) != a


def test_single_inequality_is_feasible():
    out = solve_feasibility(problem(["x"]))
    assert out.verdict == FEASIBLE
    for pt in out.points:
        assert pt.box.coordinates[0].lo >= -Fraction(1, 10**6)
        assert pt.margins[0].lo >= -Fraction(1, 10**6)


def test_strict_infeasible():
    out = solve_feasibility(problem(["-1 - x^2"], strict=1))
    assert out.verdict == INFEASIBLE
    assert out.points == [] and out.stationary_points_full == []


def test_nonstrict_infeasible_and_contradictory_pair():
    assert solve_feasibility(problem(["-1 - x^2"])).verdict == INFEASIBLE
    assert solve_feasibility(problem(["x - 1", "-x"], strict=2)).verdict == INFEASIBLE


@settings(max_examples=12)
@given(st.integers(-6, 6), st.integers(1, 4), st.integers(0, 1000))
def test_feasible_points_satisfy_quadratic(c, a, seed):
    """a - (x - c)^2 >= 0 is feasible; every reported point lies in [c - sqrt a, c + sqrt a]."""
    R = R1
    p = R.constant(a) - (R.gen(0) - c) ** 2
    prob = FeasibilityProblem((p,), 0, seed=seed)
    out = solve_feasibility(prob)
    assert out.verdict == FEASIBLE
    for pt in out.points:
        assert pt.margins[0].lo >= -Fraction(1, 10**6)
        assert p.evaluate([pt.midpoint[0]]) >= -Fraction(1, 10**6)


@pytest.mark.parametrize("alg", ["eigen", "rur", "pur"])
def test_algorithms_agree_on_small_problem(alg):
    out = solve_feasibility(problem(["1 - x^2", "x"], names=("x",)), alg)
    assert out.verdict == FEASIBLE
    assert all(Fraction(-1, 10**6) <= pt.midpoint[0] <= 1 for pt in out.points)
