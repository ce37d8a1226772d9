from fractions import Fraction
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyineq import Ideal, Ring, buchberger, compute_pur, compute_rur, parse, solve, standard_basis, trace_form
from polyineq.quotient import real_count
from polyineq.solvers import (CERTIFIED, NonSeparating, ShapeFailure, check_pur_identity, solve_pur, solve_rur,
                              substitute_mod)
from polyineq.corpus import CorpusConfig, random_systems

R2 = Ring(("x", "y"))
R1 = Ring(("x",))
CIRCLE_LINE = Ideal([parse("x^2 + y^2 - 1", R2), parse("x - y", R2)])
POINT = Ideal([parse("x - 1", R2), parse("y + 2", R2)])
ALGORITHMS = ("eigen", "rur", "pur")
SMALL = random_systems(CorpusConfig(size=6, seed=5, max_dimension=9))


def mids(boxes):
    return [tuple(float(c) for c in b.midpoint) for b in boxes]


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_circle_line(alg):
    boxes = solve(CIRCLE_LINE, alg)
    r = math.sqrt(0.5)
    assert all(b.status == CERTIFIED for b in boxes)
    got = sorted(mids(boxes))
    assert len(got) == 2
    for (x, y), (ex, ey) in zip(got, [(-r, -r), (r, r)]):
        assert abs(x - ex) < 1e-9 and abs(y - ey) < 1e-9
    for b in boxes:
        assert b.width <= Fraction(1, 10**9)


@pytest.mark.parametrize("alg", ALGORITHMS)
def test_point_and_empty_cases(alg):
    boxes = solve(POINT, alg)
    assert len(boxes) == 1 and boxes[0].midpoint == (1, -2)
    assert solve(Ideal([parse("x^2 + 1", R1)]), alg) == []
    assert solve(Ideal([R2.one()]), alg) == []
    roots = sorted(float(b.midpoint[0]) for b in solve(Ideal([parse("x^2 - 2", R1)]), alg))
    assert roots == pytest.approx([-math.sqrt(2), math.sqrt(2)], abs=1e-9)


def test_rur_with_chosen_form():
    R = compute_rur(CIRCLE_LINE, R2.gen("y"))
    assert list(R.chi_squarefree.monic().coeffs) == [Fraction(-1, 2), 0, 1]
    boxes = solve_rur(R)
    eig = solve(CIRCLE_LINE, "eigen")
    assert len(boxes) == 2 and all(sum(1 for e in eig if e.overlaps(b)) == 1 for b in boxes)
    R = compute_rur(Ideal([parse("x - 3", R1)]), R1.gen(0))
    assert list(R.chi.monic().coeffs) == [-3, 1]
    assert [b.midpoint for b in solve_rur(R)] == [(3,)]


def test_constant_form_does_not_separate():
    with pytest.raises(NonSeparating):
        compute_rur(CIRCLE_LINE, R2.constant(3))


def test_pur_examples():
    P = compute_pur(CIRCLE_LINE, s=R2.gen("y"))
    assert list(P.eta.coeffs) == [Fraction(-1, 2), 0, 1]
    assert [list(r.coeffs) for r in P.rho] == [[0, 1], [0, 1]]
    P = compute_pur(POINT, s=R2.gen(0) + R2.gen(1))
    assert list(P.eta.coeffs) == [1, 1]
    assert [list(r.coeffs) for r in P.rho] == [[1], [-2]]
    boxes = solve_pur(P)
    assert [b.midpoint for b in boxes] == [(1, -2)]


def test_pur_routes_agree():
    """The change-of-order and direct lex routes give the same shape basis for a fixed s."""
    for _, ideal in SMALL + [("circle", CIRCLE_LINE)]:
        s = ideal.ring.gen(0) + ideal.ring.gen(1) * 3
        try:
            a = compute_pur(ideal, method="fglm", s=s, max_tries=1)
        except ShapeFailure:
            with pytest.raises(ShapeFailure):
                compute_pur(ideal, method="lex", s=s, max_tries=1)
            continue
        b = compute_pur(ideal, method="lex", s=s, max_tries=1)
        assert a.eta == b.eta and a.rho == b.rho


def test_pur_identity_on_corpus():
    for _, ideal in SMALL:
        P = compute_pur(ideal)
        assert check_pur_identity(P)
        for g in ideal.generators:
            assert substitute_mod(g, P.rho, P.eta).is_zero()


def test_non_radical_ideal_is_reported():
    ideal = Ideal([parse("x^2", R2), parse("y^2", R2)])
    with pytest.raises(ShapeFailure):
        compute_pur(ideal, max_tries=3)
    # the eigen and rur routes work on the radical of the quotient
    assert [b.midpoint for b in solve(ideal, "eigen")] == [(0, 0)]
    assert [b.midpoint for b in solve(ideal, "rur")] == [(0, 0)]


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_random_forms_separate(seed):
    P = compute_pur(CIRCLE_LINE, seed=seed)
    assert P.eta.degree == 2 and P.tries <= 8


def test_cross_algorithm_counts_match_signature():
    for _, ideal in SMALL:
        count = real_count(trace_form(standard_basis(buchberger(ideal, ideal.ring.grevlex()))))
        sets = [solve(ideal, alg) for alg in ALGORITHMS]
        for boxes in sets:
            assert len(boxes) == count
            assert all(b.status == CERTIFIED for b in boxes)
        for boxes in sets[1:]:
            for b in boxes:
                assert sum(1 for a in sets[0] if a.overlaps(b)) == 1


def test_solution_boxes_contain_roots():
    """Each box straddles a sign change of every generator's univariate eliminant."""
    for _, ideal in SMALL:
        for b in solve(ideal, "pur"):
            for g in ideal.generators:
                assert g.evaluate_interval(b.coordinates).contains_zero()
