"""Worked examples for the polynomial core, normal forms and the quotient algebra."""

from fractions import Fraction

import pytest

from polyineq import Ideal, Interval, Ring, buchberger, mult_matrix, normal_form, parse, standard_basis, trace_form
from polyineq.groebner import elimination_basis, s_polynomial
from polyineq.poly import divide
from polyineq.quotient import is_zero_dimensional, real_count

R2 = Ring(("x", "y"))
Q = Ring(("x1", "x2"))
P1 = parse("-(16 - x1^2)*x2^2 + (-16 + x1^2 + 8*x2)^2", Q)
P2 = parse("5*x1^2 - x1^4 - 4*x2^2 + x2^4", Q)
CIRCLE_LINE = [parse("x^2 + y^2 - 1", R2), parse("x - y", R2)]


def circle_line_basis():
    return buchberger(Ideal(CIRCLE_LINE), R2.lex())


def test_arithmetic_examples():
    assert parse("x + 1", R2) + parse("-x", R2) == R2.one()
    assert parse("(x - y)*(x + y)", R2) == parse("x^2 - y^2", R2)
    square = parse("(-16 + x1^2 + 8*x2)^2", Q)
    assert square == parse("x1^4 + 16*x1^2*x2 - 32*x1^2 + 64*x2^2 - 256*x2 + 256", Q)
    expanded = parse("x1^2*x2^2 - 16*x2^2 + x1^4 + 16*x1^2*x2 - 32*x1^2 + 64*x2^2 - 256*x2 + 256"
                     " + 5*x1^2 - x1^4 - 4*x2^2 + x2^4", Q)
    assert P1 + P2 == expanded


def test_leading_terms():
    assert parse("x^2 + y^3", R2).leading_monomial(R2.lex()) == (2, 0)
    assert parse("x1*x2 + x2^2", Q).leading_monomial(Q.lex()) == (1, 1)
    c = R2.constant(Fraction(7, 3))
    assert c.leading_term(R2.lex()) == ((0, 0), Fraction(7, 3))


def test_division_examples():
    q, r = divide(parse("x^2", R2), [parse("x", R2)], R2.lex())
    assert q == [parse("x", R2)] and r.is_zero()
    _, r = divide(CIRCLE_LINE[0], [CIRCLE_LINE[1]], R2.lex())
    assert r == parse("2*y^2 - 1", R2)


def test_remainder_independent_of_basis_order():
    G = circle_line_basis()
    f = parse("x^3*y + 5*x - y^4", R2)
    r1 = divide(f, list(G.elements), R2.lex())[1]
    r2 = divide(f, list(reversed(G.elements)), R2.lex())[1]
    assert r1 == r2


def test_evaluation_examples():
    assert P1.evaluate([0, 0]) == 256
    assert P2.evaluate([0, 0]) == 0
    assert parse("x", R2).evaluate_interval([Interval(1, 1), Interval(0, 0)]) == Interval(1, 1)
    sq = parse("x^2", R2).evaluate_interval([Interval(-1, 2), Interval(0, 0)])
    assert sq.lo <= 0 and sq.hi >= 4
    e = Fraction(1, 2 * 10**6)
    enc = P1.evaluate_interval([Interval(-e, e), Interval(-e, e)])
    assert enc.contains(256) and enc.width < Fraction(1, 100)


def test_derivative_examples():
    assert parse("x^2*y", R2).diff("x") == parse("2*x*y", R2)
    assert R2.constant(5).diff(0).is_zero()


def test_s_polynomial_examples():
    f = parse("x^2 + y^2", R2)
    assert s_polynomial(f, f, R2.lex()).is_zero()
    assert s_polynomial(f, parse("x - y", R2), R2.lex()) == parse("x*y + y^2", R2)


def test_buchberger_examples():
    G = buchberger(Ideal([parse("x", R2), parse("y", R2)]), R2.lex())
    assert sorted(map(str, G.elements)) == ["x", "y"]
    assert sorted(map(str, circle_line_basis().elements)) == ["x - y", "y^2 - 1/2"]
    G = buchberger(Ideal([parse("3*x^2*y - 6", R2)]), R2.grevlex())
    assert [str(g) for g in G.elements] == ["x^2*y - 2"]


def test_normal_form_examples():
    G = circle_line_basis()
    assert normal_form(parse("x^2", R2), G) == R2.constant(Fraction(1, 2))
    assert normal_form(R2.one(), G) == R2.one()
    assert all(normal_form(g, G).is_zero() for g in CIRCLE_LINE)


def test_elimination_examples():
    G = circle_line_basis()
    assert sorted(map(str, elimination_basis(G, 0))) == ["x - y", "y^2 - 1/2"]
    assert [str(g) for g in elimination_basis(G, 1)] == ["y^2 - 1/2"]
    assert elimination_basis(G, 2) == []


def test_zero_dimensional_examples():
    assert is_zero_dimensional(circle_line_basis())
    assert not is_zero_dimensional(buchberger(Ideal([parse("x*y - 1", R2)]), R2.lex()))
    assert is_zero_dimensional(buchberger(Ideal([R2.one()]), R2.lex()))


def test_staircases():
    A = standard_basis(circle_line_basis())
    assert A.basis_monomials == ((0, 0), (0, 1))
    B = standard_basis(buchberger(Ideal([parse("x^2", R2), parse("y^2", R2)]), R2.lex()))
    assert sorted(B.basis_monomials) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    R1 = Ring(("x",))
    assert standard_basis(buchberger(Ideal([R1.gen(0)]), R1.lex())).basis_monomials == ((0,),)


def test_multiplication_matrices():
    A = standard_basis(circle_line_basis())
    half = Fraction(1, 2)
    assert mult_matrix(A, R2.one()).matrix == ((1, 0), (0, 1))
    assert mult_matrix(A, R2.gen("y")).matrix == ((0, half), (1, 0))
    assert mult_matrix(A, R2.gen("x")).matrix == mult_matrix(A, R2.gen("y")).matrix


def test_trace_forms_and_signature():
    A = standard_basis(circle_line_basis())
    T = trace_form(A)
    assert [list(r) for r in T] == [[2, 0], [0, 1]]
    assert real_count(T) == 2
    assert real_count(((Fraction(0),),)) == 0
    R1 = Ring(("x",))
    T = trace_form(standard_basis(buchberger(Ideal([parse("x^2 + 1", R1)]), R1.lex())))
    assert [list(r) for r in T] == [[2, 0], [0, -2]]
    assert real_count(T) == 0
    T = trace_form(standard_basis(buchberger(Ideal([R1.gen(0)]), R1.lex())))
    assert [list(r) for r in T] == [[1]]


def test_not_zero_dimensional_raises():
    from polyineq import NotZeroDimensional
    with pytest.raises(NotZeroDimensional):
        standard_basis(buchberger(Ideal([parse("x - y", R2)]), R2.grevlex()))
