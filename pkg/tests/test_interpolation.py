from fractions import Fraction

import pytest

from polyineq import Ideal, ParamField, Ring, buchberger, mult_matrix, parse, specialize, standard_basis
from polyineq.interpolation import InterpolationFailure, _lower_set, parametric_charpoly, verify_charpoly
from polyineq.quotient import rational_char_poly
from polyineq.univariate import UniPoly, char_poly

F = ParamField(["a", "b"])
R = Ring(("x", "y"), F)


def direct_charpoly(ideal, f):
    """Characteristic polynomial computed over Q(a, b) with no specialization."""
    A = standard_basis(buchberger(ideal, R.grevlex()))
    return char_poly(mult_matrix(A, f).matrix)


@pytest.mark.parametrize("gens,f", [
    (["x^2 - a", "y - b*x"], "x"),
    (["x^2 + y^2 - a", "x - y - b"], "y"),
    (["x^2 - a*x + b", "y^2 - x - b^2"], "x + 2*y"),
])
def test_matches_direct_computation(gens, f):
    ideal = Ideal([parse(g, R) for g in gens])
    fp = parse(f, R)
    got = parametric_charpoly(ideal, fp, seed=1)
    want = direct_charpoly(ideal, fp)
    assert got.chi == want
    assert verify_charpoly(got.chi, fp, got.generic_basis)


def test_exact_flag():
    ideal = Ideal([parse("x^2 - a", R), parse("y - b*x", R)])
    got = parametric_charpoly(ideal, R.gen(0), exact=True)
    assert got.exact
    assert got.chi == UniPoly([-F.parameter("a"), F.zero, F.one])


def test_specializes_like_the_specialized_ideal():
    ideal = Ideal([parse("x^2 + y^2 - a", R), parse("x - y - b", R)])
    got = parametric_charpoly(ideal, R.gen(1))
    RQ = R.with_field(__import__("polyineq").QQ)
    for theta in ([3, 1], [Fraction(1, 2), -2]):
        spec = Ideal([specialize(g, theta, RQ) for g in ideal.generators])
        A = standard_basis(buchberger(spec, RQ.grevlex()))
        expect = rational_char_poly(mult_matrix(A, RQ.gen(1)).matrix)
        assert [c.evaluate(theta) for c in got.chi.coeffs] == list(expect.coeffs)


def test_rational_coefficients_are_rejected():
    """A characteristic polynomial with a genuine denominator cannot be interpolated."""
    ideal = Ideal([parse("a*x - 1", R), parse("y - 1", R)])
    with pytest.raises(InterpolationFailure):
        parametric_charpoly(ideal, R.gen(0), max_degree=6)


def test_lower_set_is_downward_closed():
    S = set(_lower_set(3, 4))
    assert len(S) == 35
    for a in S:
        for i in range(3):
            if a[i]:
                assert tuple(a[j] - (j == i) for j in range(3)) in S
