"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from polyineq import Ring

R2 = Ring(("x", "y"))
R3 = Ring(("x", "y", "z"))

small_fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6))
nonzero_fractions = small_fractions.filter(lambda q: q != 0)


def polynomials(ring=R2, max_terms=5, max_exp=3):
    monomial = st.tuples(*[st.integers(0, max_exp) for _ in range(ring.nvars)])
    return st.dictionaries(monomial, nonzero_fractions, max_size=max_terms).map(ring.from_dict)


def uni_coeffs(max_degree=8, bound=30):
    return st.lists(st.integers(-bound, bound), min_size=2, max_size=max_degree + 1).filter(
        lambda cs: cs[-1] != 0)
