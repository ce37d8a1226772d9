"""Exact polynomial system solving and polynomial inequality feasibility.

Sparse polynomials over Q (or a parameter field Q(theta)), Buchberger's
algorithm, quotient-algebra linear algebra, three certified real solvers
(eigenvalue, rational univariate representation, lex shape basis), and a
Lagrangian reduction from inequalities to polynomial equations.
"""

from .groebner import Budget, BudgetExceeded, GroebnerBasis, Ideal, buchberger, elimination_basis, normal_form
from .inequalities import FeasibilityProblem, Penalties, solve_feasibility, stationary_system
from .interval import Interval
from .poly import QQ, MonomialOrder, ParseError, Polynomial, Ring, parse
from .quotient import NotZeroDimensional, QuotientAlgebra, mult_matrix, standard_basis, trace_form
from .ratfunc import ParamField, RationalFunction, specialize
from .solvers import SolutionBox, compute_pur, compute_rur, solve, solve_eigen, solve_pur, solve_rur
from .univariate import UniPoly, isolate_roots, refine, sturm_sequence

__all__ = [
    "Budget", "BudgetExceeded", "GroebnerBasis", "Ideal", "buchberger", "elimination_basis", "normal_form",
    "FeasibilityProblem", "Penalties", "solve_feasibility", "stationary_system",
    "Interval", "QQ", "MonomialOrder", "ParseError", "Polynomial", "Ring", "parse",
    "NotZeroDimensional", "QuotientAlgebra", "mult_matrix", "standard_basis", "trace_form",
    "ParamField", "RationalFunction", "specialize",
    "SolutionBox", "compute_pur", "compute_rur", "solve", "solve_eigen", "solve_pur", "solve_rur",
    "UniPoly", "isolate_roots", "refine", "sturm_sequence",
]
