import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyineq import Ring, parse
from polyineq import sof
from polyineq.interval import Interval

from conftest import data_path

CFG = sof.PlantConfig.load(data_path("synthetic_plant.json"))


def feasible_gain_range(cfg, theta):
    """Closed-form set of K satisfying both strict conditions, or None.

    For this plant p_1 = -b_a K - theta_1 and p_2 = -b_q K - theta_2 are affine
    in K, so 4 p_2 - p_1^2 > 0 is an open interval between the real roots of a
    quadratic and p_1 > 2 lambda a half line.
    """
    th1, th2 = (float(t) for t in theta)
    ba, bq, lam = float(cfg.b_alpha), float(cfg.b_q), float(cfg.lam)
    # 4(-bq K - th2) - (-ba K - th1)^2 = -(ba^2) K^2 - (2 ba th1 + 4 bq) K - (th1^2 + 4 th2)
    a, b, c = -ba * ba, -(2 * ba * th1 + 4 * bq), -(th1 * th1 + 4 * th2)
    disc = b * b - 4 * a * c
    if disc <= 0:
        return None
    r1, r2 = sorted(((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a)))
    # p_1 > 2 lambda  <=>  -ba K > 2 lambda + th1
    k0 = (2 * lam + th1) / (-ba)
    lo, hi = (max(r1, k0), r2) if -ba > 0 else (r1, min(r2, k0))
    return (lo, hi) if lo < hi else None


@pytest.fixture(scope="module")
def pg():
    return sof.parametric_gain(CFG, seed=0)


def test_config_round_trip(tmp_path):
    path = tmp_path / "plant.json"
    path.write_text(__import__("json").dumps(CFG.dump()))
    assert sof.PlantConfig.load(path) == CFG
    assert CFG.lam == 15


def test_characteristic_polynomial_structure():
    chi = sof.closed_loop_charpoly(CFG)
    R = chi.ring
    assert chi.subs({"K": Fraction(0), "theta1": Fraction(0), "theta2": Fraction(0)}) == parse("s^2", R)
    p1 = chi.diff("s").subs({"s": Fraction(0)})
    M = CFG.M
    assert p1 == R.gen("K") * (-M * CFG.kappa_alpha * CFG.d_n) - R.gen("theta1")


def test_trace_and_determinant():
    R = Ring(("s", "K", "theta1", "theta2"))
    A = sof.closed_loop_matrix(CFG, R)
    tr = A[0][0] + A[1][1]
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    p1, p2 = sof.coefficient_polys(CFG, R)
    assert p1 == -tr and p2 == det
    s = R.gen("s")
    assert sof.closed_loop_charpoly(CFG) == s * s + p1 * s + p2


def test_condition_shapes():
    prob = sof.stability_conditions(CFG)
    assert prob.strict_count == 2
    assert all(p.total_degree() <= 2 for p in prob.polys)
    R = prob.ring
    p1, _ = sof.coefficient_polys(CFG, R)
    assert prob.polys[1] == p1 - 30


def test_open_loop_stable_point_accepts_small_gain():
    theta = (-40, -500)
    lo, hi = feasible_gain_range(CFG, theta)
    assert lo < 0 < hi
    r = sof.gain_at(CFG, theta, None)
    assert r.certified and lo < float(r.K.mid) < hi


def test_infeasible_point_has_no_row():
    theta = (-9, 10)
    assert feasible_gain_range(CFG, theta) is None
    r = sof.gain_at(CFG, theta, None)
    assert not r.certified and r.K is None
    assert sof.numeric_gains(CFG, theta) == []


@settings(max_examples=8)
@given(st.integers(-3, 5), st.integers(-20, 20))
def test_numeric_gain_inside_closed_form_range(t1, t2):
    theta = (t1, t2)
    rng = feasible_gain_range(CFG, theta)
    Ks = sof.certified_gains(CFG, theta, sof.numeric_gains(CFG, theta))
    if rng is None:
        assert Ks == []
        return
    assert Ks
    for K in Ks:
        assert rng[0] - 1e-9 <= float(K.lo) and float(K.hi) <= rng[1] + 1e-9


def test_parametric_matches_numeric(pg):
    for theta in [(-3, -20), (5, 20), (Fraction(1, 3), 7), (0, 0)]:
        assert pg.guards_ok(theta)
        agreement = sof.compare_pipelines(CFG, theta, pg)
        assert agreement.agree, agreement
        assert agreement.parametric


def test_parametric_eta_has_polynomial_coefficients(pg):
    assert pg.rho_K.coeffs == (pg.eta.coeffs[0].field.zero, pg.eta.coeffs[0].field.one)
    assert all(c.den.is_one() for c in pg.eta.coeffs)


def test_guards_vanish_on_their_zero_set(pg):
    th1 = Fraction(-10)
    assert any(g.evaluate([th1, 3]) == 0 for g in pg.guards) or not pg.guards_ok((th1, 3))


def test_gain_table_rows_certified_and_deterministic(pg):
    grid = sof.theta_grid((-3, 5), (-20, 20), 2, 2)
    a = sof.gain_table(CFG, grid, pg=pg)
    b = sof.gain_table(CFG, grid, pg=pg)
    assert [r.row() for r in a] == [r.row() for r in b]
    for r in a:
        assert r.certified
        m = sof.condition_margins(CFG, r.theta, r.K)
        assert m[0].lo > 0 and m[1].lo > 0


def test_simulation_from_rest_stays_at_rest():
    traj = sof.simulate_closed_loop(CFG, lambda th: 35.0, (0.0, 0.0), 0.01, 50)
    assert set(traj.alpha) == {0.0} and set(traj.q) == {0.0}


def test_simulation_converges_under_step_halving():
    gain = lambda th: 35.0  # noqa: E731
    a = sof.simulate_closed_loop(CFG, gain, (1.0, 0.0), 0.002, 500)
    b = sof.simulate_closed_loop(CFG, gain, (1.0, 0.0), 0.001, 1000)
    ea = math.hypot(a.alpha[-1], a.q[-1])
    eb = math.hypot(b.alpha[-1], b.q[-1])
    ref = max(abs(b.alpha[-1]), abs(b.q[-1]), 1e-12)
    assert abs(a.alpha[-1] - b.alpha[-1]) / ref < 1e-3 or abs(ea - eb) < 1e-9


def test_simulation_with_table_gain_decays(pg):
    grid = sof.theta_grid((-3, 5), (-20, 20), 3, 3)
    gain = sof.table_gain(sof.gain_table(CFG, grid, pg=pg))
    traj = sof.simulate_closed_loop(CFG, gain, (2.0, 0.0), 0.001, 1000)
    assert not traj.truncated
    assert math.hypot(traj.alpha[-1], traj.q[-1]) < math.hypot(traj.alpha[0], traj.q[0])
