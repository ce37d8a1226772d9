"""Static output feedback for a second-order parameter-varying pitch model.

State x = (alpha, q), input delta = K * alpha.  Freezing the scheduling
parameters theta_1 = kappa_alpha M (a_n alpha^2 + b_n alpha + c_n) and
theta_2 = kappa_q M (a_m alpha^2 + b_m alpha + c_m) gives the linear model

    A(theta) = [[theta_1, 1], [theta_2, 0]],  B = [kappa_alpha M d_n, kappa_q M d_m]^T,
    C = [1, 0],

whose closed loop has characteristic polynomial s^2 + p_1 s + p_2 with
p_1 = -K M kappa_alpha d_n - theta_1 and p_2 = -K M kappa_q d_m - theta_2.
Requiring complex eigenvalues with real part below -lambda gives the two
strict conditions 4 p_2 - p_1^2 > 0 and p_1 - 2 lambda > 0 in the unknown K.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .groebner import DEFAULT_BUDGET, Budget
from .inequalities import FeasibilityProblem, draw_penalties, solve_feasibility, stationary_system
from .interval import Interval
from .poly import QQ, Polynomial, Ring
from .ratfunc import DenominatorVanishes, ParamField
from .interpolation import parametric_charpoly
from .solvers import DEFAULT_TOL, PURRepresentation, compute_pur, solve_pur, specialize_pur
from .univariate import UniPoly, isolate_roots, refine, squarefree_part

THETA_NAMES = ("theta1", "theta2")


@dataclass(frozen=True)
class PlantConfig:
    kappa_alpha: Fraction
    kappa_q: Fraction
    M: Fraction
    a_n: Fraction
    b_n: Fraction
    c_n: Fraction
    d_n: Fraction
    a_m: Fraction
    b_m: Fraction
    c_m: Fraction
    d_m: Fraction
    lam: Fraction = Fraction(15)
    label: str = ""

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if name == "label":
                continue
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.d_n == 0 and self.d_m == 0:
            raise ValueError("d_n and d_m cannot both be zero")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")

    @property
    def b_alpha(self) -> Fraction:
        """Input gain on the alpha equation, kappa_alpha M d_n."""
        return self.kappa_alpha * self.M * self.d_n

    @property
    def b_q(self) -> Fraction:
        return self.kappa_q * self.M * self.d_m

    def theta_of(self, alpha) -> tuple:
        th1 = self.kappa_alpha * self.M * (self.a_n * alpha * alpha + self.b_n * alpha + self.c_n)
        th2 = self.kappa_q * self.M * (self.a_m * alpha * alpha + self.b_m * alpha + self.c_m)
        return th1, th2

    def with_lambda(self, lam) -> "PlantConfig":
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["lam"] = Fraction(lam)
        return PlantConfig(**d)

    @classmethod
    def load(cls, path) -> "PlantConfig":
        data = json.loads(Path(path).read_text())
        data = {("lam" if k == "lambda" else k): v for k, v in data.items()}
        data = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**{k: (v if k == "label" else Fraction(str(v))) for k, v in data.items()})

    def dump(self) -> dict:
        out = {k: str(getattr(self, k)) for k in self.__dataclass_fields__ if k not in ("lam", "label")}
        out["lambda"] = str(self.lam)
        if self.label:
            out["label"] = self.label
        return out


# ---------------------------------------------------------------------------
# symbolic pieces


def closed_loop_charpoly(cfg: PlantConfig) -> Polynomial:
    """s^2 + p_1 s + p_2 in Q[s, K, theta1, theta2]."""
    R = Ring(("s", "K") + THETA_NAMES)
    s, K, t1, t2 = R.gens
    p1 = K * (-cfg.b_alpha) - t1
    p2 = K * (-cfg.b_q) - t2
    return s * s + p1 * s + p2


def closed_loop_matrix(cfg: PlantConfig, ring: Ring):
    """A(theta) + B K C with K, theta1, theta2 read from ``ring`` by name."""
    K, t1, t2 = (ring.gen(ring.index(n)) for n in ("K",) + THETA_NAMES)
    return [[t1 + K * cfg.b_alpha, ring.one()], [t2 + K * cfg.b_q, ring.zero()]]


def coefficient_polys(cfg: PlantConfig, ring: Ring):
    """(p_1, p_2) in ``ring``; K must be a variable, theta may be variables or parameters."""
    K = ring.gen(ring.index("K"))
    t1, t2 = (ring.gen(ring.index(n)) if n in ring.names else ring.constant(ring.field.parameter(n))
              for n in THETA_NAMES)
    return K * (-cfg.b_alpha) - t1, K * (-cfg.b_q) - t2


def stability_conditions(cfg: PlantConfig, penalties=None, seed: int = 0) -> FeasibilityProblem:
    """Both strict conditions as an inequality problem in K over Q(theta)."""
    fld = ParamField(THETA_NAMES)
    R = Ring(("K",), fld)
    p1, p2 = coefficient_polys(cfg, R)
    conds = (p2 * 4 - p1 * p1, p1 - 2 * cfg.lam)
    return FeasibilityProblem(conds, strict_count=2, penalties=penalties or draw_penalties(seed, 1, 2), seed=seed)


def numeric_conditions(cfg: PlantConfig, theta, penalties=None, seed: int = 0) -> FeasibilityProblem:
    """The same problem with theta fixed to rationals."""
    th1, th2 = (Fraction(x) for x in theta)
    R = Ring(("K",))
    K = R.gen(0)
    p1 = K * (-cfg.b_alpha) - th1
    p2 = K * (-cfg.b_q) - th2
    conds = (p2 * 4 - p1 * p1, p1 - 2 * cfg.lam)
    return FeasibilityProblem(conds, strict_count=2, penalties=penalties or draw_penalties(seed, 1, 2), seed=seed)


# ---------------------------------------------------------------------------
# gains


@dataclass(frozen=True)
class ParametricGain:
    """eta(theta, t) and rho_K(theta, t) with the specialization guards.

    With ``method="interpolate"`` the separating element is K itself, so
    rho_K = t and eta is the characteristic polynomial of multiplication by K
    on the generic quotient, recovered by exact specialization/interpolation.
    The ``"fglm"`` and ``"lex"`` methods run compute_pur over Q(theta).
    """

    eta: UniPoly
    rho_K: UniPoly
    guards: tuple
    penalties: object
    method: str = "interpolate"
    pur: PURRepresentation | None = None

    def guards_ok(self, theta) -> bool:
        th = [Fraction(x) for x in theta]
        if any(g.evaluate(th) == 0 for g in self.guards):
            return False
        if self.pur is None:
            # K must still separate the stationary points after specialization
            e = specialize_unipoly(self.eta, th)
            return squarefree_part(e).degree == e.degree
        return True


def specialize_unipoly(u: UniPoly, theta) -> UniPoly:
    return UniPoly([c.evaluate(theta) for c in u.coeffs])


def parametric_gain(cfg: PlantConfig, seed: int = 0, method: str = "interpolate",
                    budget: Budget = DEFAULT_BUDGET) -> ParametricGain:
    prob = stability_conditions(cfg, seed=seed)
    ideal = stationary_system(prob)
    if method == "interpolate":
        pc = parametric_charpoly(ideal, ideal.ring.gen(0), seed=seed, budget=budget)
        fld = ideal.ring.field
        return ParametricGain(pc.chi, UniPoly([fld.zero, fld.one]), pc.guards, prob.penalties, method)
    pur = compute_pur(ideal, seed=seed, method=method, budget=budget)
    return ParametricGain(pur.eta, pur.rho[0], pur.guards, prob.penalties, method, pur)


@dataclass(frozen=True)
class GainResult:
    theta: tuple
    K: Interval | None
    certified: bool
    guards_ok: bool
    source: str = "parametric"
    margins: tuple = ()
    note: str = ""

    def row(self) -> dict:
        return {
            "theta1": str(self.theta[0]),
            "theta2": str(self.theta[1]),
            "K_lo": None if self.K is None else str(self.K.lo),
            "K_hi": None if self.K is None else str(self.K.hi),
            "K": None if self.K is None else float(self.K.mid),
            "certified": self.certified,
            "guards_ok": self.guards_ok,
            "source": self.source,
            "note": self.note,
        }


def condition_margins(cfg: PlantConfig, theta, K: Interval) -> tuple:
    """Interval enclosures of (4 p_2 - p_1^2, p_1 - 2 lambda) at (theta, K)."""
    th1, th2 = (Fraction(x) for x in theta)
    p1 = K * (-cfg.b_alpha) - th1
    p2 = K * (-cfg.b_q) - th2
    return (p2 * 4 - p1 ** 2, p1 - 2 * cfg.lam)


def _pick(cfg: PlantConfig, theta, K_boxes: Sequence[Interval]):
    """Certified K with the largest lower bound on p_1 - 2 lambda."""
    best = None
    for K in K_boxes:
        m = condition_margins(cfg, theta, K)
        if m[0].lo > 0 and m[1].lo > 0:
            if best is None or m[1].lo > best[1][1].lo:
                best = (K, m)
    return best


def parametric_gains(pg: ParametricGain, theta, tol=DEFAULT_TOL) -> list:
    """K intervals from the specialized parametric result (caller checks guards)."""
    theta = [Fraction(x) for x in theta]
    if pg.pur is not None:
        spec = specialize_pur(pg.pur, theta)
        return [b.coordinates[0] for b in solve_pur(spec, tol) if b.status == "certified"]
    eta = specialize_unipoly(pg.eta, theta)
    return [refine(iv, tol).as_interval() for iv in isolate_roots(eta)]


def gain_at(cfg: PlantConfig, theta, pg: ParametricGain | None, seed: int = 0, tol=DEFAULT_TOL) -> GainResult:
    theta = tuple(Fraction(x) for x in theta)
    guards_ok = pg is not None and pg.guards_ok(theta)
    source = "parametric"
    note = ""
    boxes = None
    if guards_ok:
        try:
            boxes = parametric_gains(pg, theta, tol)
        except DenominatorVanishes as exc:
            note = f"parametric result undefined here ({exc}); numeric fallback"
            boxes = None
    if boxes is None:
        source = "numeric"
        boxes = numeric_gains(cfg, theta, seed, tol)
    best = _pick(cfg, theta, boxes)
    if best is None:
        return GainResult(theta, None, False, guards_ok, source, (), note or "no gain satisfies both conditions")
    K, m = best
    return GainResult(theta, K, True, guards_ok, source, m, note)


def certified_gains(cfg: PlantConfig, theta, K_boxes: Sequence[Interval]) -> list:
    """The K intervals on which both strict conditions are interval-certified."""
    out = []
    for K in K_boxes:
        m = condition_margins(cfg, theta, K)
        if m[0].lo > 0 and m[1].lo > 0:
            out.append(K)
    return sorted(out, key=lambda K: K.lo)


@dataclass(frozen=True)
class Agreement:
    theta: tuple
    parametric: tuple
    numeric: tuple
    agree: bool


def compare_pipelines(cfg: PlantConfig, theta, pg: ParametricGain, seed: int = 0,
                      tol=DEFAULT_TOL) -> Agreement | None:
    """Certified gains from both pipelines at one theta; None where guards vanish.

    Agreement means equal counts and each parametric interval overlapping
    exactly one numeric interval.
    """
    theta = tuple(Fraction(x) for x in theta)
    if not pg.guards_ok(theta):
        return None
    par = certified_gains(cfg, theta, parametric_gains(pg, theta, tol))
    num = certified_gains(cfg, theta, numeric_gains(cfg, theta, seed, tol))
    agree = len(par) == len(num) and all(
        sum(1 for b in num if a.overlaps(b)) == 1 for a in par)
    return Agreement(theta, tuple(par), tuple(num), agree)


def numeric_gains(cfg: PlantConfig, theta, seed: int = 0, tol=DEFAULT_TOL) -> list:
    """K intervals from the per-point pipeline at fixed theta."""
    prob = numeric_conditions(cfg, theta, seed=seed)
    out = solve_feasibility(prob, "pur", tol, max_redraws=0, separating=0)
    return [p.box.coordinates[0] for p in out.points]


def gain_table(cfg: PlantConfig, theta_grid, seed: int = 0, tol=DEFAULT_TOL,
               pg: ParametricGain | None = None, parametric: bool = True) -> list:
    """One GainResult per grid point, parametric fast path with numeric fallback."""
    grid = list(theta_grid)
    if not grid:
        raise ValueError("empty theta grid")
    if pg is None and parametric:
        pg = parametric_gain(cfg, seed)
    return [gain_at(cfg, th, pg, seed, tol) for th in grid]


def theta_grid(th1_range, th2_range, n1: int, n2: int) -> list:
    """Rational n1 x n2 grid over the closed rectangle."""
    a1, b1 = (Fraction(x) for x in th1_range)
    a2, b2 = (Fraction(x) for x in th2_range)
    xs = [a1 + (b1 - a1) * i / max(n1 - 1, 1) for i in range(n1)]
    ys = [a2 + (b2 - a2) * j / max(n2 - 1, 1) for j in range(n2)]
    return [(x, y) for x in xs for y in ys]


# ---------------------------------------------------------------------------
# simulation (floating point)


def table_gain(table: Sequence[GainResult]) -> Callable:
    """Nearest certified row of a gain table as a gain function of theta."""
    rows = [(float(r.theta[0]), float(r.theta[1]), float(r.K.mid)) for r in table if r.certified]
    if not rows:
        raise ValueError("gain table has no certified rows")

    def gain(theta):
        t1, t2 = theta
        return min(rows, key=lambda r: (r[0] - t1) ** 2 + (r[1] - t2) ** 2)[2]

    return gain


def parametric_gain_function(cfg: PlantConfig, pg: ParametricGain, seed: int = 0,
                             tol=Fraction(1, 10**9), denominator: int = 10**6) -> Callable:
    """Exact gain at theta rounded to nearby rationals (memoized)."""
    cache = {}

    def gain(theta):
        key = tuple(Fraction(x).limit_denominator(denominator) for x in theta)
        if key not in cache:
            r = gain_at(cfg, key, pg, seed, tol)
            cache[key] = float(r.K.mid) if r.certified else None
        return cache[key]

    return gain


@dataclass
class Trajectory:
    t: list = field(default_factory=list)
    alpha: list = field(default_factory=list)
    q: list = field(default_factory=list)
    K: list = field(default_factory=list)
    truncated: bool = False
    note: str = ""

    def to_csv(self) -> str:
        lines = ["t,alpha,q,K"]
        for row in zip(self.t, self.alpha, self.q, self.K):
            lines.append(",".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


def simulate_closed_loop(cfg: PlantConfig, gain_source: Callable, x0, dt: float, steps: int) -> Trajectory:
    """Fixed-step RK4 on the nonlinear model with delta = K(theta(alpha)) * alpha.

    The gain is evaluated once per step at the current state and held over the
    step.  Floating point throughout.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    ka, kq, M = float(cfg.kappa_alpha), float(cfg.kappa_q), float(cfg.M)
    an, bn, cn, dn = (float(v) for v in (cfg.a_n, cfg.b_n, cfg.c_n, cfg.d_n))
    am, bm, cm, dm = (float(v) for v in (cfg.a_m, cfg.b_m, cfg.c_m, cfg.d_m))

    def rhs(a, q, K):
        delta = K * a
        da = ka * M * ((an * a * a + bn * a + cn) * a + dn * delta) + q
        dq = kq * M * ((am * a * a + bm * a + cm) * a + dm * delta)
        return da, dq

    a, q = float(x0[0]), float(x0[1])
    traj = Trajectory()
    for k in range(steps + 1):
        th = (ka * M * (an * a * a + bn * a + cn), kq * M * (am * a * a + bm * a + cm))
        try:
            K = gain_source(th)
        except Exception as exc:  # gain evaluation is user supplied
            K = None
            traj.note = f"gain evaluation failed at step {k}: {exc}"
        if K is None:
            traj.truncated = True
            traj.note = traj.note or f"no certified gain at step {k}, theta={th}"
            break
        traj.t.append(k * dt)
        traj.alpha.append(a)
        traj.q.append(q)
        traj.K.append(K)
        if k == steps:
            break
        k1 = rhs(a, q, K)
        k2 = rhs(a + dt / 2 * k1[0], q + dt / 2 * k1[1], K)
        k3 = rhs(a + dt / 2 * k2[0], q + dt / 2 * k2[1], K)
        k4 = rhs(a + dt * k3[0], q + dt * k3[1], K)
        a += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        q += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        if not (math.isfinite(a) and math.isfinite(q)):
            traj.truncated = True
            traj.note = f"state diverged at step {k + 1}"
            break
    return traj
