"""Command-line front end.

    polyineq gb FILE [--order lex|grevlex] [--vars-order x,y,...]
    polyineq solve FILE [--algorithm eigen|rur|pur] [--tol T] [--seed S]
    polyineq feasible FILE [--algorithm ...] [--runs N] [--jobs J] [--scatter CSV]
    polyineq sof CONFIG [--grid A:B:N,C:D:M | --theta a,b] [--lambda L] [--simulate a,q DT STEPS]

Problem and result files are JSON; exact rationals are written as "p/q"
strings.  Exit codes: 0 ok/feasible, 2 infeasible, 3 indeterminate,
64 usage, 65 parse, 70 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from pathlib import Path

from .groebner import BudgetExceeded, Ideal, buchberger
from .inequalities import FEASIBLE, INDETERMINATE, INFEASIBLE, FeasibilityProblem, solve_feasibility
from .poly import QQ, ParseError, Ring, parse
from .quotient import NotZeroDimensional, real_count, standard_basis, trace_form
from .ratfunc import ParamField
from .solvers import DEFAULT_TOL, NonSeparating, ShapeFailure, compute_pur, compute_rur, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_INDETERMINATE = 0, 2, 3
EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 64, 65, 70
DECIMAL_DIGITS = 20


class UsageError(Exception):
    pass


@dataclass
class ProblemFile:
    vars: list
    parameters: list = field(default_factory=list)
    equations: list = field(default_factory=list)
    nonneg: list = field(default_factory=list)
    strict: list = field(default_factory=list)
    seed: int | None = None
    tol: Fraction | None = None

    @classmethod
    def load(cls, path) -> "ProblemFile":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc.msg}", exc.doc, exc.pos) from None
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        if not isinstance(data, dict) or "vars" not in data:
            raise UsageError(f"{path}: problem file needs a 'vars' list")
        known = {"vars", "parameters", "equations", "nonneg", "strict", "seed", "tol"}
        extra = set(data) - known - {k for k in data if k.startswith("_")}
        if extra:
            raise UsageError(f"{path}: unknown keys {sorted(extra)}")
        prob = cls(
            vars=list(data["vars"]),
            parameters=list(data.get("parameters", [])),
            equations=list(data.get("equations", [])),
            nonneg=list(data.get("nonneg", [])),
            strict=list(data.get("strict", [])),
            seed=data.get("seed"),
            tol=Fraction(str(data["tol"])) if "tol" in data else None,
        )
        if not (prob.equations or prob.nonneg or prob.strict):
            raise UsageError(f"{path}: no equations or inequalities")
        return prob

    def ring(self, names=None) -> Ring:
        fld = ParamField(self.parameters) if self.parameters else QQ
        return Ring(tuple(names or self.vars), fld)

    def polys(self, key: str, ring: Ring) -> list:
        out = []
        for k, text in enumerate(getattr(self, key)):
            try:
                out.append(parse(text, ring))
            except ParseError as exc:
                exc.args = (f"{key}[{k}]: {exc}",)
                raise
        return out


# ---------------------------------------------------------------------------
# result serialization


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _decimal(x: Fraction, rounding) -> str:
    ctx = Context(prec=DECIMAL_DIGITS, rounding=rounding)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def interval_json(iv, name: str | None = None) -> dict:
    """Exact endpoints plus a decimal pair rounded outward."""
    out = {"lo": _q(iv.lo), "hi": _q(iv.hi),
           "decimal": [_decimal(iv.lo, ROUND_FLOOR), _decimal(iv.hi, ROUND_CEILING)]}
    if name is not None:
        out = {"var": name, **out}
    return out


def box_json(box, names) -> dict:
    return {"status": box.status,
            "coordinates": [interval_json(c, n) for c, n in zip(box.coordinates, names)]}


def _uni(u) -> list:
    return [str(c) if not isinstance(c, Fraction) else _q(c) for c in u.coeffs]


def _emit(result: dict, output):
    text = json.dumps(result, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_gb(args) -> int:
    prob = ProblemFile.load(args.file)
    names = args.vars_order.split(",") if args.vars_order else prob.vars
    if sorted(names) != sorted(prob.vars):
        raise UsageError("--vars-order must be a permutation of the declared variables")
    if not prob.equations:
        raise UsageError("gb needs a nonempty 'equations' list")
    ring = prob.ring(names)
    gens = prob.polys("equations", ring)
    order = ring.lex() if args.order == "lex" else ring.grevlex()
    G = buchberger(Ideal(gens, ring), order)
    for g in G.elements:
        print(g.to_string(order))
    for g in G.guards:
        print(f"# guard: {g} != 0")
    return EXIT_OK


def _rational_ring(prob: ProblemFile, what: str) -> Ring:
    if prob.parameters:
        raise UsageError(f"{what} needs rational coefficients; specialize the parameters first")
    return prob.ring()


def cmd_solve(args) -> int:
    prob = ProblemFile.load(args.file)
    if prob.nonneg or prob.strict:
        raise UsageError("solve takes equations only; use 'feasible' for inequalities")
    ring = _rational_ring(prob, "solve")
    gens = prob.polys("equations", ring)
    seed = args.seed if args.seed is not None else (prob.seed or 0)
    tol = Fraction(args.tol) if args.tol is not None else (prob.tol or DEFAULT_TOL)
    ideal = Ideal(gens, ring)
    t0 = time.perf_counter()
    try:
        boxes = solve(ideal, args.algorithm, tol, seed=seed)
    except NotZeroDimensional as exc:
        _emit({"status": "not zero-dimensional", "message": str(exc)}, args.output)
        print(f"error: not zero-dimensional: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except (ShapeFailure, NonSeparating) as exc:
        _emit({"status": "indeterminate", "message": str(exc)}, args.output)
        return EXIT_INDETERMINATE
    elapsed = time.perf_counter() - t0
    result = {
        "status": "ok",
        "algorithm": args.algorithm,
        "solutions": [box_json(b, ring.names) for b in boxes],
        "diagnostics": {"seed": seed, "tol": _q(tol), "seconds": round(elapsed, 6)},
    }
    if args.representation:
        if args.algorithm == "rur":
            R = compute_rur(ideal, "auto", seed)
            result["representation"] = {"kind": "rur", "f": str(R.separating_f), "chi": _uni(R.chi),
                                        "g0": _uni(R.g0), "g": [_uni(g) for g in R.gi]}
        elif args.algorithm == "pur":
            P = compute_pur(ideal, seed)
            result["representation"] = {"kind": "pur", "s": str(P.separating_s), "eta": _uni(P.eta),
                                        "rho": [_uni(r) for r in P.rho]}
        else:
            G = buchberger(ideal, ring.grevlex())
            result["representation"] = {"kind": "trace-form", "real_points": real_count(trace_form(standard_basis(G)))}
    _emit(result, args.output)
    return EXIT_OK


def _feasible_run(payload):
    polys, names, strict_count, algorithm, tol, seed = payload
    ring = Ring(tuple(names))
    ps = tuple(parse(p, ring) for p in polys)
    prob = FeasibilityProblem(ps, strict_count, seed=seed)
    t0 = time.perf_counter()
    out = solve_feasibility(prob, algorithm, tol)
    return {
        "seed": seed,
        "verdict": out.verdict,
        "points": [{**box_json(p.box, names), "exact": p.exact,
                    "margins": [interval_json(m) for m in p.margins]} for p in out.points],
        "stationary_points": len(out.stationary_points_full),
        "penalties": out.penalties.as_strings(),
        "redraws": out.redraws,
        "notes": out.notes,
        "seconds": round(time.perf_counter() - t0, 6),
    }


def cmd_feasible(args) -> int:
    prob = ProblemFile.load(args.file)
    if prob.equations:
        raise UsageError("feasible takes 'nonneg'/'strict' lists only")
    ring = _rational_ring(prob, "feasible")
    prob.polys("strict", ring)
    prob.polys("nonneg", ring)
    seed = args.seed if args.seed is not None else (prob.seed or 0)
    tol = Fraction(args.tol) if args.tol is not None else (prob.tol or DEFAULT_TOL)
    polys = list(prob.strict) + list(prob.nonneg)
    payloads = [(polys, prob.vars, len(prob.strict), args.algorithm, tol, seed + k) for k in range(args.runs)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            runs = list(pool.map(_feasible_run, payloads))
    else:
        runs = [_feasible_run(p) for p in payloads]
    for k, r in enumerate(runs):
        r["run"] = k
    verdicts = [r["verdict"] for r in runs]
    if INDETERMINATE in verdicts:
        status, code = INDETERMINATE, EXIT_INDETERMINATE
    elif INFEASIBLE in verdicts:
        status, code = (INFEASIBLE, EXIT_INFEASIBLE)
    else:
        status, code = FEASIBLE, EXIT_OK
    if len(set(verdicts)) > 1:
        status = "mixed"
    result = {"status": status, "algorithm": args.algorithm, "runs": runs,
              "diagnostics": {"seed": seed, "tol": _q(tol), "runs": args.runs}}
    if args.scatter:
        lines = ["run," + ",".join(prob.vars)]
        for r in runs:
            for p in r["points"]:
                mids = [(Fraction(c["lo"]) + Fraction(c["hi"])) / 2 for c in p["coordinates"]]
                lines.append(f"{r['run']}," + ",".join(repr(float(m)) for m in mids))
        Path(args.scatter).write_text("\n".join(lines) + "\n")
    _emit(result, args.output)
    return code


def _parse_grid(text: str) -> tuple:
    try:
        parts = [p.split(":") for p in text.split(",")]
        (a, b, n), (c, d, m) = parts
        return (Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)), int(n), int(m)
    except ValueError:
        raise UsageError(f"bad --grid {text!r}; expected A:B:N,C:D:M") from None


def cmd_sof(args) -> int:
    from . import sof

    try:
        cfg = sof.PlantConfig.load(args.config)
        raw = json.loads(Path(args.config).read_text())
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot load plant config {args.config}: {exc}") from None
    if args.lam is not None:
        cfg = cfg.with_lambda(Fraction(args.lam))
    if args.simulate:
        x0, dt, steps = args.simulate
        x0 = [float(v) for v in x0.split(",")]
        if args.theta:
            th = [Fraction(v) for v in args.theta.split(",")]
            r = sof.gain_at(cfg, th, None, args.seed)
            if not r.certified:
                raise UsageError("no certified gain at --theta")
            K = float(r.K.mid)
            source = lambda theta: K  # noqa: E731
        else:
            pg = sof.parametric_gain(cfg, args.seed)
            source = sof.parametric_gain_function(cfg, pg, args.seed)
        traj = sof.simulate_closed_loop(cfg, source, x0, float(dt), int(steps))
        text = traj.to_csv()
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        if traj.truncated:
            print(f"warning: trajectory truncated: {traj.note}", file=sys.stderr)
        return EXIT_OK
    if args.theta:
        grid = [tuple(Fraction(v) for v in args.theta.split(","))]
        if len(grid[0]) != 2:
            raise UsageError("--theta needs two values")
        pg = None if args.numeric else sof.parametric_gain(cfg, args.seed)
    else:
        if args.grid:
            r1, r2, n1, n2 = _parse_grid(args.grid)
        elif "grid" in raw:
            g = raw["grid"]
            r1, r2 = tuple(map(Fraction, g["theta1"])), tuple(map(Fraction, g["theta2"]))
            n1, n2 = g["n"]
        else:
            raise UsageError("give --grid or --theta (the config has no default grid)")
        grid = sof.theta_grid(r1, r2, n1, n2)
        pg = None if args.numeric else sof.parametric_gain(cfg, args.seed)
    t0 = time.perf_counter()
    rows = sof.gain_table(cfg, grid, args.seed, pg=pg, parametric=not args.numeric)
    result = {
        "config": cfg.dump(),
        "rows": [r.row() for r in rows],
        "diagnostics": {"seed": args.seed, "guards": [str(g) for g in (pg.guards if pg else ())],
                        "seconds": round(time.perf_counter() - t0, 6)},
    }
    _emit(result, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyineq", description="Exact polynomial systems and inequalities.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gb", help="reduced Groebner basis of the equations")
    p.add_argument("file")
    p.add_argument("--order", choices=("lex", "grevlex"), default="lex")
    p.add_argument("--vars-order", help="comma separated, greatest variable first")
    p.set_defaults(func=cmd_gb)

    algs = ("eigen", "rur", "pur")
    p = sub.add_parser("solve", help="certified real solutions of a zero-dimensional system")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=algs, default="eigen")
    p.add_argument("--tol", help="box width target (rational string)")
    p.add_argument("--seed", type=int)
    p.add_argument("--representation", action="store_true", help="include the RUR/PUR in the result")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("feasible", help="find a point satisfying the inequalities")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=algs, default="pur")
    p.add_argument("--tol")
    p.add_argument("--seed", type=int)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--scatter", help="CSV of point midpoints per run")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("sof", help="static output feedback gain table or simulation")
    p.add_argument("config")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", help="A:B:N,C:D:M over (theta1, theta2)")
    g.add_argument("--theta", help="single point a,b")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--numeric", action="store_true", help="skip the parametric result")
    p.add_argument("--simulate", nargs=3, metavar=("X0", "DT", "STEPS"))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sof)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if getattr(args, "runs", 1) < 1 or getattr(args, "jobs", 1) < 1:
            raise UsageError("--runs and --jobs must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
