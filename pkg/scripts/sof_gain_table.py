"""Gain table for the synthetic pitch plant plus a closed-loop simulation.

    python3 scripts/sof_gain_table.py --out-dir sof_out

Writes ``gains.csv`` (one row per grid point, exact K interval and float
midpoint), ``agreement.csv`` (parametric vs per-point numeric gains) and
``trajectory.csv`` (RK4 run with the nearest certified table gain).
"""

import argparse
import csv
import json
import time
from importlib import resources
from pathlib import Path

from polyineq import sof


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default=str(resources.files("polyineq") / "data" / "synthetic_plant.json"))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", default="sof_out")
    ap.add_argument("--alpha0", type=float, default=10.0)
    ap.add_argument("--dt", type=float, default=0.001)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args(argv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cfg = sof.PlantConfig.load(args.config)
    g = json.loads(Path(args.config).read_text())["grid"]
    grid = sof.theta_grid(g["theta1"], g["theta2"], *g["n"])
    t0 = time.perf_counter()
    pg = sof.parametric_gain(cfg, args.seed)
    print(f"parametric eta: degree {pg.eta.degree} in t, {len(pg.guards)} guards, "
          f"{time.perf_counter() - t0:.1f} s")
    table = sof.gain_table(cfg, grid, args.seed, pg=pg)
    with open(out / "gains.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(table[0].row()))
        w.writeheader()
        for r in table:
            w.writerow(r.row())
    print(f"{sum(r.certified for r in table)}/{len(table)} certified rows")

    with open(out / "agreement.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta1", "theta2", "guards_ok", "parametric", "numeric", "agree"])
        for theta in grid:
            a = sof.compare_pipelines(cfg, theta, pg, args.seed)
            if a is None:
                w.writerow([str(theta[0]), str(theta[1]), False, "", "", ""])
                continue
            fmt = lambda ivs: " ".join(f"{float(iv.mid):.12g}" for iv in ivs)  # noqa: E731
            w.writerow([str(theta[0]), str(theta[1]), True, fmt(a.parametric), fmt(a.numeric), a.agree])

    traj = sof.simulate_closed_loop(cfg, sof.table_gain(table), (args.alpha0, 0.0), args.dt, args.steps)
    (out / "trajectory.csv").write_text(traj.to_csv())
    if traj.truncated:
        print(f"trajectory truncated: {traj.note}")
    print(f"wrote {out}/gains.csv, agreement.csv, trajectory.csv in {time.perf_counter() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
