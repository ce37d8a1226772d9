"""Seeded feasibility runs on the bundled quartic pair, written as a scatter CSV.

    python3 scripts/quartic_pair_scatter.py --runs 100 --jobs 1 --out quartic_pair.csv

Each run draws fresh penalties from its seed and reports the certified
points of W(p1, p2) it found.  This is the same computation as
``polyineq feasible data/quartic_pair.json --runs N --scatter CSV``.
"""

import argparse
import sys
from importlib import resources

from polyineq.cli import main


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--algorithm", choices=("eigen", "rur", "pur"), default="pur")
    ap.add_argument("--out", default="quartic_pair.csv")
    ap.add_argument("--json", default="quartic_pair.json")
    args = ap.parse_args(argv)
    problem = str(resources.files("polyineq") / "data" / "quartic_pair.json")
    return main(["feasible", problem, "--runs", str(args.runs), "--jobs", str(args.jobs),
                 "--seed", str(args.seed), "--algorithm", args.algorithm,
                 "--scatter", args.out, "-o", args.json])


if __name__ == "__main__":
    sys.exit(run())
