"""Cross-check the three solvers on the seeded random corpus.

    python3 scripts/corpus_crosscheck.py --size 24 --seed 2024

Prints one line per system: quotient dimension, trace-form signature and the
number of certified boxes from each algorithm.
"""

import argparse
import time

from polyineq import buchberger, solve, standard_basis, trace_form
from polyineq.corpus import CorpusConfig, corpus
from polyineq.quotient import real_count


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=CorpusConfig.size)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--max-dimension", type=int, default=CorpusConfig.max_dimension)
    args = ap.parse_args(argv)
    cfg = CorpusConfig(size=args.size, seed=args.seed, max_dimension=args.max_dimension)
    bad = 0
    print(f"{'system':<16}{'dim':>5}{'sig':>5}{'eigen':>7}{'rur':>5}{'pur':>5}{'sec':>8}")
    for name, ideal in corpus(cfg):
        t0 = time.perf_counter()
        A = standard_basis(buchberger(ideal, ideal.ring.grevlex()))
        sig = real_count(trace_form(A))
        counts = [len(solve(ideal, alg)) for alg in ("eigen", "rur", "pur")]
        bad += any(c != sig for c in counts)
        print(f"{name:<16}{A.dimension:>5}{sig:>5}{counts[0]:>7}{counts[1]:>5}{counts[2]:>5}"
              f"{time.perf_counter() - t0:>8.2f}")
    print("all counts match the signature" if not bad else f"{bad} systems disagree")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(run())
