"""Eliminate the cuts of every proof in the constructed cut suite.

Prints one TSV row per proof: cut count and rank before, proof size before
and after, and wall time.
"""

from __future__ import annotations

import argparse
import sys
import time

from tensera.calculus_shallow import check_shallow
from tensera.constructions import cut_suite
from tensera.derivation import count_steps, cut_rank, inventory
from tensera.transform import eliminate_cuts


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=1, help="time each elimination this many times")
    args = ap.parse_args(argv)
    sys.setrecursionlimit(20000)
    print("proof\tcuts\trank\tsteps_before\tsteps_after\tseconds")
    total = 0.0
    for name, d, rules in cut_suite():
        best = float("inf")
        for _ in range(args.repeat):
            start = time.perf_counter()
            out = eliminate_cuts(d, rules)
            best = min(best, time.perf_counter() - start)
        check_shallow(out, rules)
        total += best
        print(f"{name}\t{inventory(d)['cut']}\t{cut_rank(d)}\t{count_steps(d)}\t{count_steps(out)}\t{best:.4f}")
    print(f"# total {total:.2f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
