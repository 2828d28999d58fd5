"""Compare deep systems with local propagation rules against their path-axiom versions.

For each pair, every formula of the corpus is searched in both systems
with the same depth bound; the script prints the outcome matrix and the
formulas where the two disagree.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from dataclasses import dataclass

from tensera.calculus_deep import DKS4, DKS5, DKTU, DS4, DS5, DeepSystem, path_system
from tensera.corpus import CorpusConfig, generate, modal_subset
from tensera.formula import to_text
from tensera.path_engine import S4_AXIOMS, S5_AXIOMS
from tensera.prover import outcome_name, prove_extension


@dataclass(frozen=True)
class Config:
    count: int = 100
    max_size: int = 6
    depth_bound: int = 3
    seed: int | None = None


PAIRS: list[tuple[str, DeepSystem, DeepSystem, bool]] = [
    ("S4", DS4, path_system(S4_AXIOMS, "path S4"), False),
    ("S5", DS5, path_system(S5_AXIOMS, "path S5"), False),
    ("modal S4", DKS4, path_system(S4_AXIOMS, "path S4 (modal)", modal_only=True), True),
    ("modal S5", DKS5, path_system(S5_AXIOMS, "path S5 (modal)", modal_only=True), True),
]


def run(cfg: Config) -> int:
    corpus = generate(CorpusConfig(count=cfg.count, max_size=cfg.max_size, seed=cfg.seed))
    disagreements = 0
    for label, local, glob, modal in PAIRS:
        formulas = modal_subset(corpus) if modal else corpus
        matrix = Counter()
        for f in formulas:
            a = outcome_name(prove_extension(f, local, cfg.depth_bound))
            b = outcome_name(prove_extension(f, glob, cfg.depth_bound))
            matrix[a, b] += 1
            if "Proved" in (a, b) and a != b:
                disagreements += 1
                print(f"  {label}: {to_text(f)}: local {a}, path {b}")
        cells = ", ".join(f"{a}/{b}={n}" for (a, b), n in sorted(matrix.items()))
        print(f"{label} ({len(formulas)} formulas): {cells}")
    print(f"uniqueness system {DKTU.name} has no path-axiom counterpart; not compared")
    return 1 if disagreements else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--depth-bound", type=int, default=Config.depth_bound)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args(argv)
    return run(Config(args.count, args.max_size, args.depth_bound, args.seed))


if __name__ == "__main__":
    sys.exit(main())
