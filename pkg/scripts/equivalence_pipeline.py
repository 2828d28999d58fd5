"""Prove a corpus in the deep calculus and push every proof through both translations.

Prints one TSV row per formula: outcome, deep proof size, shallow proof
size and whether both re-checks passed.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from tensera.calculus_deep import check_deep
from tensera.calculus_shallow import check_shallow
from tensera.corpus import CorpusConfig, generate, read_corpus
from tensera.derivation import count_steps
from tensera.formula import to_text
from tensera.prover import Proved, outcome_name, prove_dkt
from tensera.transform import translate_dkt_to_skt, translate_skt_to_dkt


@dataclass(frozen=True)
class Config:
    count: int = 200
    max_size: int = 7
    seed: int | None = None
    corpus: str | None = None


def run(cfg: Config) -> int:
    formulas = read_corpus(cfg.corpus) if cfg.corpus else generate(
        CorpusConfig(count=cfg.count, max_size=cfg.max_size, seed=cfg.seed))
    print("formula\toutcome\tdeep_steps\tshallow_steps\tround_trip_steps\trechecked")
    failures = 0
    start = time.perf_counter()
    for f in formulas:
        outcome = prove_dkt(f)
        if not isinstance(outcome, Proved):
            print(f"{to_text(f)}\t{outcome_name(outcome)}\t-\t-\t-\t-")
            continue
        shallow = translate_dkt_to_skt(outcome.derivation)
        back = translate_skt_to_dkt(shallow)
        try:
            check_shallow(shallow)
            check_deep(back)
            ok = shallow.seq == back.seq == outcome.derivation.seq
        except Exception:
            ok = False
        failures += not ok
        print(f"{to_text(f)}\tProved\t{count_steps(outcome.derivation)}\t{count_steps(shallow)}\t"
              f"{count_steps(back)}\t{ok}")
    print(f"# {len(formulas)} formulas, {failures} failed re-checks, {time.perf_counter() - start:.2f}s",
          file=sys.stderr)
    return 1 if failures else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=Config.count)
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--corpus")
    args = ap.parse_args(argv)
    sys.setrecursionlimit(20000)
    return run(Config(args.count, args.max_size, args.seed, args.corpus))


if __name__ == "__main__":
    sys.exit(main())
