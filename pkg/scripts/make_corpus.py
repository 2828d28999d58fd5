"""Write a seeded random formula corpus, one formula per line."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from tensera.corpus import CorpusConfig, generate, seed_from_env, write_corpus


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out")
    ap.add_argument("--count", type=int, default=CorpusConfig.count)
    ap.add_argument("--max-size", type=int, default=CorpusConfig.max_size)
    ap.add_argument("--modal-only", action="store_true")
    ap.add_argument("--seed", type=int, default=None, help="defaults to TENSERA_SEED or the built-in seed")
    args = ap.parse_args(argv)
    cfg = replace(CorpusConfig(), count=args.count, max_size=args.max_size, modal_only=args.modal_only,
                  seed=args.seed if args.seed is not None else seed_from_env())
    formulas = generate(cfg)
    write_corpus(formulas, args.out)
    print(f"wrote {len(formulas)} formulas (seed {cfg.seed}) to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
