"""Print the grammars of some path-axiom sets and the languages they accept.

For each set, lists the productions and every accepted string up to the
given length, for both start diamonds.
"""

from __future__ import annotations

import argparse
import itertools
import sys

from tensera.formula import Diamond
from tensera.path_engine import build_grammar, cyk_membership, parse_axioms, word_text

DEFAULT_SETS = ("ww->w", "bw->w", "->w; ww->w; bw->w", "wbw->w", "->w; w->b")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("axioms", nargs="*", default=DEFAULT_SETS)
    ap.add_argument("--max-length", type=int, default=4)
    args = ap.parse_args(argv)
    for text in args.axioms:
        axioms = parse_axioms(text)
        print(f"== {text}")
        for d in (Diamond.WHITE, Diamond.BLACK):
            g = build_grammar(axioms, d)
            words = [w for n in range(args.max_length + 1) for w in itertools.product(Diamond, repeat=n)]
            accepted = [word_text(w) or "ε" for w in words if cyk_membership(g, w)]
            print(str(g))
            print(f"  accepted up to length {args.max_length}: {' '.join(accepted)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
