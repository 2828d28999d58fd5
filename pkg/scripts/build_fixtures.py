"""Write the hand-built derivations to tests/fixtures/derivations as proof JSON.

Each file records the rule set it is checked in and whether cut is
allowed.  Run again after changing tensera.constructions; the tests compare
the frozen files against fresh builds.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from tensera import constructions as C
from tensera import derivation as deriv
from tensera.calculus_shallow import check_shallow, resolve_axiom_rule, resolve_structural_rule

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "derivations"

def record(name, d, system, allow_cut) -> dict:
    return {
        "name": name,
        "system": system,
        "allow_cut": allow_cut,
        "end_sequent": str(d.seq),
        "proof": deriv.to_json(d),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    sys.setrecursionlimit(20000)
    args.out.mkdir(parents=True, exist_ok=True)
    for name, d, system, allow_cut in C.displayed_derivations():
        rules = [resolve_axiom_rule(n[3:]) if n.startswith("ax:") else resolve_structural_rule(n) for n in system]
        check_shallow(d, rules, allow_cut=allow_cut)
        path = args.out / f"{name}.json"
        path.write_text(json.dumps(record(name, d, system, allow_cut), indent=1, ensure_ascii=False) + "\n",
                        encoding="utf-8")
        print(f"{path.name:45s} {d.seq}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
