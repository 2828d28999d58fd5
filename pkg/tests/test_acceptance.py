"""The eight acceptance criteria, one test each.

Each test prints a ``PASS``/``FAIL`` line with its measurements.  Run the
file directly (``python tests/test_acceptance.py``) for just those lines.
"""

from __future__ import annotations

import itertools
import json
import re
import sys
import time
from functools import lru_cache
from pathlib import Path

import pytest

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

from tensera import derivation as deriv  # noqa: E402
from tensera.calculus_deep import DK, DKS4, DKS5, DKT, DKU, DS4, black_free_derivation, check_deep, path_system  # noqa: E402
from tensera.calculus_shallow import check_shallow, resolve_axiom_rule, resolve_structural_rule  # noqa: E402
from tensera.constructions import cut_suite, displayed_derivations  # noqa: E402
from tensera.corpus import KT_AXIOMS, KT_NON_THEOREMS, CorpusConfig, generate, modal_subset  # noqa: E402
from tensera.derivation import inventory  # noqa: E402
from tensera.formula import Diamond, degree, parse  # noqa: E402
from tensera.path_engine import (  # noqa: E402
    EUCLID_AXIOMS,
    S4_AXIOMS,
    S5_AXIOMS,
    TRANSITIVE_AXIOMS,
    build_grammar,
    cyk_membership,
    propagation_witness,
    walk_exists,
    word_text,
)
from tensera.prover import Proved, Refuted, TerminationBoundExceeded, Unknown, prove_dkt, prove_extension  # noqa: E402
from tensera.semantics import find_countermodel, forces  # noqa: E402
from tensera.sequent import BULLET, CIRCLE, Sequent, propagation_graph  # noqa: E402
from tensera.transform import eliminate_cuts, translate_dkt_to_skt, translate_skt_to_dkt  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures" / "derivations"
W, B = Diamond.WHITE, Diamond.BLACK


@lru_cache(maxsize=None)
def equivalence_corpus():
    return tuple(generate(CorpusConfig(count=200, max_size=7)))


@lru_cache(maxsize=None)
def agreement_corpus():
    return tuple(generate(CorpusConfig(count=100, max_size=6)))


def report(number: int, title: str, ok: bool, detail: str) -> str:
    return f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}"


# --- 1 -------------------------------------------------------------------------------


def criterion_axiom_suite():
    start = time.perf_counter()
    problems = []
    for text in KT_AXIOMS:
        if not isinstance(prove_dkt(parse(text)), Proved):
            problems.append(f"not proved: {text}")
    for text in KT_NON_THEOREMS:
        f = parse(text)
        if not isinstance(prove_dkt(f), Refuted):
            problems.append(f"not refuted: {text}")
            continue
        found = find_countermodel(f, 3)
        if found is None or forces(found[0], found[1], f):
            problems.append(f"no countermodel within 3 worlds: {text}")
    elapsed = time.perf_counter() - start
    if elapsed >= 5:
        problems.append(f"took {elapsed:.2f}s")
    detail = f"{len(KT_AXIOMS)} proved, {len(KT_NON_THEOREMS)} refuted with countermodels, {elapsed:.2f}s"
    return not problems, detail + ("; " + "; ".join(problems) if problems else "")


# --- 2 -------------------------------------------------------------------------------


def _resolve(names):
    return [resolve_axiom_rule(n[3:]) if n.startswith("ax:") else resolve_structural_rule(n) for n in names]


def criterion_displayed_derivations():
    problems = []
    fresh = {name: d for name, d, _, _ in displayed_derivations()}
    files = sorted(FIXTURES.glob("*.json"))
    for path in files:
        obj = json.loads(path.read_text(encoding="utf-8"))
        d = deriv.from_json(obj["proof"])
        try:
            check_shallow(d, _resolve(obj["system"]), allow_cut=obj["allow_cut"])
        except Exception as exc:  # report every failure, keep going
            problems.append(f"{path.stem}: {exc}")
        if obj["name"] not in fresh or deriv.to_json(fresh[obj["name"]]) != obj["proof"]:
            problems.append(f"{path.stem}: differs from a fresh build")
    missing = set(fresh) - {p.stem for p in files}
    problems += [f"missing fixture {m}" for m in sorted(missing)]
    return not problems and bool(files), f"{len(files)} fixtures checked" + (
        "; " + "; ".join(problems) if problems else "")


# --- 3 -------------------------------------------------------------------------------


def criterion_equivalence_pipeline():
    proved = shallow_ok = deep_ok = 0
    problems = []
    for f in equivalence_corpus():
        outcome = prove_dkt(f)
        if not isinstance(outcome, Proved):
            continue
        proved += 1
        try:
            shallow = translate_dkt_to_skt(outcome.derivation)
            check_shallow(shallow, allow_cut=False)
            assert shallow.seq == outcome.derivation.seq
            shallow_ok += 1
            back = translate_skt_to_dkt(shallow)
            check_deep(back, DKT)
            assert back.seq == shallow.seq
            deep_ok += 1
        except Exception as exc:
            problems.append(f"{f}: {exc}")
    ok = proved > 0 and shallow_ok == proved and deep_ok == proved
    detail = (f"{len(equivalence_corpus())} formulas, {proved} proved, "
              f"{shallow_ok}/{proved} shallow re-checks, {deep_ok}/{proved} deep re-checks")
    return ok, detail + ("; " + "; ".join(problems[:3]) if problems else "")


# --- 4 -------------------------------------------------------------------------------


def criterion_cut_elimination():
    start = time.perf_counter()
    suite = cut_suite()
    good = 0
    problems = []
    for name, d, rules in suite:
        try:
            assert inventory(d)["cut"] > 0, "input has no cut"
            out = eliminate_cuts(d, rules)
            assert inventory(out)["cut"] == 0, "cut left in output"
            check_shallow(out, rules, allow_cut=False)
            assert out.seq == d.seq, "end-sequent changed"
            good += 1
        except Exception as exc:
            problems.append(f"{name}: {exc}")
    elapsed = time.perf_counter() - start
    ok = len(suite) == 50 and good == len(suite) and elapsed < 30
    return ok, f"{good}/{len(suite)} cut-free and re-checked, {elapsed:.2f}s" + (
        "; " + "; ".join(problems[:3]) if problems else "")


# --- 5 -------------------------------------------------------------------------------

REGULAR = {
    "ww->w": (TRANSITIVE_AXIOMS, r"ww*"),
    "bw->w": (EUCLID_AXIOMS, r"w|b[bw]*w"),
    "S5": (S5_AXIOMS, r"[wb]*"),
}
MAX_WORD = 8


def _words(n):
    for length in range(n + 1):
        yield from itertools.product((W, B), repeat=length)


def _trees(max_nodes):
    """Every nested sequent shape with at most ``max_nodes`` nodes, up to reordering."""
    by_size = {1: {Sequent()}}
    for n in range(2, max_nodes + 1):
        found = set()
        for first in range(1, n):
            for root in by_size[n - first]:
                for sub in by_size[first]:
                    for pol in (CIRCLE, BULLET):
                        found.add(root.add_child(pol, sub))
        by_size[n] = found
    return [t for n in sorted(by_size) for t in by_size[n]]


def _walk_table(pg, i):
    """Word -> set of walk ends from ``i``, for all words up to MAX_WORD."""
    table = {(): frozenset({i})}
    frontier = [()]
    for _ in range(MAX_WORD):
        nxt = []
        for word in frontier:
            for lab in (W, B):
                ends = frozenset(q for (p, q, l) in pg.edges if p in table[word] and l is lab)
                table[word + (lab,)] = ends
                nxt.append(word + (lab,))
        frontier = nxt
    return table


def criterion_grammar_oracle():
    mismatches = []
    strings = 0
    for name, (axioms, regex) in REGULAR.items():
        g = build_grammar(axioms, W)
        for w in _words(MAX_WORD):
            strings += 1
            if cyk_membership(g, w) != bool(re.fullmatch(regex, word_text(w))):
                mismatches.append(f"{name}: {word_text(w) or 'ε'}")
    # In trees of at most five nodes every shortest admissible walk for these
    # sets has at most six steps, so words of length eight are exhaustive.
    accepted = {(name, d): {w for w in _words(MAX_WORD) if cyk_membership(build_grammar(ax, d), w)}
                for name, (ax, _) in REGULAR.items() for d in (W, B)}
    trees = _trees(5)
    queries = 0
    for s in trees:
        pg = propagation_graph(s)
        nodes = sorted(pg.nodes)
        for i in nodes:
            table = _walk_table(pg, i)
            for j in nodes:
                for (name, d), words in accepted.items():
                    queries += 1
                    brute = any(j in table[w] for w in words)
                    witness = propagation_witness(s, i, j, d, REGULAR[name][0])
                    if (witness is not None) != brute or (
                            witness is not None and (witness not in words or not walk_exists(pg, i, j, witness))):
                        mismatches.append(f"{name} {d.value} {s} {i}->{j}")
    ok = not mismatches
    detail = f"{strings} strings, {len(trees)} trees, {queries} applicability queries, {len(mismatches)} mismatches"
    return ok, detail + ("; " + "; ".join(mismatches[:3]) if mismatches else "")


# --- 6 -------------------------------------------------------------------------------


def criterion_local_vs_global():
    local, global_ = DS4, path_system(S4_AXIOMS, "DKt+{->w, ww->w}")
    proved = {"local": set(), "path": set()}
    unknown = {"local": 0, "path": 0}
    problems = []
    for f in agreement_corpus():
        for key, system in (("local", local), ("path", global_)):
            outcome = prove_extension(f, system, depth_bound=3)
            if isinstance(outcome, Proved):
                try:
                    check_deep(outcome.derivation, system)
                    proved[key].add(f)
                except Exception as exc:
                    problems.append(f"{key} proof of {f}: {exc}")
            elif isinstance(outcome, Unknown):
                unknown[key] += 1
    same = proved["local"] == proved["path"]
    ok = same and not problems
    detail = (f"{len(agreement_corpus())} formulas, proved local={len(proved['local'])} "
              f"path={len(proved['path'])}, identical={same}, "
              f"Unknown local={unknown['local']} path={unknown['path']} (not counted as agreement)")
    return ok, detail + ("; " + "; ".join(problems[:3]) if problems else "")


# --- 7 -------------------------------------------------------------------------------


def criterion_separation():
    systems = [DK, DKS4, DKS5, DKU, path_system(S4_AXIOMS, "DK+{->w, ww->w}", modal_only=True)]
    modal = modal_subset(equivalence_corpus())
    proofs = 0
    problems = []
    for f in modal:
        bound = max(1, degree(f))
        for system in systems:
            outcome = prove_extension(f, system, depth_bound=bound)
            if isinstance(outcome, Proved):
                proofs += 1
                if not black_free_derivation(outcome.derivation):
                    problems.append(f"{system.name} proof of {f} uses black structure")
        # the white-only rules prove every modal theorem of the full calculus
        full = isinstance(prove_dkt(f), Proved)
        white = isinstance(prove_extension(f, DK, depth_bound=bound), Proved)
        if full != white:
            problems.append(f"DK and DKt disagree on {f}")
    ok = bool(modal) and not problems
    detail = f"{len(modal)} modal formulas, {proofs} proofs across {len(systems)} modal systems, all black-free"
    if problems:
        detail = f"{len(modal)} modal formulas; " + "; ".join(problems[:3])
    return ok, detail


# --- 8 -------------------------------------------------------------------------------


def criterion_termination():
    corpora = {
        "equivalence": equivalence_corpus(),
        "agreement": agreement_corpus(),
        "axioms": tuple(parse(t) for t in KT_AXIOMS + KT_NON_THEOREMS),
    }
    runs = 0
    problems = []
    for name, formulas in corpora.items():
        for f in formulas:
            runs += 1
            try:
                stats = prove_dkt(f).stats
            except TerminationBoundExceeded as exc:
                problems.append(f"{name}: {f}: {exc}")
                continue
            if stats.max_depth > degree(f) or max(stats.max_saturation_moves,
                                                  stats.max_propagation_moves) > stats.sf_size:
                problems.append(f"{name}: {f}: bounds exceeded in {stats}")
    ok = not problems
    return ok, f"{runs} searches, {len(problems)} bound violations" + (
        "; " + "; ".join(problems[:3]) if problems else "")


CRITERIA = [
    (1, "axiom suite", criterion_axiom_suite),
    (2, "displayed derivations", criterion_displayed_derivations),
    (3, "equivalence pipeline", criterion_equivalence_pipeline),
    (4, "cut elimination", criterion_cut_elimination),
    (5, "grammar oracle", criterion_grammar_oracle),
    (6, "local vs global", criterion_local_vs_global),
    (7, "separation", criterion_separation),
    (8, "termination instrumentation", criterion_termination),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + report(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        results.append(ok)
        print(report(number, title, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
