"""Command-line entry point.

Exit codes: 0 success (Proved / valid / accepted), 1 negative answer
(Refuted / rejected / no countermodel), 2 Unknown, 64 usage error, 70 a
proof failed validation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import derivation as deriv
from . import sequent as seqmod
from .calculus_deep import SYSTEMS, DeepSystem, check_deep, path_system
from .calculus_shallow import CheckError, check_shallow, resolve_axiom_rule, resolve_structural_rule, rules_in
from .corpus import read_corpus
from .formula import Diamond, ParseError, parse, to_text
from .path_engine import build_grammar, cyk_membership, parse_axioms, parse_word, propagation_witness, word_text
from .prover import Proved, Refuted, prove_dkt, prove_extension
from .semantics import FRAME_FILTERS, countermodel_json, find_countermodel
from .sequent import parse_address, parse_sequent
from .transform import eliminate_cuts, translate_dkt_to_skt, translate_skt_to_dkt

EX_OK, EX_NO, EX_UNKNOWN, EX_USAGE, EX_INVALID = 0, 1, 2, 64, 70

LOGICS = {
    "kt": None,
    "k": SYSTEMS["DK"],
    "kts4": SYSTEMS["DS4"],
    "ks4": SYSTEMS["DKS4"],
    "kts5": SYSTEMS["DS5"],
    "ks5": SYSTEMS["DKS5"],
    "ktcd": SYSTEMS["DKtU"],
    "kcd": SYSTEMS["DKU"],
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _logic(name: str) -> DeepSystem | None:
    if name.startswith("path:"):
        return path_system(parse_axioms(name[len("path:"):]))
    if name not in LOGICS:
        raise UsageError(f"unknown logic {name!r}; choose from {', '.join(LOGICS)} or path:<axioms>")
    return LOGICS[name]


def _deep_system(name: str | None) -> DeepSystem:
    if name is None:
        return SYSTEMS["DKt"]
    if name.startswith("path:"):
        return path_system(parse_axioms(name[len("path:"):]))
    for key, system in SYSTEMS.items():
        if key.lower() == name.lower():
            return system
    raise UsageError(f"unknown deep system {name!r}; choose from {', '.join(SYSTEMS)} or path:<axioms>")


def _shallow_system(text: str | None, d: deriv.Derivation):
    if not text:
        return {}
    if text == "auto":
        return rules_in(d)
    names = [n for n in _split_rules(text) if n]
    rules = [resolve_axiom_rule(n[3:]) if n.startswith("ax:") else resolve_structural_rule(n) for n in names]
    return {r.name: r for r in rules}


def _split_rules(text: str) -> list[str]:
    # commas inside sl(...) belong to the rule name
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ",;" and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


def _read_input(text: str | None, path: str | None) -> str:
    if path:
        return Path(path).read_text(encoding="utf-8")
    if text is None:
        raise UsageError("no input given")
    return text


def _load_proof(path: str) -> deriv.Derivation:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        # fixture files wrap the proof with its system and metadata
        return deriv.from_json(obj["proof"] if "proof" in obj and "seq" not in obj else obj)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read proof {path}: {exc}") from None


def _emit_proof(d: deriv.Derivation, emit: str, out) -> None:
    if emit == "dot":
        out.write(deriv.to_dot(d) + "\n")
    elif emit == "text":
        out.write(deriv.render_text(d) + "\n")
    else:
        out.write(deriv.dumps(d) + "\n")


def _emit_sequent(s: seqmod.Sequent, emit: str, out) -> None:
    if emit == "dot":
        out.write(seqmod.to_dot(s) + "\n")
    elif emit == "text":
        out.write(seqmod.to_unicode_seq(s) + "\n")
    else:
        out.write(seqmod.dumps(s) + "\n")


# --- verbs -------------------------------------------------------------------------------


def _prove(args, out) -> int:
    system = _logic(args.logic)
    s = parse_sequent(_read_input(args.input, args.file))
    outcome = prove_dkt(s) if system is None else prove_extension(s, system, args.depth)
    if isinstance(outcome, Proved):
        try:
            check_deep(outcome.derivation, system or SYSTEMS["DKt"])
        except CheckError as exc:
            print(f"internal error: produced proof failed validation: {exc}", file=sys.stderr)
            return EX_INVALID
        _emit_proof(outcome.derivation, args.emit, out)
        return EX_OK
    if isinstance(outcome, Refuted):
        print("Refuted; stuck sequent:", file=sys.stderr)
        _emit_sequent(outcome.stuck, args.emit, out)
        return EX_NO
    print(f"Unknown: {outcome.reason}", file=sys.stderr)
    return EX_UNKNOWN


def _check(args, out) -> int:
    d = _load_proof(args.proof)
    try:
        if args.calc == "dkt":
            check_deep(d, _deep_system(args.system))
        else:
            check_shallow(d, _shallow_system(args.system, d), allow_cut=args.allow_cut)
    except CheckError as exc:
        out.write(json.dumps({"valid": False, "error": exc.message, "where": list(exc.where)}) + "\n")
        return EX_INVALID
    out.write(json.dumps({"valid": True, "end_sequent": str(d.seq)}) + "\n")
    return EX_OK


def _translate(args, out) -> int:
    d = _load_proof(args.proof)
    try:
        if args.dir == "s2d":
            check_shallow(d)
            result = translate_skt_to_dkt(d)
            check_deep(result)
        else:
            check_deep(d)
            result = translate_dkt_to_skt(d)
            check_shallow(result)
    except CheckError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EX_INVALID
    _emit_proof(result, args.emit, out)
    return EX_OK


def _cutelim(args, out) -> int:
    d = _load_proof(args.proof)
    system = _shallow_system(args.system, d)
    trace: list = []
    try:
        result = eliminate_cuts(d, system, trace if args.trace else None)
    except CheckError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EX_INVALID
    for n, step in enumerate(trace):
        print(f"# cut {n}: {to_text(step.formula)} (rank {step.rank})", file=sys.stderr)
        _emit_proof(step.after, args.emit, out)
    _emit_proof(result, args.emit, out)
    return EX_OK


def _grammar(args, out) -> int:
    axioms = parse_axioms(args.axioms)
    colour = Diamond.WHITE if args.diamond == "w" else Diamond.BLACK
    if args.query is not None:
        word = parse_word(args.query)
        ok = cyk_membership(build_grammar(axioms, colour), word)
        out.write(("accepted" if ok else "rejected") + "\n")
        return EX_OK if ok else EX_NO
    if args.applicable is not None:
        try:
            text, i, j, dia = args.applicable.rsplit(",", 3)
        except ValueError:
            raise UsageError("--applicable expects '<sequent>,<source>,<target>,<w|b>'") from None
        dcol = Diamond.WHITE if dia.strip() == "w" else Diamond.BLACK
        witness = propagation_witness(parse_sequent(text), parse_address(i.strip()), parse_address(j.strip()),
                                      dcol, axioms)
        if witness is None:
            out.write("not applicable\n")
            return EX_NO
        out.write(f"applicable via {word_text(witness) or 'ε'}\n")
        return EX_OK
    out.write(str(build_grammar(axioms, colour)) + "\n")
    return EX_OK


def _countermodel(args, out) -> int:
    f = parse(_read_input(args.input, args.file).strip())
    found = find_countermodel(f, args.bound, args.frames)
    out.write(countermodel_json(found) + "\n")
    return EX_OK if found else EX_NO


def _bench_one(f, system, depth):
    start = time.perf_counter()
    outcome = prove_dkt(f) if system is None else prove_extension(f, system, depth)
    return type(outcome).__name__, outcome.stats.steps, time.perf_counter() - start


def _bench(args, out) -> int:
    system = _logic(args.logic)
    formulas = read_corpus(args.corpus)
    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(lambda f: _bench_one(f, system, args.depth), formulas))
    else:
        rows = [_bench_one(f, system, args.depth) for f in formulas]
    out.write("formula\tlogic\toutcome\tsteps\twall_time\n")
    for f, (name, steps, wall) in zip(formulas, rows):
        out.write(f"{to_text(f)}\t{args.logic}\t{name}\t{steps}\t{wall:.6f}\n")
    return EX_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tensera", description="Nested sequent proof tools for tense logic.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    emit = dict(choices=("json", "dot", "text"), default="json")

    q = sub.add_parser("prove", help="search for a deep proof")
    q.add_argument("input", nargs="?")
    q.add_argument("--file")
    q.add_argument("--logic", default="kt")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--emit", **emit)
    q.set_defaults(run=_prove)

    q = sub.add_parser("check", help="validate a proof JSON file")
    q.add_argument("proof")
    q.add_argument("--calc", choices=("skt", "dkt"), required=True)
    q.add_argument("--system")
    q.add_argument("--allow-cut", action="store_true")
    q.set_defaults(run=_check)

    q = sub.add_parser("translate", help="convert between shallow and deep proofs")
    q.add_argument("proof")
    q.add_argument("--dir", choices=("s2d", "d2s"), required=True)
    q.add_argument("--emit", **emit)
    q.set_defaults(run=_translate)

    q = sub.add_parser("cutelim", help="eliminate cuts from a shallow proof")
    q.add_argument("proof")
    q.add_argument("--system")
    q.add_argument("--trace", action="store_true")
    q.add_argument("--emit", **emit)
    q.set_defaults(run=_cutelim)

    q = sub.add_parser("grammar", help="query the grammar of a path-axiom set")
    q.add_argument("--axioms", required=True)
    q.add_argument("--diamond", choices=("w", "b"), default="w")
    g = q.add_mutually_exclusive_group()
    g.add_argument("--query")
    g.add_argument("--applicable")
    q.set_defaults(run=_grammar)

    q = sub.add_parser("countermodel", help="search for a small Kripke countermodel")
    q.add_argument("input", nargs="?")
    q.add_argument("--file")
    q.add_argument("--bound", type=int, default=4)
    q.add_argument("--frames", choices=FRAME_FILTERS, default="none")
    q.set_defaults(run=_countermodel)

    q = sub.add_parser("bench", help="run the prover over a corpus file")
    q.add_argument("--corpus", required=True)
    q.add_argument("--logic", default="kt")
    q.add_argument("--depth", type=int, default=3)
    q.add_argument("--jobs", type=int, default=1)
    q.set_defaults(run=_bench)
    return p


def run(argv: list[str], out=None) -> int:
    out = out or sys.stdout
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ParseError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
