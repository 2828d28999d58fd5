"""Path axioms, their context-free grammars and propagation applicability.

A path axiom ``d1 ... dn X -> d X`` over the diamonds ◇ (``w``) and ◆ (``b``)
yields the production ``C(d) -> C(d1) ... C(dn)`` with ``C(◇) = F`` and
``C(◆) = P``.  Whether a diamond formula may travel from node ``i`` to
node ``j`` of a sequent tree is the question whether the grammar's
language meets the label strings of walks ``i -> j`` in the propagation
graph.  That is decided on a product of the grammar in Chomsky normal form
with the graph (a Bar-Hillel style construction), without materialising
the infinite axiom completion.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .formula import Diamond
from .sequent import NodeAddress, Polarity, PropagationGraph, Sequent, iter_nodes, propagation_graph

W = Diamond.WHITE
B = Diamond.BLACK

Word = tuple[Diamond, ...]


@dataclass(frozen=True, order=True)
class PathAxiom:
    sources: Word
    target: Diamond

    def __str__(self) -> str:
        return word_text(self.sources) + "->" + self.target.value


def word_text(word: Iterable[Diamond]) -> str:
    return "".join(d.value for d in word)


def parse_word(text: str) -> Word:
    text = text.strip()
    bad = set(text) - {"w", "b", "◇", "◆"}
    if bad:
        raise ValueError(f"path strings use only w and b, got {''.join(sorted(bad))!r}")
    return tuple(W if c in "w◇" else B for c in text)


_AXIOM_RE = re.compile(r"^\s*([wb◇◆]*)\s*->\s*([wb◇◆])\s*$")


def parse_axiom(text: str) -> PathAxiom:
    m = _AXIOM_RE.match(text)
    if not m:
        raise ValueError(f"bad path axiom {text!r}; expected e.g. 'bw->w' or '->w'")
    return PathAxiom(parse_word(m.group(1)), parse_word(m.group(2))[0])


def parse_axioms(text: str) -> frozenset[PathAxiom]:
    parts = [p for p in re.split(r"[;,]", text) if p.strip()]
    return frozenset(parse_axiom(p) for p in parts)


def invert_axiom(ax: PathAxiom) -> PathAxiom:
    return PathAxiom(tuple(d.inverse() for d in reversed(ax.sources)), ax.target.inverse())


def compose_axioms(f: PathAxiom, g: PathAxiom) -> set[PathAxiom]:
    """Splice ``f``'s sources into ``g`` at every source position matching ``f.target``."""
    out = set()
    for n, d in enumerate(g.sources):
        if d is f.target:
            out.add(PathAxiom(g.sources[:n] + f.sources + g.sources[n + 1:], g.target))
    return out


def identity_axioms() -> frozenset[PathAxiom]:
    return frozenset({PathAxiom((W,), W), PathAxiom((B,), B)})


# Axiom sets used throughout the tests and experiments.
S4_AXIOMS = frozenset({PathAxiom((), W), PathAxiom((W, W), W)})
EUCLID_AXIOMS = frozenset({PathAxiom((B, W), W)})
S5_AXIOMS = S4_AXIOMS | EUCLID_AXIOMS
TRANSITIVE_AXIOMS = frozenset({PathAxiom((W, W), W)})


# --- grammars -------------------------------------------------------------------

Symbol = str  # "F", "P", "w", "b" (plus fresh names after normalisation)
NONTERMINAL = {W: "F", B: "P"}


@dataclass(frozen=True)
class Grammar:
    productions: frozenset[tuple[Symbol, tuple[Symbol, ...]]]
    start: Symbol

    @property
    def nonterminals(self) -> frozenset[Symbol]:
        return frozenset({"F", "P"})

    def sorted_productions(self) -> list[tuple[Symbol, tuple[Symbol, ...]]]:
        return sorted(self.productions, key=lambda p: (p[0], len(p[1]), p[1]))

    def __str__(self) -> str:
        lines = [f"start {self.start}"]
        for head, body in self.sorted_productions():
            lines.append(f"{head} -> {' '.join(body) if body else 'ε'}")
        return "\n".join(lines)


def production_of(ax: PathAxiom) -> tuple[Symbol, tuple[Symbol, ...]]:
    return NONTERMINAL[ax.target], tuple(NONTERMINAL[d] for d in ax.sources)


def build_grammar(axioms: Iterable[PathAxiom], start: Diamond) -> Grammar:
    axioms = set(axioms)
    prods = {("F", ("w",)), ("P", ("b",))}
    for ax in axioms | {invert_axiom(a) for a in axioms}:
        prods.add(production_of(ax))
    return Grammar(frozenset(prods), NONTERMINAL[start])


@dataclass(frozen=True)
class CNF:
    """ε-free, unit-free Chomsky normal form plus an ε flag per nonterminal."""

    terminal_rules: frozenset[tuple[Symbol, str]]
    binary_rules: frozenset[tuple[Symbol, Symbol, Symbol]]
    nullable: frozenset[Symbol]
    start: Symbol


def to_cnf(g: Grammar) -> CNF:
    prods: set[tuple[Symbol, tuple[Symbol, ...]]] = set()
    fresh = itertools.count()
    term_nt = {"w": "Tw", "b": "Tb"}
    # Binarise long bodies and lift terminals out of non-unit bodies.
    for head, body in g.productions:
        if len(body) >= 2:
            body = tuple(term_nt.get(s, s) for s in body)
        while len(body) > 2:
            name = f"X{next(fresh)}"
            prods.add((head, (body[0], name)))
            head, body = name, body[1:]
        prods.add((head, body))
    prods |= {("Tw", ("w",)), ("Tb", ("b",))}
    nonterminals = {h for h, _ in prods}
    # Nullable symbols.
    nullable: set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for head, body in prods:
            if head not in nullable and all(s in nullable for s in body):
                nullable.add(head)
                changed = True
    # Drop ε: A -> BC also yields A -> B / A -> C when the other side is nullable.
    eps_free: set[tuple[Symbol, tuple[Symbol, ...]]] = set()
    for head, body in prods:
        if len(body) == 2:
            x, y = body
            eps_free.add((head, body))
            if y in nullable:
                eps_free.add((head, (x,)))
            if x in nullable:
                eps_free.add((head, (y,)))
        elif len(body) == 1:
            eps_free.add((head, body))
    # Unit closure.
    unit = {a: {a} for a in nonterminals}
    changed = True
    while changed:
        changed = False
        for head, body in eps_free:
            if len(body) == 1 and body[0] in nonterminals:
                for a in nonterminals:
                    if head in unit[a] and body[0] not in unit[a]:
                        unit[a].add(body[0])
                        changed = True
    terminal_rules = set()
    binary_rules = set()
    for a in nonterminals:
        for head, body in eps_free:
            if head not in unit[a]:
                continue
            if len(body) == 1 and body[0] not in nonterminals:
                terminal_rules.add((a, body[0]))
            elif len(body) == 2:
                binary_rules.add((a, body[0], body[1]))
    return CNF(frozenset(terminal_rules), frozenset(binary_rules), frozenset(nullable), g.start)


@lru_cache(maxsize=256)
def _cnf_cached(g: Grammar) -> CNF:
    return to_cnf(g)


def cyk_membership(g: Grammar, word: Sequence[Diamond] | str) -> bool:
    if isinstance(word, str):
        word = parse_word(word)
    cnf = _cnf_cached(g)
    n = len(word)
    if n == 0:
        return cnf.start in cnf.nullable
    table: dict[tuple[int, int], set[Symbol]] = {}
    for i, d in enumerate(word):
        table[i, i + 1] = {a for a, t in cnf.terminal_rules if t == d.value}
    for length in range(2, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            cell = set()
            for m in range(i + 1, j):
                left, right = table[i, m], table[m, j]
                if not left or not right:
                    continue
                for a, x, y in cnf.binary_rules:
                    if x in left and y in right:
                        cell.add(a)
            table[i, j] = cell
    return cnf.start in table[0, n]


def language_of(axioms: Iterable[PathAxiom], d: Diamond) -> Grammar:
    return build_grammar(frozenset(axioms), d)


# --- propagation applicability ----------------------------------------------------

Shape = tuple  # nested tuple of (polarity value, shape) pairs


def tree_shape(s: Sequent) -> Shape:
    return tuple((p.value, tree_shape(c)) for p, c in s.children)


def _shape_graph(shape: Shape) -> PropagationGraph:
    return propagation_graph(_shape_sequent(shape))


def _shape_sequent(shape: Shape) -> Sequent:
    return Sequent((), tuple((Polarity(p), _shape_sequent(c)) for p, c in shape))


def _key(word: Word) -> tuple[int, tuple[int, ...]]:
    # shortest first, then lexicographic with ◇ < ◆
    return len(word), tuple(0 if d is W else 1 for d in word)


@lru_cache(maxsize=4096)
def _witness_table(shape: Shape, axioms: frozenset[PathAxiom], d: Diamond) -> dict[tuple[NodeAddress, NodeAddress], Word]:
    """Shortest accepted label string for every pair of nodes, where one exists."""
    pg = _shape_graph(shape)
    cnf = _cnf_cached(build_grammar(axioms, d))
    best: dict[tuple[Symbol, NodeAddress, NodeAddress], Word] = {}

    def offer(k, word) -> bool:
        old = best.get(k)
        if old is None or _key(word) < _key(old):
            best[k] = word
            return True
        return False

    for a, t in cnf.terminal_rules:
        for p, q, lab in pg.edges:
            if lab.value == t:
                offer((a, p, q), (lab,))
    # Relax binary rules to a fixpoint; values only decrease in a well order
    # with finitely many candidates below any string, so this terminates.
    changed = True
    while changed:
        changed = False
        by_left: dict[tuple[Symbol, NodeAddress], list[tuple[NodeAddress, Word]]] = {}
        for (x, p, r), w in best.items():
            by_left.setdefault((x, p), []).append((r, w))
        snapshot = dict(best)
        for a, x, y in cnf.binary_rules:
            for (sym, p, r), w1 in snapshot.items():
                if sym != x:
                    continue
                for q, w2 in by_left.get((y, r), ()):
                    if offer((a, p, q), w1 + w2):
                        changed = True
    out = {(p, q): w for (a, p, q), w in best.items() if a == cnf.start}
    if cnf.start in cnf.nullable:
        for node in pg.nodes:
            out[node, node] = ()
    return out


def propagation_witness(s: Sequent, i: NodeAddress, j: NodeAddress, d: Diamond,
                        axioms: Iterable[PathAxiom]) -> Word | None:
    """Shortest label string in L_d of a walk from ``i`` to ``j``, or None."""
    table = _witness_table(tree_shape(s), frozenset(axioms), d)
    nodes = {a for a, _ in iter_nodes(s)}
    if i not in nodes or j not in nodes:
        raise IndexError("node address not in the sequent")
    return table.get((i, j))


def propagation_applicable(s: Sequent, i: NodeAddress, j: NodeAddress, d: Diamond,
                           axioms: Iterable[PathAxiom]) -> bool:
    return propagation_witness(s, i, j, d, axioms) is not None


def walk_exists(pg: PropagationGraph, i: NodeAddress, j: NodeAddress, word: Sequence[Diamond]) -> bool:
    """Whether some walk from ``i`` to ``j`` carries exactly the labels ``word``."""
    return j in walk_ends(pg, i, word)


def walk_ends(pg: PropagationGraph, i: NodeAddress, word: Sequence[Diamond]) -> set[NodeAddress]:
    current = {i}
    for lab in word:
        current = {q for (p, q, l) in pg.edges if p in current and l is lab}
    return current


def find_walk(pg: PropagationGraph, i: NodeAddress, j: NodeAddress, word: Sequence[Diamond]) -> list[NodeAddress] | None:
    """One concrete walk realising ``word`` from ``i`` to ``j``."""
    layers = [{i: None}]
    for lab in word:
        nxt = {}
        for (p, q, l) in sorted(pg.edges):
            if l is lab and p in layers[-1] and q not in nxt:
                nxt[q] = p
        layers.append(nxt)
    if j not in layers[-1]:
        return None
    walk = [j]
    for layer in reversed(layers[1:]):
        walk.append(layer[walk[-1]])
    return list(reversed(walk))


def bounded_closure(axioms: Iterable[PathAxiom], rounds: int) -> set[PathAxiom]:
    """Axioms reachable by at most ``rounds`` compositions from P ∪ I(P) ∪ identities.

    A brute-force stand-in for the completion, used only as a test oracle.
    """
    base = set(axioms)
    base |= {invert_axiom(a) for a in base}
    base |= identity_axioms()
    current = set(base)
    for _ in range(rounds):
        new = set(current)
        for f in current:
            for g in current:
                new |= compose_axioms(f, g)
        if new == current:
            break
        current = new
    return current
