"""Nested sequents: polarity-labelled trees of formula multisets.

A node stores its formulas as an ordered tuple and its children as an
ordered tuple of ``(Polarity, Sequent)`` pairs.  Equality and hashing ignore
both orders (multiset semantics) via a cached canonical key, while the
stored order gives stable addresses for formula occurrences.
"""

from __future__ import annotations

import enum
import json
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Union

from .formula import (
    BOTTOM,
    Atom,
    Box,
    BlackBox,
    Diamond,
    Formula,
    NegAtom,
    Or,
    ParseError,
    TokenStream,
    iter_subformulas,
    parse,
    to_text,
    tokenize,
)


class Polarity(enum.Enum):
    CIRCLE = "o"
    BULLET = "b"

    def flip(self) -> "Polarity":
        return Polarity.BULLET if self is Polarity.CIRCLE else Polarity.CIRCLE

    @property
    def symbol(self) -> str:
        return "∘" if self is Polarity.CIRCLE else "•"


CIRCLE = Polarity.CIRCLE
BULLET = Polarity.BULLET

NodeAddress = tuple[int, ...]
ROOT: NodeAddress = ()


@dataclass(frozen=True)
class FormulaAddress:
    node: NodeAddress
    index: int


@dataclass(frozen=True)
class Mark:
    """A placeholder occurrence used while substituting through a proof.

    Marks never appear in a finished derivation; they only let the cut
    eliminator tell ancestors of a cut formula from look-alike formulas.
    """

    formula: Formula
    tag: int = 0


Item = Union[Formula, Mark]


def item_text(f: Item) -> str:
    if isinstance(f, Mark):
        return f"@{f.tag}:{to_text(f.formula)}"
    return to_text(f)


@dataclass(frozen=True, eq=False)
class Sequent:
    formulas: tuple[Item, ...] = ()
    children: tuple[tuple[Polarity, "Sequent"], ...] = ()

    @cached_property
    def canonical(self) -> str:
        parts = sorted(item_text(f) for f in self.formulas)
        kids = sorted(p.value + "{" + c.canonical + "}" for p, c in self.children)
        return ", ".join(parts + kids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequent):
            return NotImplemented
        return self is other or self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __repr__(self) -> str:
        return f"Sequent({to_text_seq(self)!r})"

    def __str__(self) -> str:
        return to_text_seq(self)

    # -- small constructors -------------------------------------------------

    def add(self, *fs: Item) -> "Sequent":
        return Sequent(self.formulas + tuple(fs), self.children)

    def add_child(self, pol: Polarity, child: "Sequent") -> "Sequent":
        return Sequent(self.formulas, self.children + ((pol, child),))

    def without_index(self, index: int) -> "Sequent":
        fs = self.formulas
        return Sequent(fs[:index] + fs[index + 1:], self.children)

    def without_child(self, index: int) -> "Sequent":
        ch = self.children
        return Sequent(self.formulas, ch[:index] + ch[index + 1:])

    def replace_child(self, index: int, child: "Sequent") -> "Sequent":
        ch = list(self.children)
        ch[index] = (ch[index][0], child)
        return Sequent(self.formulas, tuple(ch))

    def index_of(self, f: Item) -> int | None:
        try:
            return self.formulas.index(f)
        except ValueError:
            return None

    def remove(self, f: Item) -> "Sequent":
        i = self.index_of(f)
        if i is None:
            raise KeyError(f"{item_text(f)} not in sequent")
        return self.without_index(i)

    def child_index(self, pol: Polarity, child: "Sequent") -> int | None:
        for i, (p, c) in enumerate(self.children):
            if p is pol and c == child:
                return i
        return None

    @property
    def is_empty(self) -> bool:
        return not self.formulas and not self.children


EMPTY = Sequent()


def seq(*formulas: Item | str, children: Iterable[tuple[Polarity, Sequent]] = ()) -> Sequent:
    """Convenience constructor; strings are parsed as formulas."""
    fs = tuple(parse(f) if isinstance(f, str) else f for f in formulas)
    return Sequent(fs, tuple(children))


def merge(a: Sequent, b: Sequent) -> Sequent:
    """The juxtaposition Γ, Δ."""
    return Sequent(a.formulas + b.formulas, a.children + b.children)


def subtract(big: Sequent, small: Sequent) -> Sequent | None:
    """Remove ``small`` from the top level of ``big``; None if not contained."""
    fs = list(big.formulas)
    for f in small.formulas:
        try:
            fs.remove(f)
        except ValueError:
            return None
    ch = list(big.children)
    for pol, c in small.children:
        for i, (p2, c2) in enumerate(ch):
            if p2 is pol and c2 == c:
                del ch[i]
                break
        else:
            return None
    return Sequent(tuple(fs), tuple(ch))


# --- addressing ---------------------------------------------------------------


def node_at(s: Sequent, addr: NodeAddress) -> Sequent:
    node = s
    for depth, i in enumerate(addr):
        if not 0 <= i < len(node.children):
            raise IndexError(f"invalid address {format_address(addr)} (level {depth})")
        node = node.children[i][1]
    return node


def polarity_at(s: Sequent, addr: NodeAddress) -> Polarity:
    """Polarity of the edge entering ``addr`` (which must not be the root)."""
    if not addr:
        raise IndexError("the root has no incoming edge")
    return node_at(s, addr[:-1]).children[addr[-1]][0]


def replace_at(s: Sequent, addr: NodeAddress, new: Sequent) -> Sequent:
    if not addr:
        return new
    node_at(s, addr)  # validates
    # Rebuild the spine iteratively to keep recursion shallow.
    spine = [s]
    for i in addr[:-1]:
        spine.append(spine[-1].children[i][1])
    out = new
    for parent, i in zip(reversed(spine), reversed(addr)):
        out = parent.replace_child(i, out)
    return out


def update_at(s: Sequent, addr: NodeAddress, fn: Callable[[Sequent], Sequent]) -> Sequent:
    return replace_at(s, addr, fn(node_at(s, addr)))


def addresses(s: Sequent) -> list[NodeAddress]:
    """All node addresses, breadth first (leftmost-outermost)."""
    out = []
    queue = deque([((), s)])
    while queue:
        addr, node = queue.popleft()
        out.append(addr)
        for i, (_, c) in enumerate(node.children):
            queue.append((addr + (i,), c))
    return out


def iter_nodes(s: Sequent) -> Iterator[tuple[NodeAddress, Sequent]]:
    queue = deque([((), s)])
    while queue:
        addr, node = queue.popleft()
        yield addr, node
        for i, (_, c) in enumerate(node.children):
            queue.append((addr + (i,), c))


def node_count(s: Sequent) -> int:
    return sum(1 for _ in iter_nodes(s))


def depth(s: Sequent) -> int:
    return max(len(a) for a in addresses(s))


def all_formulas(s: Sequent) -> list[Item]:
    return [f for _, node in iter_nodes(s) for f in node.formulas]


def subformula_set(s: Sequent) -> frozenset[Formula]:
    out: set[Formula] = set()
    for f in all_formulas(s):
        out.update(iter_subformulas(f.formula if isinstance(f, Mark) else f))
    return frozenset(out)


def format_address(addr: NodeAddress) -> str:
    return "." if not addr else ".".join(str(i) for i in addr)


def parse_address(text: str) -> NodeAddress:
    text = text.strip()
    if text in (".", ""):
        return ()
    try:
        return tuple(int(p) for p in text.split("."))
    except ValueError:
        raise ValueError(f"bad node address {text!r}") from None


# --- edits --------------------------------------------------------------------


@dataclass(frozen=True)
class AddFormula:
    formula: Item


@dataclass(frozen=True)
class RemoveFormula:
    index: int


@dataclass(frozen=True)
class AddChild:
    polarity: Polarity
    child: Sequent


@dataclass(frozen=True)
class RemoveChild:
    index: int


Edit = Union[AddFormula, RemoveFormula, AddChild, RemoveChild]


def _occurrences(s: Sequent) -> list[FormulaAddress]:
    return [FormulaAddress(a, i) for a, node in iter_nodes(s) for i in range(len(node.formulas))]


def edit_at(s: Sequent, addr: NodeAddress, edit: Edit) -> tuple[Sequent, dict[FormulaAddress, FormulaAddress]]:
    """Apply one edit at ``addr``; also return the occurrence remap.

    The remap sends every surviving occurrence of ``s`` to its address in
    the result.  Removed occurrences are absent from it.
    """
    node = node_at(s, addr)
    remap = {o: o for o in _occurrences(s)}
    if isinstance(edit, AddFormula):
        new = node.add(edit.formula)
    elif isinstance(edit, AddChild):
        new = node.add_child(edit.polarity, edit.child)
    elif isinstance(edit, RemoveFormula):
        if not 0 <= edit.index < len(node.formulas):
            raise IndexError(f"no formula {edit.index} at {format_address(addr)}")
        new = node.without_index(edit.index)
        for o in list(remap):
            if o.node == addr:
                if o.index == edit.index:
                    del remap[o]
                elif o.index > edit.index:
                    remap[o] = FormulaAddress(addr, o.index - 1)
    elif isinstance(edit, RemoveChild):
        if not 0 <= edit.index < len(node.children):
            raise IndexError(f"no child {edit.index} at {format_address(addr)}")
        new = node.without_child(edit.index)
        n = len(addr)
        for o in list(remap):
            if len(o.node) > n and o.node[:n] == addr:
                k = o.node[n]
                if k == edit.index:
                    del remap[o]
                elif k > edit.index:
                    remap[o] = FormulaAddress(addr + (k - 1,) + o.node[n + 1:], o.index)
    else:
        raise TypeError(f"unknown edit {edit!r}")
    return replace_at(s, addr, new), remap


# --- contexts -----------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """A sequent with holes at the listed nodes.

    Filling a hole merges the filler into that node, so filling never
    invalidates the addresses of the other holes.
    """

    base: Sequent
    holes: tuple[NodeAddress, ...]

    def __post_init__(self):
        if len(set(self.holes)) != len(self.holes):
            raise ValueError("duplicate hole address")
        for h in self.holes:
            node_at(self.base, h)

    def fill(self, filler: Sequent) -> Sequent:
        out = self.base
        for h in self.holes:
            out = update_at(out, h, lambda node: merge(node, filler))
        return out


# --- tau translation ------------------------------------------------------------


def tau_translate(s: Sequent) -> Formula:
    parts: list[Formula] = [f.formula if isinstance(f, Mark) else f for f in s.formulas]
    for pol, child in s.children:
        body = tau_translate(child)
        parts.append(Box(body) if pol is CIRCLE else BlackBox(body))
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# --- display ------------------------------------------------------------------


@dataclass(frozen=True)
class RuleStep:
    """One residuation step: ``conclusion`` follows from ``premise``."""

    rule: str
    param: Sequent
    conclusion: Sequent
    premise: Sequent


def residuate_into(s: Sequent, k: int) -> tuple[Sequent, RuleStep, RuleStep]:
    """Rotate child ``k`` of ``s`` to the root.

    The old root (minus that child) becomes the last child of the new
    root under the flipped polarity.  Returns the new sequent, the step
    deriving it from ``s`` and the step deriving ``s`` from it.
    """
    pol, child = s.children[k]
    rest = s.without_child(k)
    new = child.add_child(pol.flip(), rest)
    # new has rest as a flipped child; rf consumes a •-child, rp a ∘-child.
    into = RuleStep("rf" if pol is CIRCLE else "rp", rest, new, s)
    back = RuleStep("rp" if pol is CIRCLE else "rf", child, s, new)
    return new, into, back


def display(s: Sequent, target: NodeAddress) -> tuple[Sequent, list[RuleStep], list[RuleStep]]:
    """Bring the node at ``target`` to the root using residuation only.

    ``steps_back`` derives the displayed sequent from ``s`` and is listed
    from the displayed end upward (first step has the displayed sequent as
    conclusion).  ``steps_out`` derives ``s`` from the displayed sequent,
    listed from ``s`` upward.
    """
    node_at(s, target)
    current = s
    into_steps: list[RuleStep] = []
    back_steps: list[RuleStep] = []
    for k in target:
        current, into, back = residuate_into(current, k)
        into_steps.append(into)
        back_steps.append(back)
    steps_back = list(reversed(into_steps))
    steps_out = back_steps
    return current, steps_out, steps_back


def rotation_map(s: Sequent, k: int) -> Callable[[NodeAddress], NodeAddress]:
    """Address map from ``s`` to ``residuate_into(s, k)[0]``."""
    last = len(s.children[k][1].children)

    def m(addr: NodeAddress) -> NodeAddress:
        if addr[:1] == (k,):
            return addr[1:]
        if not addr:
            return (last,)
        head = addr[0] if addr[0] < k else addr[0] - 1
        return (last, head) + addr[1:]

    return m


def display_address_map(s: Sequent, target: NodeAddress) -> Callable[[NodeAddress], NodeAddress]:
    """Map addresses of ``s`` to addresses in ``display(s, target)[0]``."""
    maps = []
    current = s
    for k in target:
        maps.append(rotation_map(current, k))
        current = residuate_into(current, k)[0]

    def apply(addr: NodeAddress) -> NodeAddress:
        for m in maps:
            addr = m(addr)
        return addr

    return apply


# --- propagation graph ----------------------------------------------------------


@dataclass(frozen=True)
class PropagationGraph:
    nodes: frozenset[NodeAddress]
    edges: frozenset[tuple[NodeAddress, NodeAddress, Diamond]]

    def successors(self, node: NodeAddress) -> list[tuple[NodeAddress, Diamond]]:
        return sorted(((t, d) for (f, t, d) in self.edges if f == node), key=lambda e: (e[1].value != "w", e[0]))


def propagation_graph(s: Sequent) -> PropagationGraph:
    nodes = []
    edges = set()
    for addr, node in iter_nodes(s):
        nodes.append(addr)
        for i, (pol, _) in enumerate(node.children):
            child = addr + (i,)
            down = Diamond.WHITE if pol is CIRCLE else Diamond.BLACK
            edges.add((addr, child, down))
            edges.add((child, addr, down.inverse()))
    return PropagationGraph(frozenset(nodes), frozenset(edges))


# --- text / JSON / DOT ----------------------------------------------------------


def to_text_seq(s: Sequent) -> str:
    parts = [item_text(f) for f in s.formulas]
    for pol, c in s.children:
        parts.append(f"{pol.value}{{{to_text_seq(c)}}}")
    return ", ".join(parts)


def to_unicode_seq(s: Sequent) -> str:
    from .formula import to_unicode

    parts = [to_unicode(f.formula) if isinstance(f, Mark) else to_unicode(f) for f in s.formulas]
    for pol, c in s.children:
        parts.append(f"{pol.symbol}{{{to_unicode_seq(c)}}}")
    return ", ".join(parts) if parts else "∅"


def parse_sequent(text: str) -> Sequent:
    """Read ``a, o{b, b{c}}``; ``∘{}``/``•{}`` are accepted too."""
    stream = TokenStream(tokenize(text))
    result = _read_items(stream, closing=None)
    if stream.peek.kind != "end":
        raise ParseError(f"unexpected token {stream.peek.text!r}", stream.peek.pos)
    return result


def _read_items(stream: TokenStream, closing: str | None) -> Sequent:
    formulas: list[Formula] = []
    children: list[tuple[Polarity, Sequent]] = []
    tok = stream.peek
    if (closing and tok.kind == "op" and tok.text == closing) or tok.kind == "end":
        return Sequent()
    while True:
        tok = stream.peek
        if tok.kind == "struct":
            stream.advance()
            child = _read_items(stream, closing="}")
            stream.expect("}")
            children.append((Polarity(tok.text), child))
        else:
            formulas.append(stream.formula())
        if stream.peek.kind == "op" and stream.peek.text == ",":
            stream.advance()
            continue
        break
    return Sequent(tuple(formulas), tuple(children))


def to_json(s: Sequent) -> dict:
    return {
        "fs": [item_text(f) for f in s.formulas],
        "ch": [{"pol": p.value, "seq": to_json(c)} for p, c in s.children],
    }


def from_json(obj: dict) -> Sequent:
    try:
        fs = tuple(parse(f) for f in obj.get("fs", []))
        ch = tuple((Polarity(c["pol"]), from_json(c["seq"])) for c in obj.get("ch", []))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed sequent JSON: {exc}") from None
    return Sequent(fs, ch)


def dumps(s: Sequent) -> str:
    return json.dumps(to_json(s))


def to_dot(s: Sequent, name: str = "sequent") -> str:
    """DOT text for the tree; children sorted (∘ first) for stable output."""
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    counter = [0]

    def emit(node: Sequent) -> str:
        ident = f"n{counter[0]}"
        counter[0] += 1
        label = ", ".join(sorted(item_text(f) for f in node.formulas)) or "∅"
        lines.append(f"  {ident} [label={json.dumps(label)}];")
        kids = sorted(node.children, key=lambda pc: (pc[0] is BULLET, pc[1].canonical))
        for pol, c in kids:
            cid = emit(c)
            lines.append(f'  {ident} -> {cid} [label="{pol.value}"];')
        return ident

    emit(s)
    lines.append("}")
    return "\n".join(lines)


def formula_counter(s: Sequent) -> Counter:
    return Counter(s.formulas)


def literals_clash(node: Sequent) -> Atom | None:
    """First atom ``a`` with both ``a`` and ``~a`` in the node, if any."""
    present = set(node.formulas)
    for f in node.formulas:
        if isinstance(f, Atom) and NegAtom(f.name) in present:
            return f
    return None


def is_formula(f: Item) -> bool:
    return not isinstance(f, Mark)

