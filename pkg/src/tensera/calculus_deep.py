"""The deep calculus: rules applied at any node, principal formulas retained.

Parameters locate the instance by node address (a tuple of child indices):

=================================  ===========================================
rule                               params
=================================  ===========================================
id                                 [node, a]
and, or, box, bbox                 [node, principal]
dia1, dia2, bdia1, bdia2           [source node, principal, target node]
local:<id>                         [source node, principal, target node]
pathprop                           [source node, principal, target node] and a
                                   witness label string
=================================  ===========================================

``dia1`` propagates the body of a ◇ to a ∘-child and ``dia2`` from a
•-child to its parent; ``bdia1``/``bdia2`` are the ◆ mirror images.  Box
rules append the new child after the existing ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .derivation import Derivation, iter_derivation
from .formula import (
    And,
    Atom,
    BlackBox,
    BlackDia,
    Box,
    Diamond,
    Dia,
    Formula,
    NegAtom,
    Or,
    diamond_of,
    is_black_free,
    to_text,
)
from .path_engine import (
    PathAxiom,
    S4_AXIOMS,
    S5_AXIOMS,
    EUCLID_AXIOMS,
    build_grammar,
    cyk_membership,
    propagation_witness,
    walk_exists,
)
from .sequent import (
    BULLET,
    CIRCLE,
    NodeAddress,
    Polarity,
    Sequent,
    format_address,
    iter_nodes,
    node_at,
    propagation_graph,
    update_at,
)
from .calculus_shallow import CheckError, RuleError

W = Diamond.WHITE
B = Diamond.BLACK

BASE_RULES = ("id", "and", "or", "box", "bbox", "dia1", "dia2", "bdia1", "bdia2")
MODAL_RULES = ("id", "and", "or", "box", "dia1")


# --- local propagation rules -------------------------------------------------------


def _is_child(s: Sequent, parent: NodeAddress, child: NodeAddress, pol: Polarity) -> bool:
    return (len(child) == len(parent) + 1 and child[:-1] == parent
            and node_at(s, parent).children[child[-1]][0] is pol)


def _grandchild(s: Sequent, top: NodeAddress, low: NodeAddress, first: Polarity, second: Polarity) -> bool:
    return (len(low) == len(top) + 2 and low[:len(top)] == top
            and _is_child(s, top, low[:-1], first) and _is_child(s, low[:-1], low, second))


def _has_child(s: Sequent, node: NodeAddress, pol: Polarity) -> bool:
    return any(p is pol for p, _ in node_at(s, node).children)


def _is_pol_child(s: Sequent, node: NodeAddress, pol: Polarity) -> bool:
    return bool(node) and _is_child(s, node[:-1], node, pol)


Relation = Callable[[Sequent, NodeAddress, NodeAddress], bool]


@dataclass(frozen=True)
class LocalRule:
    """A propagation rule with a fixed local shape.

    ``principal`` is the diamond colour the rule acts on (None: any formula);
    ``moves_body`` says whether the body or the whole principal formula
    lands at the target.
    """

    name: str
    principal: Diamond | None
    moves_body: bool
    relation: Relation
    # path axioms under which the rule is an instance of global propagation
    axioms: frozenset[PathAxiom] | None = None


def _same(s, i, j):
    return i == j


LOCAL_RULES: dict[str, LocalRule] = {r.name: r for r in [
    LocalRule("Ta", B, True, _same, S4_AXIOMS),
    LocalRule("Tb", W, True, _same, S4_AXIOMS),
    LocalRule("4a", B, False, lambda s, i, j: _is_child(s, i, j, BULLET), S4_AXIOMS),
    LocalRule("4b", B, False, lambda s, i, j: _is_child(s, j, i, CIRCLE), S4_AXIOMS),
    LocalRule("4c", W, False, lambda s, i, j: _is_child(s, i, j, CIRCLE), S4_AXIOMS),
    LocalRule("4d", W, False, lambda s, i, j: _is_child(s, j, i, BULLET), S4_AXIOMS),
    LocalRule("5a", B, False, lambda s, i, j: _is_child(s, i, j, CIRCLE), S5_AXIOMS),
    LocalRule("5b", W, False, lambda s, i, j: _is_child(s, j, i, CIRCLE), S5_AXIOMS),
    LocalRule("5c", W, False, lambda s, i, j: _is_child(s, i, j, BULLET), S5_AXIOMS),
    LocalRule("5d", B, False, lambda s, i, j: _is_child(s, j, i, BULLET), S5_AXIOMS),
    LocalRule("u1", None, False, lambda s, i, j: _grandchild(s, i, j, BULLET, CIRCLE)),
    LocalRule("u2", None, False, lambda s, i, j: (
        i != j and bool(i) and bool(j) and i[:-1] == j[:-1]
        and _is_pol_child(s, i, CIRCLE) and _is_pol_child(s, j, CIRCLE))),
    LocalRule("u3", None, False, lambda s, i, j: _grandchild(s, j, i, BULLET, CIRCLE)),
    # The two holes of the p5 schemata are read as arbitrary nodes of the tree.
    LocalRule("p5a", W, True, lambda s, i, j: _is_pol_child(s, i, CIRCLE) and _is_pol_child(s, j, CIRCLE),
              EUCLID_AXIOMS),
    LocalRule("p5b", W, True, lambda s, i, j: _is_pol_child(s, i, CIRCLE) and _has_child(s, j, BULLET),
              EUCLID_AXIOMS),
    LocalRule("p5c", W, True, lambda s, i, j: _has_child(s, i, BULLET) and _is_pol_child(s, j, CIRCLE),
              EUCLID_AXIOMS),
    LocalRule("p5d", W, True, lambda s, i, j: _has_child(s, i, BULLET) and _has_child(s, j, BULLET),
              EUCLID_AXIOMS),
]}

BLACK_LOCALS = frozenset({"Ta", "4a", "4b", "5a", "5d"})


# --- systems ----------------------------------------------------------------------


@dataclass(frozen=True)
class DeepSystem:
    name: str
    locals: frozenset[str] = frozenset()
    path_axioms: frozenset[PathAxiom] | None = None
    modal_only: bool = False

    def __post_init__(self):
        unknown = set(self.locals) - set(LOCAL_RULES)
        if unknown:
            raise ValueError(f"unknown local rules: {sorted(unknown)}")
        if self.modal_only and set(self.locals) & BLACK_LOCALS:
            raise ValueError("modal_only systems cannot contain black-principal local rules")

    @property
    def base_rules(self) -> tuple[str, ...]:
        return MODAL_RULES if self.modal_only else BASE_RULES

    def allows(self, rule: str) -> bool:
        if rule in BASE_RULES:
            return rule in self.base_rules
        if rule.startswith("local:"):
            return rule[len("local:"):] in self.locals
        if rule == "pathprop":
            return self.path_axioms is not None
        return False


DKT = DeepSystem("DKt")
DK = DeepSystem("DK", modal_only=True)
DS4 = DeepSystem("DS4", frozenset({"Ta", "Tb", "4a", "4b", "4c", "4d"}))
DKS4 = DeepSystem("DKS4", frozenset({"Tb", "4c"}), modal_only=True)
DS5 = DeepSystem("DS5", DS4.locals | {"5a", "5b", "5c", "5d"})
DKS5 = DeepSystem("DKS5", frozenset({"Tb", "4c", "5b"}), modal_only=True)
DKTU = DeepSystem("DKtU", frozenset({"u1", "u2", "u3"}))
DKU = DeepSystem("DKU", frozenset({"u2"}), modal_only=True)


def path_system(axioms: Iterable[PathAxiom], name: str | None = None, modal_only: bool = False) -> DeepSystem:
    axioms = frozenset(axioms)
    label = name or "DKt+{" + ", ".join(sorted(str(a) for a in axioms)) + "}"
    return DeepSystem(label, path_axioms=axioms, modal_only=modal_only)


SYSTEMS = {s.name: s for s in (DKT, DK, DS4, DKS4, DS5, DKS5, DKTU, DKU)}


# --- rule semantics ---------------------------------------------------------------------


def _principal_at(s: Sequent, addr: NodeAddress, f: Formula, kind) -> Sequent:
    try:
        node = node_at(s, addr)
    except IndexError as exc:
        raise RuleError(str(exc)) from None
    if kind is not None and not isinstance(f, kind):
        raise RuleError(f"principal formula {to_text(f)} has the wrong shape")
    if f not in node.formulas:
        raise RuleError(f"principal formula {to_text(f)} not found at node {format_address(addr)}")
    return node


_DIA_RULES = {
    "dia1": (W, True),   # colour, propagates downwards
    "dia2": (W, False),
    "bdia1": (B, True),
    "bdia2": (B, False),
}


def _edge_ok(s: Sequent, src: NodeAddress, tgt: NodeAddress, colour: Diamond, down: bool) -> bool:
    # dia1/bdia1 follow the down edge labelled with the diamond, dia2/bdia2 the up edge
    if down:
        pol = CIRCLE if colour is W else BULLET
        return _is_child(s, src, tgt, pol)
    pol = BULLET if colour is W else CIRCLE
    return _is_child(s, tgt, src, pol)


def deep_premises(d: Derivation, system: DeepSystem) -> list[Sequent]:
    """Premises the instance recorded in ``d`` must have."""
    rule, params, c = d.rule, d.params, d.seq
    if not system.allows(rule):
        raise RuleError(f"rule not in system: {rule}")
    try:
        if rule == "id":
            addr, a = params
            if isinstance(a, NegAtom):
                a = Atom(a.name)
            node = node_at(c, addr)
            if not isinstance(a, Atom) or a not in node.formulas or NegAtom(a.name) not in node.formulas:
                raise RuleError("no atomic clash")
            return []
        if rule in ("and", "or", "box", "bbox"):
            addr, f = params
            kind = {"and": And, "or": Or, "box": Box, "bbox": BlackBox}[rule]
            _principal_at(c, addr, f, kind)
            if rule == "and":
                return [update_at(c, addr, lambda n: n.add(f.left)), update_at(c, addr, lambda n: n.add(f.right))]
            if rule == "or":
                return [update_at(c, addr, lambda n: n.add(f.left, f.right))]
            pol = CIRCLE if rule == "box" else BULLET
            return [update_at(c, addr, lambda n: n.add_child(pol, Sequent((f.body,))))]
        src, f, tgt = params
        try:
            node_at(c, tgt)
        except IndexError as exc:
            raise RuleError(str(exc)) from None
        if rule in _DIA_RULES:
            colour, down = _DIA_RULES[rule]
            _principal_at(c, src, f, Dia if colour is W else BlackDia)
            if not _edge_ok(c, src, tgt, colour, down):
                raise RuleError(f"{rule} cannot reach node {format_address(tgt)} from {format_address(src)}")
            return [update_at(c, tgt, lambda n: n.add(f.body))]
        if rule.startswith("local:"):
            lr = LOCAL_RULES[rule[len("local:"):]]
            kind = None if lr.principal is None else (Dia if lr.principal is W else BlackDia)
            _principal_at(c, src, f, kind)
            if not lr.relation(c, src, tgt):
                raise RuleError(f"{lr.name} does not relate nodes {format_address(src)} and {format_address(tgt)}")
            moved = f.body if lr.moves_body else f
            return [update_at(c, tgt, lambda n: n.add(moved))]
        if rule == "pathprop":
            colour = diamond_of(f)
            if colour is None:
                raise RuleError("pathprop needs a diamond principal formula")
            _principal_at(c, src, f, None)
            if d.witness is None:
                raise RuleError("pathprop without a witness")
            if not walk_exists(propagation_graph(c), src, tgt, d.witness):
                raise RuleError("witness labels no walk between the nodes")
            if not cyk_membership(build_grammar(system.path_axioms, colour), d.witness):
                raise RuleError("inadmissible path label string")
            return [update_at(c, tgt, lambda n: n.add(f.body))]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, RuleError):
            raise
        raise RuleError(f"arity mismatch for {rule}: {exc}") from None
    raise RuleError(f"unknown deep rule {rule!r}")


def check_deep_step(d: Derivation, system: DeepSystem) -> None:
    expected = deep_premises(d, system)
    if len(expected) != len(d.prems):
        raise RuleError(f"arity mismatch: {d.rule} has {len(expected)} premises, got {len(d.prems)}")
    for n, (want, got) in enumerate(zip(expected, d.prems)):
        if want != got.seq:
            raise RuleError(f"premise {n} should be {{{want}}} but is {{{got.seq}}}")


def check_deep(d: Derivation, system: DeepSystem = DKT, allow_open: bool = False) -> None:
    """Verify every inference of ``d`` against ``system``; raise :class:`CheckError`."""
    stack = [(d, ())]
    while stack:
        node, where = stack.pop()
        if node.rule is None:
            if not allow_open:
                raise CheckError("open leaf in a closed derivation", where)
            continue
        try:
            check_deep_step(node, system)
        except RuleError as exc:
            raise CheckError(str(exc), where) from None
        for n, p in enumerate(node.prems):
            stack.append((p, where + (n,)))


def is_valid_deep(d: Derivation, system: DeepSystem = DKT) -> bool:
    try:
        check_deep(d, system)
    except CheckError:
        return False
    return True


# --- instance enumeration ---------------------------------------------------------------


@dataclass(frozen=True)
class DeepInstance:
    rule: str
    params: tuple
    premises: tuple[Sequent, ...]
    witness: tuple[Diamond, ...] | None = None

    def close(self, conclusion: Sequent, prems: Iterable[Derivation]) -> Derivation:
        return Derivation(conclusion, self.rule, self.params, tuple(prems), self.witness)


def _add_at(s: Sequent, addr: NodeAddress, f: Formula) -> Sequent:
    return update_at(s, addr, lambda n: n.add(f))


def deep_rule_instances(s: Sequent, system: DeepSystem = DKT) -> list[DeepInstance]:
    """Every non-redundant bottom-up instance, in a fixed order.

    Order: id, or, and, box/bbox, then propagations; within a rule kind,
    nodes breadth first and formulas by stored index.  An instance is
    redundant when its premise adds nothing new read as sets: both
    disjuncts present, either conjunct present, the box already realised, or
    the propagated formula already at the target.
    """
    nodes = list(iter_nodes(s))
    out: list[DeepInstance] = []
    rules = system.base_rules
    for addr, node in nodes:
        present = set(node.formulas)
        for f in node.formulas:
            if isinstance(f, Atom) and NegAtom(f.name) in present:
                out.append(DeepInstance("id", (addr, f), ()))
    for addr, node in nodes:
        present = set(node.formulas)
        for f in dict.fromkeys(node.formulas):
            if isinstance(f, Or) and not (f.left in present and f.right in present):
                premise = update_at(s, addr, lambda n: n.add(f.left, f.right))
                out.append(DeepInstance("or", (addr, f), (premise,)))
    for addr, node in nodes:
        present = set(node.formulas)
        for f in dict.fromkeys(node.formulas):
            if isinstance(f, And) and f.left not in present and f.right not in present:
                out.append(DeepInstance("and", (addr, f), (_add_at(s, addr, f.left), _add_at(s, addr, f.right))))
    for addr, node in nodes:
        for f in dict.fromkeys(node.formulas):
            if isinstance(f, (Box, BlackBox)):
                rule, pol = ("box", CIRCLE) if isinstance(f, Box) else ("bbox", BULLET)
                if rule not in rules:
                    continue
                if any(p is pol and f.body in c.formulas for p, c in node.children):
                    continue
                out.append(DeepInstance(rule, (addr, f),
                                        (update_at(s, addr, lambda n: n.add_child(pol, Sequent((f.body,)))),)))
    out.extend(_propagation_instances(s, nodes, system))
    return out


def _propagation_instances(s: Sequent, nodes, system: DeepSystem) -> list[DeepInstance]:
    out = []
    addrs = [a for a, _ in nodes]
    node_of = dict(nodes)
    if system.path_axioms is not None:
        for addr, node in nodes:
            for f in dict.fromkeys(node.formulas):
                colour = diamond_of(f)
                if colour is None or (system.modal_only and colour is B):
                    continue
                for tgt in addrs:
                    if f.body in node_of[tgt].formulas:
                        continue
                    witness = propagation_witness(s, addr, tgt, colour, system.path_axioms)
                    if witness is not None:
                        out.append(DeepInstance("pathprop", (addr, f, tgt), (_add_at(s, tgt, f.body),), witness))
    else:
        for rule, (colour, down) in _DIA_RULES.items():
            if rule not in system.base_rules:
                continue
            kind = Dia if colour is W else BlackDia
            for addr, node in nodes:
                for f in dict.fromkeys(node.formulas):
                    if not isinstance(f, kind):
                        continue
                    for tgt in _neighbours(s, addr):
                        if _edge_ok(s, addr, tgt, colour, down) and f.body not in node_of[tgt].formulas:
                            out.append(DeepInstance(rule, (addr, f, tgt), (_add_at(s, tgt, f.body),)))
    for name in sorted(system.locals):
        lr = LOCAL_RULES[name]
        for addr, node in nodes:
            for f in dict.fromkeys(node.formulas):
                if lr.principal is not None and diamond_of(f) is not lr.principal:
                    continue
                moved = f.body if lr.moves_body else f
                for tgt in addrs:
                    if moved in node_of[tgt].formulas or not lr.relation(s, addr, tgt):
                        continue
                    out.append(DeepInstance(f"local:{name}", (addr, f, tgt), (_add_at(s, tgt, moved),)))
    return out


def _neighbours(s: Sequent, addr: NodeAddress) -> list[NodeAddress]:
    out = [addr + (i,) for i in range(len(node_at(s, addr).children))]
    if addr:
        out.append(addr[:-1])
    return out


# --- derivation properties ---------------------------------------------------------------


def has_black(s: Sequent) -> bool:
    for _, node in iter_nodes(s):
        if any(p is BULLET for p, _ in node.children):
            return True
        if any(not is_black_free(f) for f in node.formulas):
            return True
    return False


def black_free_derivation(d: Derivation) -> bool:
    """No black connective, •-edge or black rule anywhere in ``d``."""
    black_rules = {"bbox", "bdia1", "bdia2"} | {f"local:{r}" for r in BLACK_LOCALS}
    for node in iter_derivation(d):
        if node.rule in black_rules or has_black(node.seq):
            return False
        if node.witness and any(w is B for w in node.witness):
            return False
    return True


def tree_growth_ok(d: Derivation) -> bool:
    """Each premise has the conclusion's tree shape, or that shape plus one new leaf."""
    from .path_engine import tree_shape

    for node in iter_derivation(d):
        for p in node.prems:
            a, b = tree_shape(node.seq), tree_shape(p.seq)
            if a != b and not _extends_by_leaf(a, b):
                return False
    return True


def _extends_by_leaf(small, big) -> bool:
    if len(big) == len(small) + 1 and big[:-1] == small and big[-1][1] == ():
        return True
    if len(big) != len(small):
        return False
    diffs = [n for n, (x, y) in enumerate(zip(small, big)) if x != y]
    if len(diffs) != 1:
        return False
    (px, sx), (py, sy) = small[diffs[0]], big[diffs[0]]
    return px == py and _extends_by_leaf(sx, sy)
