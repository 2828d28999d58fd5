"""Proof search over deep sequents.

:func:`prove_dkt` follows the saturation strategy for the base deep
calculus: close with id anywhere, else saturate a node, else realise a
box, else propagate a diamond, else give up with the stuck sequent.
Nodes are scanned breadth first and formulas by stored index, so the same
input always produces the same proof object.

:func:`prove_extension` runs the same loop over
:func:`calculus_deep.deep_rule_instances` for systems with local or
path-based propagation, with a cap on tree depth.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .calculus_deep import DKT, DeepInstance, DeepSystem, check_deep, deep_rule_instances
from .derivation import Derivation
from .formula import And, Atom, BlackBox, BlackDia, Box, Dia, Formula, NegAtom, Or, degree
from .sequent import (
    BULLET,
    CIRCLE,
    NodeAddress,
    Sequent,
    depth,
    iter_nodes,
    node_at,
    seq,
    subformula_set,
    update_at,
)


class TerminationBoundExceeded(AssertionError):
    """A search exceeded one of the termination bounds it is meant to respect."""


@dataclass(frozen=True)
class SearchStats:
    steps: int = 0
    max_depth: int = 0
    max_saturation_moves: int = 0
    max_propagation_moves: int = 0
    sf_size: int = 0
    depth_bound: int = 0


@dataclass(frozen=True)
class Proved:
    derivation: Derivation
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass(frozen=True)
class Refuted:
    stuck: Sequent
    stats: SearchStats = field(default_factory=SearchStats)


@dataclass(frozen=True)
class Unknown:
    reason: str
    stats: SearchStats = field(default_factory=SearchStats)


Outcome = Proved | Refuted | Unknown


# --- node status ---------------------------------------------------------------------


@dataclass(frozen=True)
class NodeStatus:
    saturated: bool
    unrealised: tuple[Formula, ...]
    # (rule kind, principal, node holding it, node that lacks the body)
    unpropagated: tuple[tuple[str, Formula, NodeAddress, NodeAddress], ...]

    @property
    def complete(self) -> bool:
        return self.saturated and not self.unrealised and not self.unpropagated


def is_saturated(formulas) -> bool:
    present = set(formulas)
    for f in present:
        if isinstance(f, Or) and (f.left not in present or f.right not in present):
            return False
        if isinstance(f, And) and f.left not in present and f.right not in present:
            return False
        if isinstance(f, Atom) and NegAtom(f.name) in present:
            return False
    return True


def node_status(s: Sequent, addr: NodeAddress) -> NodeStatus:
    node = node_at(s, addr)
    present = set(node.formulas)
    unrealised = []
    for f in dict.fromkeys(node.formulas):
        if isinstance(f, (Box, BlackBox)):
            pol = CIRCLE if isinstance(f, Box) else BULLET
            if not any(p is pol and f.body in c.formulas for p, c in node.children):
                unrealised.append(f)
    return NodeStatus(is_saturated(present), tuple(unrealised), tuple(_unpropagated(s, addr)))


def _unpropagated(s: Sequent, addr: NodeAddress):
    """Failures of the four propagation clauses at ``addr``, in clause order."""
    node = node_at(s, addr)
    kids = [(addr + (i,), p, c) for i, (p, c) in enumerate(node.children)]
    formulas = list(dict.fromkeys(node.formulas))
    for f in formulas:
        if isinstance(f, Dia):
            for caddr, p, c in kids:
                if p is CIRCLE and f.body not in c.formulas:
                    yield "dia1", f, addr, caddr
    for f in formulas:
        if isinstance(f, BlackDia):
            for caddr, p, c in kids:
                if p is BULLET and f.body not in c.formulas:
                    yield "bdia1", f, addr, caddr
    for caddr, p, c in kids:
        if p is BULLET:
            for f in dict.fromkeys(c.formulas):
                if isinstance(f, Dia) and f.body not in node.formulas:
                    yield "dia2", f, caddr, addr
    for caddr, p, c in kids:
        if p is CIRCLE:
            for f in dict.fromkeys(c.formulas):
                if isinstance(f, BlackDia) and f.body not in node.formulas:
                    yield "bdia2", f, caddr, addr


# --- the base strategy ----------------------------------------------------------------


def _add(s: Sequent, addr: NodeAddress, *fs: Formula) -> Sequent:
    return update_at(s, addr, lambda n: n.add(*fs))


def _id_instance(nodes) -> DeepInstance | None:
    for addr, node in nodes:
        present = set(node.formulas)
        for f in node.formulas:
            if isinstance(f, Atom) and NegAtom(f.name) in present:
                return DeepInstance("id", (addr, f), ())
    return None


def _saturation_instance(s: Sequent, nodes) -> DeepInstance | None:
    for addr, node in nodes:
        present = set(node.formulas)
        for f in node.formulas:
            if isinstance(f, Or) and (f.left not in present or f.right not in present):
                return DeepInstance("or", (addr, f), (_add(s, addr, f.left, f.right),))
            if isinstance(f, And) and f.left not in present and f.right not in present:
                return DeepInstance("and", (addr, f), (_add(s, addr, f.left), _add(s, addr, f.right)))
    return None


def _realise_instance(s: Sequent, addr: NodeAddress, f: Formula) -> DeepInstance:
    rule, pol = ("box", CIRCLE) if isinstance(f, Box) else ("bbox", BULLET)
    premise = update_at(s, addr, lambda n: n.add_child(pol, Sequent((f.body,))))
    return DeepInstance(rule, (addr, f), (premise,))


def base_strategy_choice(s: Sequent) -> DeepInstance | None:
    nodes = list(iter_nodes(s))
    inst = _id_instance(nodes) or _saturation_instance(s, nodes)
    if inst:
        return inst
    for addr, _ in nodes:
        status = node_status(s, addr)
        if status.unrealised:
            return _realise_instance(s, addr, status.unrealised[0])
    for addr, _ in nodes:
        for kind, f, src, tgt in _unpropagated(s, addr):
            return DeepInstance(kind, (src, f, tgt), (_add(s, tgt, f.body),))
    return None


# --- search engine ------------------------------------------------------------------


@dataclass
class _Budget:
    sf_size: int
    depth_limit: int
    enforce: bool  # raise on breach (base strategy) or cap silently (extensions)
    saturation: Counter = field(default_factory=Counter)
    propagation: Counter = field(default_factory=Counter)
    steps: int = 0
    max_depth: int = 0
    capped: bool = False

    def fork(self) -> "_Budget":
        return _Budget(self.sf_size, self.depth_limit, self.enforce, Counter(self.saturation),
                       Counter(self.propagation), self.steps, self.max_depth, self.capped)

    def stats(self) -> SearchStats:
        return SearchStats(
            steps=self.steps,
            max_depth=self.max_depth,
            max_saturation_moves=max(self.saturation.values(), default=0),
            max_propagation_moves=max(self.propagation.values(), default=0),
            sf_size=self.sf_size,
            depth_bound=self.depth_limit,
        )

    def absorb(self, other: "_Budget") -> None:
        self.steps = other.steps
        self.max_depth = max(self.max_depth, other.max_depth)
        for counter, theirs in ((self.saturation, other.saturation), (self.propagation, other.propagation)):
            for k, v in theirs.items():
                counter[k] = max(counter[k], v)

    def record(self, inst: DeepInstance) -> None:
        self.steps += 1
        if inst.rule in ("and", "or"):
            addr = inst.params[0]
            self.saturation[addr] += 1
            if self.enforce and self.saturation[addr] > self.sf_size:
                raise TerminationBoundExceeded(f"more than {self.sf_size} saturation moves at {addr}")
        elif len(inst.params) == 3:
            tgt = inst.params[2]
            self.propagation[tgt] += 1
            if self.enforce and self.propagation[tgt] > self.sf_size:
                raise TerminationBoundExceeded(f"more than {self.sf_size} propagation moves into {tgt}")
        if inst.premises:
            d = depth(inst.premises[0])
            self.max_depth = max(self.max_depth, d)
            if self.enforce and d > self.depth_limit:
                raise TerminationBoundExceeded(f"tree depth {d} exceeds the bound {self.depth_limit}")


Chooser = Callable[[Sequent, "_Budget"], "DeepInstance | None"]


def _search(s: Sequent, choose: Chooser, budget: _Budget):
    """Returns (derivation or None, stuck sequent or None, capped flag).

    Move counters are per branch: each premise of a branching rule starts
    from a copy of the counts that led to it.
    """
    trail: list[tuple[Sequent, DeepInstance]] = []
    current = s
    while True:
        inst = choose(current, budget)
        if inst is None:
            return None, current, budget.capped
        budget.record(inst)
        if inst.rule == "id":
            top = inst.close(current, ())
            break
        if len(inst.premises) == 2:
            closed = []
            for premise in inst.premises:
                branch = budget.fork()
                branch.capped = False
                sub, stuck, capped = _search(premise, choose, branch)
                budget.absorb(branch)
                if sub is None:
                    return None, stuck, capped
                closed.append(sub)
            top = inst.close(current, closed)
            break
        trail.append((current, inst))
        current = inst.premises[0]
    for conclusion, inst in reversed(trail):
        top = inst.close(conclusion, (top,))
    return top, None, budget.capped


def _max_degree(s: Sequent) -> int:
    return max((degree(f) for f in subformula_set(s)), default=0)


def prove_dkt(s: Sequent | Formula) -> Proved | Refuted:
    """Decide derivability in the base deep calculus."""
    if not isinstance(s, Sequent):
        s = seq(s)
    budget = _Budget(len(subformula_set(s)), depth(s) + _max_degree(s), enforce=True)
    d, stuck, _ = _search(s, lambda s, _budget: base_strategy_choice(s), budget)
    if d is None:
        return Refuted(stuck, budget.stats())
    check_deep(d, DKT)
    return Proved(d, budget.stats())


def _extension_choice(system: DeepSystem, depth_bound: int) -> Chooser:
    def choose(s: Sequent, budget: _Budget) -> DeepInstance | None:
        nodes = list(iter_nodes(s))
        inst = _id_instance(nodes) or _saturation_instance(s, nodes)
        if inst:
            return inst
        instances = deep_rule_instances(s, system)
        for inst in instances:
            if len(inst.params) == 3:
                return inst
        for inst in instances:
            if inst.rule in ("box", "bbox"):
                if len(inst.params[0]) + 1 > depth_bound:
                    budget.capped = True
                    continue
                return inst
        return None

    return choose


def prove_extension(s: Sequent | Formula, system: DeepSystem, depth_bound: int = 3) -> Outcome:
    """Bounded search in an extended deep system.

    Proofs found are re-checked against ``system``.  When the search gets
    stuck after the depth cap blocked some box, the outcome is Unknown.
    """
    if depth_bound < 1:
        raise ValueError("depth_bound must be at least 1")
    if not isinstance(s, Sequent):
        s = seq(s)
    budget = _Budget(len(subformula_set(s)), depth_bound, enforce=False)
    d, stuck, capped = _search(s, _extension_choice(system, depth_bound), budget)
    if d is not None:
        check_deep(d, system)
        return Proved(d, budget.stats())
    if capped:
        return Unknown(f"depth bound {depth_bound} reached", budget.stats())
    return Refuted(stuck, budget.stats())


def outcome_name(o: Outcome) -> str:
    return type(o).__name__
