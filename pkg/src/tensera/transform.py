"""Proof rewrites: deep admissibility, the shallow/deep translations, cut elimination.

Deep rewrites share one engine, :func:`_replay`: it re-runs a derivation
step by step on a rewritten end-sequent, carrying a map from old node
addresses to new ones and recomputing each premise with the checker's own
premise function.  Because premises are recomputed, every output is
positionally stable: a premise keeps the conclusion's nodes at the same
addresses and only appends.

Cut elimination tracks ancestors of a cut formula by replacing the
occurrence with a :class:`sequent.Mark` and pushing marks upward through
the proof.  Filling the marks with a structure gives the substituted
proof; steps where a marked formula is principal are handed to the
reduction that matches the connective.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .calculus_deep import _DIA_RULES, DKT, DeepSystem, deep_premises
from .calculus_shallow import (
    RuleError,
    StructuralRule,
    as_system,
    check_shallow,
    ctr_down,
    cut,
    infer,
    instantiate,
    residuate_down,
    shallow_premises,
    validate_structural_rule,
    wk_down,
)
from .derivation import Derivation, chain, cut_rank, iter_derivation, open_leaf
from .formula import And, Atom, BlackBox, BlackDia, Box, Dia, Formula, NegAtom, Or, nnf_negate, size
from .sequent import (
    BULLET,
    CIRCLE,
    Mark,
    NodeAddress,
    Polarity,
    Sequent,
    addresses,
    display,
    display_address_map,
    merge,
    node_at,
    residuate_into,
    rotation_map,
    subtract,
    update_at,
)

AddressMap = Mapping[NodeAddress, NodeAddress]


# --- replay engine ------------------------------------------------------------------


def _iso(a: Sequent, b: Sequent) -> dict[NodeAddress, NodeAddress]:
    """Node correspondence between two canonically equal sequents."""
    out = {(): ()}
    stack = [((), a, (), b)]
    while stack:
        pa, x, pb, y = stack.pop()
        used: set[int] = set()
        for i, (p, c) in enumerate(x.children):
            for j, (q, e) in enumerate(y.children):
                if j not in used and p is q and c == e:
                    used.add(j)
                    out[pa + (i,)] = pb + (j,)
                    stack.append((pa + (i,), c, pb + (j,), e))
                    break
            else:
                raise ValueError("sequents are not equal")
    return out


def _dia_name(colour_rule: str, s: Sequent, src: NodeAddress, tgt: NodeAddress) -> str:
    base = colour_rule.rstrip("12")
    return base + ("1" if tgt[:-1] == src and len(tgt) == len(src) + 1 else "2")


def _map_params(rule: str, params: tuple, amap: AddressMap) -> tuple:
    if rule in ("id", "and", "or", "box", "bbox"):
        return (amap[params[0]],) + tuple(params[1:])
    src, f, tgt = params
    return (amap[src], f, amap[tgt])


def _replay(d: Derivation, target: Sequent, amap: AddressMap, system: DeepSystem) -> Derivation:
    """Re-run ``d`` with end-sequent ``target``; ``amap`` sends old nodes to new ones."""
    if d.rule is None:
        return open_leaf(target)
    params = _map_params(d.rule, d.params, amap)
    rule = d.rule
    if rule in _DIA_RULES:
        rule = _dia_name(rule, target, params[0], params[2])
    probe = Derivation(target, rule, params, (), d.witness)
    new_prems = deep_premises(probe, system)
    old_prems = deep_premises(d, system)
    born_old = born_new = None
    if rule in ("box", "bbox"):
        born_old = d.params[0] + (len(node_at(d.seq, d.params[0]).children),)
        born_new = params[0] + (len(node_at(target, params[0]).children),)
    out = []
    for actual, expected_old, expected_new in zip(d.prems, old_prems, new_prems):
        iso = _iso(actual.seq, expected_old)
        pmap = {a: born_new if e == born_old else amap[e] for a, e in iso.items()}
        out.append(_replay(actual, expected_new, pmap, system))
    return Derivation(target, rule, params, tuple(out), d.witness)


def _identity(s: Sequent) -> dict[NodeAddress, NodeAddress]:
    return {a: a for a in addresses(s)}


def normalize(d: Derivation, system: DeepSystem = DKT) -> Derivation:
    """Same proof, with every premise laid out as the checker computes it."""
    return _replay(d, d.seq, _identity(d.seq), system)


# --- deep admissibility -----------------------------------------------------------------


def admissible_weaken(d: Derivation, addr: NodeAddress, add: Sequent, system: DeepSystem = DKT) -> Derivation:
    """From a proof of Σ[Γ] build one of Σ[Γ, Δ] of the same height."""
    node_at(d.seq, addr)
    target = update_at(d.seq, addr, lambda n: merge(n, add))
    return _replay(d, target, _identity(d.seq), system)


def _child_of_polarity(s: Sequent, pol: Polarity) -> int:
    for i, (p, _) in enumerate(s.children):
        if p is pol:
            return i
    raise ValueError(f"end-sequent has no {pol.symbol}-child to residuate")


def admissible_residuate(d: Derivation, direction: str, child_index: int | None = None,
                         system: DeepSystem = DKT) -> Derivation:
    """rf turns a proof of Γ, ∘{Δ} into one of •{Γ}, Δ; rp does the mirror image.

    Propagations across the rotated edge swap between their down and up
    variants; everything else is re-addressed unchanged.
    """
    if direction not in ("rf", "rp"):
        raise ValueError(f"direction must be rf or rp, not {direction!r}")
    pol = CIRCLE if direction == "rf" else BULLET
    k = _child_of_polarity(d.seq, pol) if child_index is None else child_index
    if not 0 <= k < len(d.seq.children) or d.seq.children[k][0] is not pol:
        raise ValueError(f"{direction} needs a {pol.symbol}-child at index {k}")
    target = residuate_into(d.seq, k)[0]
    rot = rotation_map(d.seq, k)
    return _replay(d, target, {a: rot(a) for a in addresses(d.seq)}, system)


def _contract_formula(d: Derivation, addr: NodeAddress, f: Formula, system: DeepSystem) -> Derivation:
    node = node_at(d.seq, addr)
    if node.formulas.count(f) < 2:
        raise ValueError(f"node {addr} does not hold two copies of the formula")
    last = len(node.formulas) - 1 - node.formulas[::-1].index(f)
    target = update_at(d.seq, addr, lambda n: n.without_index(last))
    return _replay(d, target, _identity(d.seq), system)


def medial(d: Derivation, addr: NodeAddress, i: int, j: int, system: DeepSystem = DKT) -> Derivation:
    """Merge sibling children ``i`` and ``j`` (same polarity) of the node at ``addr``."""
    if i == j:
        raise ValueError("medial needs two distinct children")
    if i > j:
        i, j = j, i
    node = node_at(d.seq, addr)
    (pi, ci), (pj, cj) = node.children[i], node.children[j]
    if pi is not pj:
        raise ValueError("medial needs children of the same polarity")
    merged = merge(ci, cj)
    target = update_at(d.seq, addr, lambda n: n.replace_child(i, merged).without_child(j))
    n = len(addr)
    offset = len(ci.children)

    def move(a: NodeAddress) -> NodeAddress:
        if len(a) <= n or a[:n] != addr:
            return a
        k, rest = a[n], a[n + 1:]
        if k == j:
            return addr + (i,) + ((offset + rest[0],) + rest[1:] if rest else ())
        if k > j:
            return addr + (k - 1,) + rest
        return a

    return _replay(d, target, {a: move(a) for a in addresses(d.seq)}, system)


def admissible_contract(d: Derivation, addr: NodeAddress, dup: Sequent, system: DeepSystem = DKT) -> Derivation:
    """From a proof of Σ[Δ, Δ] build one of Σ[Δ]; height never grows.

    Formulas are contracted one copy at a time; duplicated children are
    first merged by a medial and then contracted inside.
    """
    node = node_at(d.seq, addr)
    once = subtract(node, dup)
    if once is None or subtract(once, dup) is None:
        raise ValueError("the node does not contain the structure twice")
    out = d
    for f in dup.formulas:
        out = _contract_formula(out, addr, f, system)
    for pol, child in dup.children:
        here = node_at(out.seq, addr)
        hits = [k for k, (p, c) in enumerate(here.children) if p is pol and c == child]
        i, j = hits[0], hits[1]
        out = medial(out, addr, i, j, system)
        out = admissible_contract(out, addr + (i,), child, system)
    return out


# --- shallow to deep ----------------------------------------------------------------


def translate_skt_to_dkt(d: Derivation) -> Derivation:
    """Fold a cut-free plain shallow proof into a deep proof of the same sequent."""
    for n in iter_derivation(d):
        if n.rule == "cut":
            raise ValueError("translate_skt_to_dkt needs a cut-free proof")
        if n.rule and n.rule.startswith("struct:"):
            raise ValueError("structural extensions are not supported by the deep translation")
        if n.rule is None:
            raise ValueError("open leaf in the shallow proof")
    return _s2d(d)


def _s2d(d: Derivation) -> Derivation:
    rule, params, c = d.rule, d.params, d.seq
    if rule == "id":
        return Derivation(c, "id", ((), params[0]))
    subs = [_s2d(p) for p in d.prems]
    if rule in ("and", "or", "box", "bbox"):
        f = params[0]
        prems = tuple(admissible_weaken(s, (), Sequent((f,))) for s in subs)
        return Derivation(c, rule, ((), f), prems)
    if rule in ("dia", "bdia"):
        f, delta = params
        pol = CIRCLE if rule == "dia" else BULLET
        k = c.child_index(pol, delta)
        prem = admissible_weaken(subs[0], (), Sequent((f,)))
        return Derivation(c, rule + "1", ((), f, (k,)), (prem,))
    if rule == "ctr":
        return admissible_contract(subs[0], (), params[0])
    if rule == "wk":
        return admissible_weaken(subs[0], (), params[0])
    if rule in ("rf", "rp"):
        gamma = params[0]
        outer = BULLET if rule == "rf" else CIRCLE
        delta = c.without_child(c.child_index(outer, gamma))
        inner = outer.flip()
        k = subs[0].seq.child_index(inner, delta)
        return admissible_residuate(subs[0], rule, k)
    raise ValueError(f"cannot translate rule {rule!r}")


# --- deep to shallow ----------------------------------------------------------------

_SHALLOW_NAME = {"and": "and", "or": "or", "box": "box", "bbox": "bbox",
                 "dia1": "dia", "dia2": "dia", "bdia1": "bdia", "bdia2": "bdia"}


def translate_dkt_to_skt(d: Derivation) -> Derivation:
    """Simulate each deep step by displaying its node, applying the shallow rule
    with a formula contraction for the retained principal, and displaying back."""
    return _d2s(normalize(d))


def _d2s(d: Derivation) -> Derivation:
    rule, params, c = d.rule, d.params, d.seq
    if rule is None:
        raise ValueError("open leaf in the deep proof")
    if rule not in _SHALLOW_NAME and rule != "id":
        raise ValueError(f"rule {rule!r} is outside the base deep calculus")
    node = params[0]
    shown, steps_out, _ = display(c, node)
    if rule == "id":
        return chain(steps_out, infer(shown, "id", (params[1],)))
    subs = []
    for p in d.prems:
        _, _, steps_back = display(p.seq, node)
        subs.append(chain(steps_back, _d2s(p)))
    f = params[1]
    if rule in ("dia1", "dia2", "bdia1", "bdia2"):
        tgt = display_address_map(c, node)(params[2])
        delta = shown.children[tgt[0]][1]
        step = infer(shown.add(f), _SHALLOW_NAME[rule], (f, delta), *subs)
    else:
        step = infer(shown.add(f), rule, (f,), *subs)
    return chain(steps_out, ctr_down(step, Sequent((f,))))


# --- marks ------------------------------------------------------------------------------

TAG = 1


def _has_mark(s: Sequent) -> bool:
    return any(isinstance(f, Mark) for f in s.formulas) or any(_has_mark(c) for _, c in s.children)


def _unmark(s: Sequent) -> Sequent:
    fs = tuple(f.formula if isinstance(f, Mark) else f for f in s.formulas)
    return Sequent(fs, tuple((p, _unmark(c)) for p, c in s.children))


def _fill(s: Sequent, filler: Sequent) -> Sequent:
    """Replace every mark by the structure ``filler``."""
    out = Sequent(tuple(f for f in s.formulas if not isinstance(f, Mark)),
                  tuple((p, _fill(c, filler)) for p, c in s.children))
    for f in s.formulas:
        if isinstance(f, Mark):
            out = merge(out, filler)
    return out


def _mark_one(s: Sequent, f: Formula) -> Sequent:
    i = s.index_of(f)
    if i is None:
        raise ValueError("formula to track is missing from the end-sequent")
    return s.without_index(i).add(Mark(f, TAG))


def _pick_formula(pool: list, f: Formula, prefer_marked: bool) -> int:
    order = (Mark(f, TAG), f) if prefer_marked else (f, Mark(f, TAG))
    for want in order:
        for i, g in enumerate(pool):
            if g == want:
                return i
    raise RuleError("parameter does not occur in the conclusion")


def _lift(sm: Sequent, delta: Sequent, prefer_marked: bool = False) -> Sequent:
    """A top-level part of ``sm`` that reads as ``delta`` once marks are removed."""
    pool = list(sm.formulas)
    fs = []
    for f in delta.formulas:
        fs.append(pool.pop(_pick_formula(pool, f, prefer_marked)))
    kids = list(sm.children)
    chosen = []
    for pol, c in delta.children:
        hits = [k for k, (p, x) in enumerate(kids) if p is pol and _unmark(x) == c]
        if not hits:
            raise RuleError("parameter does not occur in the conclusion")
        hits.sort(key=lambda k: _has_mark(kids[k][1]) != prefer_marked)
        chosen.append(kids.pop(hits[0]))
    return Sequent(tuple(fs), tuple(chosen))


def _lift_child(sm: Sequent, pol: Polarity, content: Sequent) -> Sequent:
    for p, c in sm.children:
        if p is pol and _unmark(c) == content:
            return c
    raise RuleError("child parameter does not occur in the conclusion")


def _lift_bindings(rule: StructuralRule, sm: Sequent, bindings: Mapping[str, Sequent]) -> dict[str, Sequent]:
    out: dict[str, Sequent] = {}

    def match(p, node: Sequent) -> None:
        rest = node
        for pol, pc in p.children:
            want = instantiate(pc, bindings)
            for k, (q, c) in enumerate(rest.children):
                if q is pol and _unmark(c) == want:
                    rest = rest.without_child(k)
                    match(pc, c)
                    break
            else:
                raise RuleError("structural pattern does not match the marked conclusion")
        for v in p.vars:
            part = _lift(rest, bindings[v])
            rest = subtract(rest, part)
            out[v] = part

    match(rule.conclusion, sm)
    return out


# --- substitution ---------------------------------------------------------------------

Principal = Callable[[Derivation, Sequent, tuple, list], Derivation]
_LOGICAL = {"and", "or", "box", "bbox", "dia", "bdia"}


def _substitute(pi: Derivation, sm: Sequent, filler: Sequent, on_principal: Principal,
                system: Mapping[str, StructuralRule]) -> Derivation:
    """A proof of ``sm`` with marks filled by ``filler``, following ``pi``.

    ``on_principal(pi, rest, lifted, subs)`` builds the step where a marked
    occurrence is principal: ``rest`` is the marked conclusion without it,
    ``lifted`` the marked parameters and ``subs`` the substituted premises.
    """
    if not _has_mark(sm):
        return pi
    rule, params = pi.rule, pi.params
    if rule is None:
        raise ValueError("open leaf in a proof under cut elimination")

    def recurse(prem_marked):
        return [_substitute(p, m, filler, on_principal, system) for p, m in zip(pi.prems, prem_marked)]

    if rule == "id":
        a = params[0]
        a = Atom(a.name) if isinstance(a, NegAtom) else a
        if a in sm.formulas and NegAtom(a.name) in sm.formulas:
            return Derivation(_fill(sm, filler), "id", (a,))
        for f in (a, NegAtom(a.name)):
            if f not in sm.formulas:
                return on_principal(pi, sm.remove(Mark(f, TAG)), (f,), [])
    if rule in _LOGICAL:
        f = params[0]
        marked = f not in sm.formulas
        base = sm.without_index(sm.index_of(Mark(f, TAG))).add(f) if marked else sm
        lifted: tuple = (f,)
        if rule in ("dia", "bdia"):
            pol = CIRCLE if rule == "dia" else BULLET
            lifted = (f, _lift_child(base, pol, params[1]))
        subs = recurse(shallow_premises(rule, lifted, base, system))
        if marked:
            return on_principal(pi, base.remove(f), lifted, subs)
        filled = lifted[:1] + tuple(_fill(x, filler) for x in lifted[1:])
        return Derivation(_fill(sm, filler), rule, filled, tuple(subs))
    if rule == "cut":
        a = params[0]
        gamma = subtract(pi.prems[0].seq, Sequent((a,)))
        gm = _lift(sm, gamma)
        dm = subtract(sm, gm)
        subs = recurse([gm.add(a), dm.add(nnf_negate(a))])
        return Derivation(_fill(sm, filler), "cut", (a,), tuple(subs))
    if rule in ("ctr", "wk"):
        part = _lift(sm, params[0], prefer_marked=(rule == "wk"))
    elif rule in ("rf", "rp"):
        part = _lift_child(sm, BULLET if rule == "rf" else CIRCLE, params[0])
    elif rule.startswith("struct:"):
        r = system[rule[len("struct:"):]]
        part = _lift_bindings(r, sm, params[0])
        subs = recurse(shallow_premises(rule, (part,), sm, system))
        filled_b = {v: _fill(b, filler) for v, b in part.items()}
        return Derivation(_fill(sm, filler), rule, (filled_b,), tuple(subs))
    else:
        raise ValueError(f"unknown rule {rule!r}")
    subs = recurse(shallow_premises(rule, (part,), sm, system))
    return Derivation(_fill(sm, filler), rule, (_fill(part, filler),), tuple(subs))


# --- reductions -------------------------------------------------------------------


def medial_down(d: Derivation, i: int, j: int) -> Derivation:
    """Merge two same-polarity root children with rf, rp, wk and ctr only."""
    s = d.seq
    (pol, d1), (pol2, d2) = s.children[i], s.children[j]
    if pol is not pol2 or i == j:
        raise RuleError("medial needs two distinct children of the same polarity")
    step = residuate_down(d, j)                      # Δ2, ⋆'{Γ, ⋆{Δ1}}
    step = wk_down(step, d1)                         # Δ1, Δ2, ⋆'{Γ, ⋆{Δ1}}
    step = residuate_down(step, len(d2.children))    # Γ, ⋆{Δ1}, ⋆{Δ2, Δ1}
    k = i if i < j else i - 1
    step = residuate_down(step, k)                   # ⋆'{Γ, ⋆{Δ2, Δ1}}, Δ1
    step = wk_down(step, d2)                         # ⋆'{...}, Δ1, Δ2
    step = residuate_down(step, len(d1.children))    # Γ, ⋆{Δ2, Δ1}, ⋆{Δ1, Δ2}
    return ctr_down(step, Sequent(children=((pol, merge(d1, d2)),)))


def _two_children(s: Sequent, pol: Polarity, a: Sequent, b: Sequent) -> tuple[int, int]:
    i = s.child_index(pol, a)
    for j, (p, c) in enumerate(s.children):
        if j != i and p is pol and c == b:
            return i, j
    raise RuleError("expected children are missing")


def _merge_and_rotate(c: Derivation, pol: Polarity, left: Sequent, right: Sequent) -> Derivation:
    i, j = _two_children(c.seq, pol, left, right)
    m = medial_down(c, i, j)
    return residuate_down(m, m.seq.child_index(pol, merge(left, right)))


def _diamond_of_pol(pol: Polarity, body: Formula) -> Formula:
    return Dia(body) if pol is CIRCLE else BlackDia(body)


def _box_of_pol(pol: Polarity, body: Formula) -> Formula:
    return Box(body) if pol is CIRCLE else BlackBox(body)


class _Reducer:
    def __init__(self, system: Mapping[str, StructuralRule]):
        self.system = system

    def subst(self, pi: Derivation, tracked: Formula, filler: Sequent, handler: Principal) -> Derivation:
        return _substitute(pi, _mark_one(pi.seq, tracked), filler, handler, self.system)

    # Π1 proves Γ, a; marks on ā in Π2 become Γ.
    def atomic(self, a: Formula, pi1: Derivation, pi2: Derivation) -> Derivation:
        gamma = subtract(pi1.seq, Sequent((a,)))

        def at_id(pi, rest, lifted, subs):
            return wk_down(pi1, subtract(_fill(rest, gamma), Sequent((a,))))

        return self.subst(pi2, nnf_negate(a), gamma, at_id)

    # Π1 proves Δ, ⋆{A}; marks on the matching diamond of ¬A in Π2 become Δ.
    def diamond(self, pi1: Derivation, k: int, pi2: Derivation) -> Derivation:
        pol, child = pi1.seq.children[k]
        (a,) = child.formulas
        delta = pi1.seq.without_child(k)
        neg = nnf_negate(a)

        def at_dia(pi, rest, lifted, subs):
            _, gm = lifted
            gamma_prime = _fill(gm, delta)
            sigma = _fill(subtract(rest, Sequent(children=((pol, gm),))), delta)
            sub = subs[0]
            r1 = residuate_down(sub, sub.seq.child_index(pol, gamma_prime.add(neg)))
            r2 = residuate_down(pi1, k)
            return _merge_and_rotate(cut(a, r2, r1), pol.flip(), delta, sigma)

        return self.subst(pi2, _diamond_of_pol(pol, neg), delta, at_dia)

    # Π1 proves Δ, ⋆{Δ', A}; marks on the matching box of ¬A in Π2 become Δ, ⋆{Δ'}.
    def box(self, pi1: Derivation, k: int, a: Formula, pi2: Derivation) -> Derivation:
        pol, child = pi1.seq.children[k]
        delta = pi1.seq.without_child(k)
        delta_prime = child.remove(a)
        filler = delta.add_child(pol, delta_prime)
        neg = nnf_negate(a)

        def at_box(pi, rest, lifted, subs):
            sigma = _fill(rest, filler)
            sub = subs[0]
            r1 = residuate_down(sub, sub.seq.child_index(pol, Sequent((neg,))))
            r2 = residuate_down(pi1, k)
            return _merge_and_rotate(cut(a, r2, r1), pol.flip(), delta, sigma)

        return self.subst(pi2, _box_of_pol(pol, neg), filler, at_box)

    # Π1 proves Δ, A and Π2 proves Δ, B; marks on ¬A ∨ ¬B in Π become Δ.
    def disjunction(self, a: Formula, b: Formula, pi1: Derivation, pi2: Derivation, pi: Derivation) -> Derivation:
        delta = subtract(pi1.seq, Sequent((a,)))

        def at_or(p, rest, lifted, subs):
            c1 = cut(b, pi2, subs[0])
            return ctr_down(cut(a, pi1, c1), delta)

        return self.subst(pi, _or_of(a, b), delta, at_or)

    # Π1 proves Δ, A, B; marks on ¬A ∧ ¬B in Π become Δ.
    def conjunction(self, a: Formula, b: Formula, pi1: Derivation, pi: Derivation) -> Derivation:
        delta = subtract(pi1.seq, Sequent((a, b)))

        def at_and(p, rest, lifted, subs):
            sigma = _fill(rest, delta)
            c1 = cut(a, pi1, subs[0])
            return ctr_down(cut(b, c1, subs[1]), sigma)

        return self.subst(pi, _and_of(a, b), delta, at_and)

    # Ψ1 proves Γ, ¬C; marks on C in Ψ2 become Γ.
    def principal(self, c: Formula, psi1: Derivation, psi2: Derivation) -> Derivation:
        gamma = subtract(psi1.seq, Sequent((nnf_negate(c),)))

        def at_c(pi, rest, lifted, subs):
            rule = pi.rule
            if rule in ("box", "bbox"):
                pol = CIRCLE if rule == "box" else BULLET
                sub = subs[0]
                return self.diamond(sub, sub.seq.child_index(pol, Sequent((c.body,))), psi1)
            if rule in ("dia", "bdia"):
                pol = CIRCLE if rule == "dia" else BULLET
                sub = subs[0]
                k = sub.seq.child_index(pol, _fill(lifted[1], gamma).add(c.body))
                return self.box(sub, k, c.body, psi1)
            if rule == "and":
                return self.disjunction(c.left, c.right, subs[0], subs[1], psi1)
            if rule == "or":
                return self.conjunction(c.left, c.right, subs[0], psi1)
            raise RuleError(f"unexpected principal rule {rule} for a non-atomic cut formula")

        return self.subst(psi2, c, gamma, at_c)

    def reduce(self, a: Formula, left: Derivation, right: Derivation) -> Derivation:
        if isinstance(a, (Atom, NegAtom)):
            return self.atomic(a, left, right)
        return self.principal(a, right, left)


def _or_of(a: Formula, b: Formula) -> Formula:
    return Or(nnf_negate(a), nnf_negate(b))


def _and_of(a: Formula, b: Formula) -> Formula:
    return And(nnf_negate(a), nnf_negate(b))


@dataclass(frozen=True)
class CutStep:
    """One topmost cut and the proof that replaced it."""

    formula: Formula
    rank: int
    before: Derivation
    after: Derivation


def _has_cut(d: Derivation) -> bool:
    return any(n.rule == "cut" for n in iter_derivation(d))


def eliminate_cuts(d: Derivation, system=None, trace: list[CutStep] | None = None) -> Derivation:
    """Cut-free proof of the same end-sequent in the shallow calculus plus ``system``.

    Topmost cuts are removed first, leftmost first.  Each reduction only
    introduces cuts on strictly smaller formulas.
    """
    rules = as_system(system)
    for r in rules.values():
        validate_structural_rule(r)
    check_shallow(d, rules, allow_cut=True)
    reducer = _Reducer(rules)
    out = _eliminate(d, reducer, trace)
    check_shallow(out, rules, allow_cut=False)
    if out.seq != d.seq:
        raise AssertionError("cut elimination changed the end-sequent")
    return out


def _eliminate(d: Derivation, reducer: _Reducer, trace) -> Derivation:
    if not _has_cut(d):
        return d
    prems = tuple(_eliminate(p, reducer, trace) for p in d.prems)
    if d.rule != "cut":
        return Derivation(d.seq, d.rule, d.params, prems, d.witness)
    a = d.params[0]
    reduced = reducer.reduce(a, prems[0], prems[1])
    if cut_rank(reduced) >= size(a):
        raise AssertionError("a reduction failed to lower the cut rank")
    if trace is not None:
        trace.append(CutStep(a, size(a), Derivation(d.seq, "cut", d.params, prems), reduced))
    return _eliminate(reduced, reducer, trace)
