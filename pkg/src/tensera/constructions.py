"""Hand-assembled shallow derivations.

A deep step is simulated in the shallow calculus by displaying the node,
applying the root rule there and rotating back.  Everything here builds
proofs top-down (leaves first) and checks each inference as it goes.
"""

from __future__ import annotations

from typing import Callable

from .calculus_shallow import (
    RULE_4,
    RULE_T,
    RULE_U,
    AxiomRule,
    axiom_leaf,
    box_down,
    cut,
    ctr_down,
    dia_down,
    id_leaf,
    infer,
    make_sl_rule,
    primitive_axiom,
    rf_down,
    rp_down,
    scott_lemmon_axiom,
    struct_down,
    wk_down,
)
from .derivation import Derivation, chain
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
    make_diamond,
    nnf_negate,
)
from .prover import Proved, prove_dkt
from .sequent import (
    BULLET,
    CIRCLE,
    EMPTY,
    NodeAddress,
    Polarity,
    Sequent,
    display,
    display_address_map,
    subtract,
)
from .transform import translate_dkt_to_skt

WHITE, BLACK = Diamond.WHITE, Diamond.BLACK

RootStep = Callable[[Derivation, "int | None"], Derivation]


# --- generic pieces ------------------------------------------------------------------


def identity(f: Formula) -> Derivation:
    """Cut-free proof of ``f, ~f``."""
    nf = nnf_negate(f)
    s = Sequent((f, nf))
    match f:
        case Atom(name) | NegAtom(name):
            return id_leaf(s, name)
        case And(l, r):
            inner = Sequent((f, nnf_negate(l), nnf_negate(r)))
            left = wk_down(identity(l), Sequent((nnf_negate(r),)))
            right = wk_down(identity(r), Sequent((nnf_negate(l),)))
            return infer(s, "or", (nf,), infer(inner, "and", (f,), left, right))
        case Or():
            return _swap(identity(nf), s)
        case Box(b) | BlackBox(b):
            pol = CIRCLE if isinstance(f, Box) else BULLET
            colour = WHITE if pol is CIRCLE else BLACK
            lifted = prove_at(Sequent(children=((pol, Sequent((b, nnf_negate(b)))),)), (0,), identity(b))
            d = dia_down(lifted, 0, nnf_negate(b), colour)
            return box_down(d, 0)
        case Dia() | BlackDia():
            return _swap(identity(nf), s)
    raise TypeError(f"not a formula: {f!r}")


def _swap(d: Derivation, s: Sequent) -> Derivation:
    # same multiset, possibly listed in the other order
    if d.seq != s:
        raise AssertionError("identity proof has the wrong end-sequent")
    return Derivation(s, d.rule, d.params, d.prems, d.witness)


def prove_at(s: Sequent, addr: NodeAddress, fragment: Derivation) -> Derivation:
    """Proof of ``s`` from a proof of a sub-sequent of the node at ``addr``.

    The rest of the displayed sequent is weakened in, then rotated back.
    """
    shown, steps_out, _ = display(s, addr)
    rest = subtract(shown, fragment.seq)
    if rest is None:
        raise ValueError(f"{{{fragment.seq}}} is not part of the node at {addr}")
    return chain(steps_out, wk_down(fragment, rest))


def at_node(d: Derivation, addr: NodeAddress, step: RootStep) -> Derivation:
    """Apply ``step`` to the node at ``addr`` of ``d``'s end-sequent.

    ``step`` receives a proof with that node displayed and the index of the
    child holding the old root (None at the root).  It may rewrite the
    root's formulas, rewrite children in place, or drop one child.
    """
    if not addr:
        return step(d, None)
    shown, _, steps_back = display(d.seq, addr)
    top = chain(steps_back, d)
    old_root = display_address_map(d.seq, addr)(())
    parent = old_root[0]
    new = step(top, parent)
    before, after = top.seq.children, new.seq.children
    if len(after) == len(before) - 1:
        gone = next((n for n in range(len(after)) if after[n][0] is not before[n][0] or after[n][1] != before[n][1]),
                    len(after))
        if gone == parent:
            raise ValueError("a deep step may not remove the path back to the root")
        if gone < parent:
            parent -= 1
    elif len(after) != len(before):
        raise ValueError("a deep step may drop at most one child")
    _, _, back = display(new.seq, (parent,) + old_root[1:])
    out = chain(back, new)
    # rotating back moves the path children last; restore the old order
    return Derivation(_align(out.seq, d.seq), out.rule, out.params, out.prems, out.witness)


def _align(new: Sequent, old: Sequent) -> Sequent:
    """``new`` with its children listed in the order of the matching children of ``old``."""
    pool = list(new.children)
    matched = []
    for pol, c in old.children:
        hit = next((n for n, (p, x) in enumerate(pool) if p is pol and x == c), None)
        matched.append(pool.pop(hit) if hit is not None else None)
    kids = []
    for (pol, c), m in zip(old.children, matched):
        if m is not None:
            kids.append(m)
            continue
        take = next((n for n, (p, _) in enumerate(pool) if p is pol), None)
        if take is None:
            continue
        p, x = pool.pop(take)
        kids.append((p, _align(x, c)))
    return Sequent(new.formulas, tuple(kids) + tuple(pool))


def deep_box(d: Derivation, addr: NodeAddress, child: int = 0) -> Derivation:
    return at_node(d, addr, lambda t, _p: box_down(t, child))


def deep_dia(d: Derivation, addr: NodeAddress, child: int, body: Formula, colour: Diamond) -> Derivation:
    """Diamond step moving ``body`` out of a child of the node at ``addr``."""
    return at_node(d, addr, lambda t, _p: dia_down(t, child, body, colour))


def deep_dia_up(d: Derivation, addr: NodeAddress, body: Formula) -> Derivation:
    """Diamond step at ``addr`` taking ``body`` from the parent node."""

    def step(t, parent):
        pol = t.seq.children[parent][0]
        return dia_down(t, parent, body, WHITE if pol is CIRCLE else BLACK)

    return at_node(d, addr, step)


def nested(pols, inner: Sequent) -> Sequent:
    """``inner`` wrapped in the given structural connectives, outermost first."""
    out = inner
    for pol in reversed(list(pols)):
        out = Sequent(children=((pol, out),))
    return out


def _colour(pol: Polarity) -> Diamond:
    return WHITE if pol is CIRCLE else BLACK


def climb(d: Derivation, pols, body: Formula) -> Derivation:
    """Pull ``body`` from the bottom of a child-0 chain up to the root.

    Each step wraps it in the diamond matching the edge it crosses.
    """
    pols = list(pols)
    for m in range(len(pols) - 1, -1, -1):
        d = deep_dia(d, (0,) * m, 0, body, _colour(pols[m]))
        body = make_diamond(_colour(pols[m]), body)
    return d


def box_chain(d: Derivation, length: int) -> Derivation:
    """Turn a child-0 chain of single-formula nodes into box formulas."""
    for m in range(length - 1, -1, -1):
        d = deep_box(d, (0,) * m, 0)
    return d


def boxes(pols, body: Formula) -> Formula:
    for pol in reversed(list(pols)):
        body = Box(body) if pol is CIRCLE else BlackBox(body)
    return body


def diamonds(pols, body: Formula) -> Formula:
    for pol in reversed(list(pols)):
        body = make_diamond(_colour(pol), body)
    return body


def reach(pols, body: Formula) -> Derivation:
    """Cut-free proof of ``⟨pols⟩~body, pols{body}``: the diamond word reaches the node."""
    inner = Sequent((body, nnf_negate(body)))
    d = prove_at(nested(pols, inner), (0,) * len(pols), identity(body))
    return climb(d, pols, nnf_negate(body))


def cut_free_proof(s: Sequent | Formula) -> Derivation:
    """Shallow proof obtained from the deep prover."""
    outcome = prove_dkt(s)
    if not isinstance(outcome, Proved):
        raise ValueError(f"not a theorem of the base logic: {s}")
    return translate_dkt_to_skt(outcome.derivation)


def disjunction(fs) -> Formula:
    fs = list(fs)
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def close_or(d: Derivation, f: Formula) -> Derivation:
    """Fold the top-level formulas of ``f``'s disjuncts into ``f`` with or steps."""
    if not isinstance(f, Or):
        return d
    parts = _disjuncts(f)
    rest = d.seq
    for p in parts:
        rest = subtract(rest, Sequent((p,)))
        if rest is None:
            raise ValueError("the disjuncts are not all present")
    return _fold_or(d, f, rest)


def _disjuncts(f: Formula) -> list[Formula]:
    if isinstance(f, Or):
        return [f.left] + _disjuncts(f.right)
    return [f]


def _fold_or(d: Derivation, f: Formula, rest: Sequent) -> Derivation:
    if not isinstance(f, Or):
        return d
    d = _fold_or(d, f.right, rest.add(f.left))
    return infer(rest.add(f), "or", (f,), d)


# --- the tense axioms ---------------------------------------------------------------


def tense_axiom_residuation(a: Formula = Atom("a")) -> Derivation:
    """``~A ∨ □◆A`` via id, rf, ◆, rp, □, ∨."""
    na = nnf_negate(a)
    top = Sequent((na, a), ((CIRCLE, EMPTY),))
    d = id_leaf(top, a.name) if isinstance(a, Atom) else wk_down(identity(a), Sequent(children=((CIRCLE, EMPTY),)))
    d = rf_down(d, 0)
    d = dia_down(d, 0, a, BLACK)
    d = rp_down(d, 0)
    d = box_down(d, 0)
    return close_or(d, Or(na, Box(BlackDia(a))))


def tense_axiom_distribution(a: Formula = Atom("a"), b: Formula = Atom("b")) -> Derivation:
    """``◇(A ∧ ~B) ∨ ◇~A ∨ □B``, the negation normal form of the K axiom."""
    na, nb = nnf_negate(a), nnf_negate(b)
    conj = And(a, nb)
    hole = ((BULLET, EMPTY),)
    left = wk_down(identity(a), Sequent((b,), hole))
    right = wk_down(identity(b), Sequent((na,), hole))
    d = infer(Sequent((conj, na, b), hole), "and", (conj,), left, right)
    d = rp_down(d, 0)
    d = dia_down(d, 0, conj, WHITE)
    d = dia_down(d, 0, na, WHITE)
    d = box_down(d, 0)
    return close_or(d, disjunction([Dia(conj), Dia(na), Box(b)]))


# --- Scott-Lemmon axioms and their structural rules ------------------------------------


def _pols(white: int, black: int, white_first: bool = True) -> list[Polarity]:
    if white_first:
        return [CIRCLE] * white + [BULLET] * black
    return [BULLET] * black + [CIRCLE] * white


def primitive_from_scott_lemmon(h: int, i: int, j: int, k: int, a: Formula = Atom("a")) -> tuple[Derivation, AxiomRule]:
    """Derive the primitive axiom P(h,i,j,k) from G(h,i,j,k) using cuts.

    End-sequent: ``■ʰ□ʲ~A, ◇ⁱ◆ᵏA``.
    """
    na = nnf_negate(a)
    g = scott_lemmon_axiom(h, i, j, k)
    to_leaf = [CIRCLE] * j
    # right branch: ∘ʲ{~A}, ◇ʲ□ᵏ◆ᵏA
    top = nested(to_leaf, Sequent((na, a), ((CIRCLE, nested([CIRCLE] * (k - 1), EMPTY)),) if k else ()))
    d = prove_at(top, (0,) * j, identity(a))
    body = a
    for m in range(1, k + 1):
        d = deep_dia_up(d, (0,) * (j + m), body)
        body = BlackDia(body)
    d = box_chain_from(d, (0,) * j, k)
    d = climb(d, to_leaf, boxes([CIRCLE] * k, body))
    x = boxes([BULLET] * k, na)
    cut_formula = boxes([CIRCLE] * j, diamonds([CIRCLE] * k, x))
    d = cut(cut_formula, axiom_leaf(g, x), d)
    y = diamonds([CIRCLE] * i, diamonds([BULLET] * k, a))
    if h:
        d = cut(boxes([CIRCLE] * h, y), d, reach([CIRCLE] * h, y))
        for m in range(h, 0, -1):
            idx = d.seq.child_index(CIRCLE, nested([CIRCLE] * (m - 1), Sequent((y,))))
            d = rf_down(d, idx)
    d = box_chain(d, h + j)
    return d, g


def box_chain_from(d: Derivation, addr: NodeAddress, length: int) -> Derivation:
    """:func:`box_chain` for the child-0 chain hanging below ``addr``."""
    for m in range(length - 1, -1, -1):
        d = deep_box(d, addr + (0,) * m, 0)
    return d


def axiom_from_sl_rule(h: int, i: int, j: int, k: int, a: Formula = Atom("a")) -> Derivation:
    """Derive P(h,i,j,k) with the structural rule sl(h,i,j,k) and no cut."""
    na = nnf_negate(a)
    rule = make_sl_rule(h, i, j, k)
    pols = _pols(i, k)
    d = prove_at(nested(pols, Sequent((na, a))), (0,) * (i + k), identity(a))
    d = climb(d, pols, a)
    gamma = Sequent((diamonds(pols, a),))
    d = struct_down(d, rule, {"Γ": gamma, "Δ": Sequent((na,))})
    return box_chain(d, h + j)


def sl_rule_from_axiom(h: int, i: int, j: int, k: int, a: Formula = Atom("a")) -> tuple[Derivation, AxiomRule]:
    """The sl(h,i,j,k) inference simulated with the axiom P(h,i,j,k) and cuts.

    Closed instance with ``Γ = ◇ⁱ◆ᵏ~A`` and ``Δ = A``: from a proof of
    ``Γ, ∘ⁱ{•ᵏ{A}}`` to ``Γ, •ʰ{∘ʲ{A}}``.
    """
    ax = primitive_axiom(h, i, j, k)
    return _through_axiom(h, i, j, k, a, axiom_leaf(ax, nnf_negate(a))), ax


def sl_rule_simulation(h: int, i: int, j: int, k: int, a: Formula = Atom("a")) -> Derivation:
    """:func:`sl_rule_from_axiom` with the axiom leaf replaced by its sl(h,i,j,k) proof.

    The result lives in the structural extension and still contains the cuts.
    """
    return _through_axiom(h, i, j, k, a, axiom_from_sl_rule(h, i, j, k, nnf_negate(a)))


def _through_axiom(h: int, i: int, j: int, k: int, a: Formula, leaf: Derivation) -> Derivation:
    na = nnf_negate(a)
    pols = _pols(i, k)
    d = box_chain(reach(pols, a), i + k)
    d = cut(diamonds(pols, na), leaf, d)
    conc = [BULLET] * h + [CIRCLE] * j
    if conc:
        d = cut(boxes(conc, a), d, reach(conc, a))
    return d


# --- reflexivity and transitivity in tense form --------------------------------------------


def _past_box_premise(a: Formula) -> Derivation:
    """``◆~A, •{A}``."""
    na = nnf_negate(a)
    d = prove_at(Sequent(children=((BULLET, Sequent((a, na))),)), (0,), identity(a))
    return dia_down(d, 0, na, BLACK)


def tense_reflexivity(a: Formula = Atom("a")) -> Derivation:
    """``■A → A`` through the residuated form of T_f: rp then T_f."""
    na = nnf_negate(a)
    d = rp_down(_past_box_premise(a), 0)
    d = struct_down(d, RULE_T, {"Γ": Sequent((a,)), "Δ": Sequent((BlackDia(na),))})
    return close_or(d, Or(BlackDia(na), a))


def tense_transitivity(a: Formula = Atom("a")) -> Derivation:
    """``■A → ■■A`` through the residuated form of 4_f: rp, 4_f, rf, rf."""
    na = nnf_negate(a)
    d = rp_down(_past_box_premise(a), 0)
    d = struct_down(d, RULE_4, {"Γ": Sequent((a,)), "Δ": Sequent((BlackDia(na),))})
    d = rf_down(d, 0)
    d = rf_down(d, d.seq.child_index(CIRCLE, Sequent((BlackDia(na),))))
    d = box_chain(d, 2)
    return close_or(d, Or(BlackDia(na), BlackBox(BlackBox(a))))


# --- uniqueness -------------------------------------------------------------------------------


def u1_at_root(d: Derivation, bullet: int, circle: int, a: Formula) -> Derivation:
    """Remove ``A`` from ``•{Γ, ∘{A, Δ}}`` when ``A`` sits at the root.

    Uses the rule U on ``A, ~A``, a cut on ``■□~A`` and a contraction.
    """
    na = nnf_negate(a)
    d = deep_dia(d, (bullet,), circle, a, WHITE)
    d = dia_down(d, bullet, Dia(a), BLACK)
    left = struct_down(identity(a), RULE_U, {"Γ": Sequent((a,)), "Δ": Sequent((na,))})
    left = box_chain(left, 2)
    d = cut(BlackBox(Box(na)), left, d)
    return ctr_down(d, Sequent((a,)))


def u2_at_root(d: Derivation, holder: int, target: int, a: Formula) -> Derivation:
    """Remove ``A`` from ∘-child ``target`` when ∘-child ``holder`` contains it."""
    d = rf_down(d, holder)
    bullet = len(d.seq.children) - 1
    inner = target if target < holder else target - 1
    d = u1_at_root(d, bullet, inner, a)
    return rp_down(d, bullet)


def uniqueness_via_u1(a: Formula = Atom("a")) -> Derivation:
    """``A ∨ ■□~A`` (that is ``◆◇A → A``) with u1 simulated at the root."""
    na = nnf_negate(a)
    s = Sequent((a,), ((BULLET, Sequent(children=((CIRCLE, Sequent((a, na))),))),))
    d = prove_at(s, (0, 0), identity(a))
    d = u1_at_root(d, 0, 0, a)
    d = box_chain(d, 2)
    return close_or(d, Or(a, BlackBox(Box(na))))


def uniqueness_via_u1_nested(a: Formula = Atom("a")) -> Derivation:
    """u1 simulated inside ``~b, ∘{b, A, •{c, ∘{A, ~A}}}``: display, apply, display back."""
    na = nnf_negate(a)
    b, c = Atom("b"), Atom("c")
    inner = Sequent((c,), ((CIRCLE, Sequent((a, na))),))
    s = Sequent((NegAtom("b"),), ((CIRCLE, Sequent((b, a), ((BULLET, inner),))),))
    d = prove_at(s, (0, 0, 0), identity(a))
    return at_node(d, (0,), lambda t, _p: u1_at_root(t, 0, 0, a))


def uniqueness_via_u2(a: Formula = Atom("a")) -> Derivation:
    """``□A ∨ □~A`` (``◇A → □A``) with u2 simulated at the root."""
    na = nnf_negate(a)
    s = Sequent(children=((CIRCLE, Sequent((a,))), (CIRCLE, Sequent((a, na)))))
    d = prove_at(s, (1,), identity(a))
    d = u2_at_root(d, 0, 1, a)
    d = box_down(d, 0)
    d = box_down(d, 0)
    return close_or(d, Or(Box(a), Box(na)))


# --- the residuated cut pattern ------------------------------------------------------------


def residuated_cut(a1: Formula, a2: Formula, extra_left: Sequent = EMPTY, extra_right: Sequent = EMPTY) -> Derivation:
    """A cut on ``A1 ∧ A2`` between a proof ending in rp and one ending in rf.

    Left: ``∘{Γ}, A1∧A2`` with the conjunction introduced under ``∘{Γ'}``;
    right: ``~(A1∧A2), •{Δ}`` with the disjunction introduced under ``•{Δ'}``.
    """
    n1, n2 = nnf_negate(a1), nnf_negate(a2)
    gamma0 = Sequent((BlackDia(n1), BlackDia(n2)))

    def left_part(ai: Formula, other: Formula) -> Derivation:
        d = dia_down(_past_box_premise_of(ai), 0, nnf_negate(ai), BLACK)
        d = wk_down(d, Sequent((BlackDia(nnf_negate(other)),)))
        return rp_down(d, 0)

    conj = And(a1, a2)
    pi1 = infer(Sequent((conj,), ((CIRCLE, gamma0),)), "and", (conj,), left_part(a1, a2), left_part(a2, a1))
    pi1 = rf_down(pi1, 0)
    pi1 = wk_down(pi1, extra_left)
    left = rp_down(pi1, pi1.seq.child_index(BULLET, Sequent((conj,))))

    delta0 = And(Dia(a1), Dia(a2))

    def right_part(ai: Formula) -> Derivation:
        d = prove_at(Sequent(children=((CIRCLE, Sequent((n1, n2, ai))),)), (0,), identity(ai))
        return dia_down(d, 0, ai, WHITE)

    disj = Or(n1, n2)
    d = infer(Sequent((delta0,), ((CIRCLE, Sequent((n1, n2))),)), "and", (delta0,), right_part(a1), right_part(a2))
    d = rf_down(d, 0)
    d = infer(Sequent((disj,), ((BULLET, Sequent((delta0,))),)), "or", (disj,), d)
    d = rp_down(d, 0)
    d = wk_down(d, extra_right)
    right = rf_down(d, d.seq.child_index(CIRCLE, Sequent((disj,))))
    return cut(conj, left, right)


def _past_box_premise_of(a: Formula) -> Derivation:
    """``•{A, ~A}``."""
    return prove_at(Sequent(children=((BULLET, Sequent((a, nnf_negate(a)))),)), (0,), identity(a))


# --- a suite of proofs with cuts --------------------------------------------------------


_PATTERN_PAIRS = (
    ("a", "b"), ("a", "~b"), ("[]a", "b"), ("<>a", "[*]b"),
    ("a | b", "c"), ("<*>a", "<>b"), ("a & b", "[]c"), ("[](a | b)", "<*>~a"),
)
_IDENTITY_CUTS = ("a", "~a", "a & b", "a | ~b", "[]a", "<*>b", "[*](a | <>b)", "<>[]a & <*>~b")
_THEOREM_SIDES = ("b", "<>c")
_EXTRA_THEOREMS = ("a | ~a", "[](a & b) -> []a")
_SL_INSTANCES = ((0, 1, 2, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 0, 1, 1), (1, 1, 1, 1), (1, 2, 1, 0), (2, 1, 0, 1))
_NESTED = ("a", "[]a", "a & <*>b", "<>a | b", "[*]<>a", "a | b | c", "<>(a & b)")


def cut_suite() -> list[tuple[str, Derivation, list]]:
    """Fifty proofs with explicit cuts: ``(name, proof, structural rules)``."""
    from .corpus import KT_AXIOMS
    from .formula import parse

    out: list[tuple[str, Derivation, list]] = []
    for a1, a2 in _PATTERN_PAIRS:
        d = residuated_cut(parse(a1), parse(a2), Sequent((Atom("p"),)), Sequent((NegAtom("q"),)))
        out.append((f"residuated cut on ({a1}) & ({a2})", d, []))
    for text in _IDENTITY_CUTS:
        f = parse(text)
        out.append((f"identity cut on {text}", cut(f, identity(f), identity(f)), []))
    for text in KT_AXIOMS + _EXTRA_THEOREMS:
        t = parse(text)
        for side in _THEOREM_SIDES[: 2 if text in KT_AXIOMS else 1]:
            h = parse(side)
            right = cut_free_proof(Sequent((nnf_negate(t), Or(t, h))))
            out.append((f"theorem cut on {text} with {side}", cut(t, cut_free_proof(t), right), []))
    for hijk in _SL_INSTANCES:
        for a in ("a", "[]b"):
            d = sl_rule_simulation(*hijk, parse(a))
            out.append((f"sl{hijk} simulated through its axiom, A = {a}", d, [make_sl_rule(*hijk)]))
    for fn in (uniqueness_via_u1, uniqueness_via_u1_nested, uniqueness_via_u2):
        out.append((fn.__name__.replace("_", " "), fn(), [RULE_U]))
    for n, text in enumerate(_NESTED):
        f = parse(text)
        d = cut(f, identity(f), identity(f))
        for _ in range(1 + n % 3):
            d = cut(f, d, identity(f))
        out.append((f"stacked cuts on {text}", d, []))
    return out


def displayed_derivations() -> list[tuple[str, Derivation, list[str], bool]]:
    """The displayed derivations as ``(name, proof, rule names, cut allowed)``.

    Rule names are those accepted by ``resolve_structural_rule`` and, with
    an ``ax:`` prefix, ``resolve_axiom_rule``.
    """
    out: list[tuple[str, Derivation, list[str], bool]] = [
        ("tense_axiom_residuation", tense_axiom_residuation(), [], False),
        ("tense_axiom_distribution", tense_axiom_distribution(), [], False),
    ]
    for hijk in _SL_INSTANCES:
        tag = "".join(map(str, hijk))
        d, g = primitive_from_scott_lemmon(*hijk)
        out.append((f"primitive_from_scott_lemmon_{tag}", d, [f"ax:{g.name}"], True))
        out.append((f"axiom_from_sl_rule_{tag}", axiom_from_sl_rule(*hijk), [make_sl_rule(*hijk).name], False))
        d, p = sl_rule_from_axiom(*hijk)
        out.append((f"sl_rule_from_axiom_{tag}", d, [f"ax:{p.name}"], True))
    out += [
        ("tense_reflexivity_residuated", tense_reflexivity(), [RULE_T.name], False),
        ("tense_transitivity_residuated", tense_transitivity(), [RULE_4.name], False),
        ("uniqueness_u1_root", uniqueness_via_u1(), [RULE_U.name], True),
        ("uniqueness_u1_nested", uniqueness_via_u1_nested(), [RULE_U.name], True),
        ("uniqueness_u2", uniqueness_via_u2(), [RULE_U.name], True),
    ]
    return out
