import pytest
from hypothesis import given

from strategies import formulas
from tensera.calculus_deep import DKT, check_deep
from tensera.calculus_shallow import (
    check_shallow,
    ctr_down,
    id_leaf,
    infer,
    make_sl_rule,
    resolve_axiom_rule,
    wk_down,
)
from tensera.constructions import (
    box_chain,
    cut_suite,
    residuated_cut,
    sl_rule_simulation,
    tense_axiom_residuation,
)
from tensera.derivation import height, inventory, iter_derivation
from tensera.formula import And, Atom, parse
from tensera.prover import Proved, prove_dkt
from tensera.sequent import BULLET, CIRCLE, Sequent, parse_sequent, seq
from tensera.transform import (
    admissible_contract,
    admissible_residuate,
    admissible_weaken,
    eliminate_cuts,
    normalize,
    translate_dkt_to_skt,
    translate_skt_to_dkt,
)

a = Atom("a")
SHALLOW_ONLY = {"ctr", "wk", "rp", "rf", "cut"}


def deep_proof(text):
    outcome = prove_dkt(parse_sequent(text))
    assert isinstance(outcome, Proved)
    return outcome.derivation


def test_weaken_an_id_leaf():
    d = deep_proof("a, ~a")
    out = admissible_weaken(d, (), seq("b"))
    check_deep(out)
    assert out.seq == seq("a", "~a", "b") and height(out) == height(d) == 1


def test_weaken_with_a_subtree():
    d = deep_proof("<>~a, o{a}")
    add = parse_sequent("o{b, b{c}}")
    out = admissible_weaken(d, (0,), add)
    check_deep(out)
    assert out.seq == parse_sequent("<>~a, o{a, o{b, b{c}}}")
    assert height(out) == height(d)


def test_weaken_then_contract_restores_the_sequent():
    d = deep_proof("[]a -> []a")
    extra = parse_sequent("b, o{c}")
    out = admissible_contract(admissible_weaken(admissible_weaken(d, (), extra), (), extra), (), extra)
    check_deep(out)
    assert out.seq == d.seq.add(*extra.formulas).add_child(CIRCLE, seq("c"))


def test_residuation_switches_the_propagation_rule():
    d = deep_proof("b, <*>a, b{~a}")
    assert d.rule == "bdia1"
    out = admissible_residuate(d, "rp")
    check_deep(out)
    assert out.seq == parse_sequent("~a, o{b, <*>a}")
    assert out.rule == "bdia2"
    assert height(out) == height(d)


def test_residuation_without_boundary_steps():
    d = deep_proof("a, ~a, o{b}")
    out = admissible_residuate(d, "rf")
    assert out.seq == parse_sequent("b, b{a, ~a}")
    assert [n.rule for n in iter_derivation(out)] == [n.rule for n in iter_derivation(d)]


def test_residuation_round_trip():
    d = deep_proof("<>~a, o{a, b{c}}")
    there = admissible_residuate(d, "rf")
    assert there.seq == parse_sequent("a, b{c}, b{<>~a}")
    back = admissible_residuate(there, "rp", child_index=there.seq.children.index((BULLET, seq(parse("<>~a")))))
    check_deep(back)
    assert back.seq == d.seq and height(back) == height(d)


def test_residuation_needs_the_right_child():
    with pytest.raises(ValueError):
        admissible_residuate(deep_proof("a, ~a"), "rf")
    with pytest.raises(ValueError):
        admissible_residuate(deep_proof("a, ~a"), "sideways")


def test_contract_a_formula():
    d = deep_proof("[]a, [](a | b) -> [](a | b)")
    dup = seq(parse("[]a"))
    out = admissible_contract(admissible_weaken(d, (), dup), (), dup)
    check_deep(out)
    assert out.seq == d.seq and height(out) <= height(d)


def test_contract_a_child_through_a_medial():
    d = deep_proof("<>~a, o{a}, o{a}")
    out = admissible_contract(d, (), Sequent((), ((CIRCLE, seq("a")),)))
    check_deep(out)
    assert out.seq == parse_sequent("<>~a, o{a}") and height(out) <= height(d)


def test_contract_a_two_level_tree():
    d = deep_proof("<>c, o{b{a, ~a}}, o{b{a, ~a}}")
    out = admissible_contract(d, (), parse_sequent("o{b{a, ~a}}"))
    check_deep(out)
    assert out.seq == parse_sequent("<>c, o{b{a, ~a}}")


def test_contract_needs_two_copies():
    with pytest.raises(ValueError):
        admissible_contract(deep_proof("a, ~a"), (), seq("a"))


def test_shallow_to_deep_on_the_tense_axiom():
    d = tense_axiom_residuation(a)
    out = translate_skt_to_dkt(d)
    check_deep(out)
    assert out.seq == d.seq
    assert not set(inventory(out)) & SHALLOW_ONLY


def test_shallow_to_deep_id_only():
    out = translate_skt_to_dkt(id_leaf(seq("a", "~a"), "a"))
    assert [n.rule for n in iter_derivation(out)] == ["id"]


def test_shallow_to_deep_drops_contraction():
    base = translate_dkt_to_skt(deep_proof("<>~a, o{a}"))
    child = parse_sequent("o{a}")
    d = ctr_down(wk_down(base, child), child)
    check_shallow(d)
    out = translate_skt_to_dkt(d)
    check_deep(out)
    assert out.seq == d.seq
    assert "ctr" not in inventory(out)


def test_shallow_to_deep_rejects_cuts():
    left = id_leaf(seq("a", "~a"), "a")
    with pytest.raises(ValueError):
        translate_skt_to_dkt(infer(seq("a", "~a"), "cut", (a,), left, left))


def test_deep_to_shallow_of_a_nested_diamond_step():
    d = deep_proof("b, o{<>~a, o{a}}")
    assert d.rule == "dia1" and d.params[0] == (0,)
    out = translate_dkt_to_skt(d)
    check_shallow(out)
    # display the child, apply the diamond with a contraction, rotate back
    assert [n.rule for n in iter_derivation(out)][:4] == ["rp", "ctr", "dia", "rf"]


def test_deep_to_shallow_of_a_root_conjunction():
    d = deep_proof("a & b, ~a, ~b")
    out = translate_dkt_to_skt(d)
    check_shallow(out)
    assert out.rule == "ctr" and out.prems[0].rule == "and"


def test_deep_to_shallow_prover_output():
    d = prove_dkt(parse("a -> []<*>a")).derivation
    out = translate_dkt_to_skt(d)
    check_shallow(out, allow_cut=False)
    assert out.seq == d.seq


def test_id_against_id_cut():
    left = id_leaf(seq("a", "~a", "b"), "a")
    right = id_leaf(seq("a", "~a"), "a")
    d = infer(seq("a", "b", "~a"), "cut", (a,), left, right)
    out = eliminate_cuts(d)
    assert "cut" not in inventory(out) and out.seq == d.seq


def test_residuated_conjunction_cut_is_reduced():
    d = residuated_cut(Atom("a1"), Atom("a2"))
    trace = []
    out = eliminate_cuts(d, trace=trace)
    assert trace[0].formula == And(Atom("a1"), Atom("a2"))
    # the first reduction leaves only cuts on the two conjuncts
    cuts = [n.params[0] for n in iter_derivation(trace[0].after) if n.rule == "cut"]
    assert cuts and all(f in (Atom("a1"), Atom("a2"), parse("~a1"), parse("~a2")) for f in cuts)
    assert "cut" not in inventory(out)
    check_shallow(out)


def test_transitivity_axiom_through_its_rule_simulation():
    sl = make_sl_rule(0, 1, 2, 0)
    d = box_chain(sl_rule_simulation(0, 1, 2, 0, a), 2)
    assert d.seq == resolve_axiom_rule("G(0,1,2,0)").instance(a)
    out = eliminate_cuts(d, [sl])
    check_shallow(out, [sl])
    assert "cut" not in inventory(out)


def test_axiomatic_systems_are_refused():
    with pytest.raises(Exception):
        eliminate_cuts(id_leaf(seq("a", "~a"), "a"), [resolve_axiom_rule("G(0,1,2,0)")])


def test_cut_suite_size():
    assert len(cut_suite()) == 50


@given(formulas)
def test_round_trip_preserves_provability(f):
    outcome = prove_dkt(f)
    if not isinstance(outcome, Proved):
        return
    shallow = translate_dkt_to_skt(outcome.derivation)
    check_shallow(shallow)
    assert "cut" not in inventory(shallow)
    back = translate_skt_to_dkt(shallow)
    check_deep(back)
    assert back.seq == outcome.derivation.seq
    assert not set(inventory(back)) & SHALLOW_ONLY


@given(formulas)
def test_normalize_is_checked(f):
    outcome = prove_dkt(f)
    if isinstance(outcome, Proved):
        out = normalize(outcome.derivation, DKT)
        check_deep(out)
        assert height(out) == height(outcome.derivation)


@given(formulas)
def test_weakening_keeps_height(f):
    outcome = prove_dkt(f)
    if isinstance(outcome, Proved):
        out = admissible_weaken(outcome.derivation, (), parse_sequent("c, b{~c}"))
        check_deep(out)
        assert height(out) == height(outcome.derivation)
