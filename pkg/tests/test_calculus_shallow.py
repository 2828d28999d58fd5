import json

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES
from strategies import sequents
from tensera import derivation as deriv
from tensera.calculus_shallow import (
    DELTA,
    GAMMA,
    RULE_4,
    RULE_T,
    RULE_U,
    CheckError,
    InvalidRule,
    Pattern,
    StructuralRule,
    check_shallow,
    id_leaf,
    infer,
    instantiate,
    make_path_rule,
    make_sl_rule,
    occurrence_map,
    primitive_of_scott_lemmon,
    resolve_axiom_rule,
    resolve_structural_rule,
    scott_lemmon_axiom,
    validate_structural_rule,
)
from tensera.constructions import tense_axiom_distribution, tense_axiom_residuation
from tensera.derivation import Derivation
from tensera.formula import Atom, Diamond, parse
from tensera.path_engine import PathAxiom, parse_axiom
from tensera.sequent import BULLET, CIRCLE, iter_nodes, parse_sequent, seq

W, B = Diamond.WHITE, Diamond.BLACK
FIXTURE_FILES = sorted((FIXTURES / "derivations").glob("*.json"))


def pattern(*vars, children=()):
    return Pattern(tuple(vars), tuple(children))


def load_fixture(path):
    obj = json.loads(path.read_text(encoding="utf-8"))
    system = {}
    for name in obj["system"]:
        r = resolve_axiom_rule(name[3:]) if name.startswith("ax:") else resolve_structural_rule(name)
        system[r.name] = r
    return obj, deriv.from_json(obj["proof"]), system


def test_first_tense_axiom_derivation_checks():
    a = Atom("a")
    d = tense_axiom_residuation(a)
    assert d.seq == seq(parse("~a | []<*>a"))
    check_shallow(d)
    assert {n.rule for n in deriv.iter_derivation(d)} == {"or", "box", "rp", "bdia", "rf", "id"}


def test_distribution_derivation_checks():
    d = tense_axiom_distribution(Atom("a"), Atom("b"))
    check_shallow(d)
    assert d.seq == seq(parse("<>(a & ~b) | (<>~a | []b)"))


def test_id_without_clash_is_rejected():
    bad = Derivation(seq("a", "b"), "id", (Atom("a"),))
    with pytest.raises(CheckError, match="no atomic clash"):
        check_shallow(bad)


def test_wrong_premise_is_reported_with_location():
    bad_leaf = Derivation(seq("a", "c"), "id", (Atom("a"),))
    mid = Derivation(seq(parse("a | c")), "or", (parse("a | c"),), (bad_leaf,))
    with pytest.raises(CheckError) as info:
        check_shallow(mid)
    assert info.value.where == (0,)
    skipped = Derivation(seq(parse("a | c"), "~a"), "or", (parse("a | c"),), (id_leaf(seq("a", "~a"), "a"),))
    with pytest.raises(CheckError, match="premise"):
        check_shallow(skipped)


def test_cut_needs_permission():
    left = id_leaf(seq("a", "~a"), "a")
    right = id_leaf(seq("a", "~a"), "a")
    d = infer(seq("a", "~a"), "cut", (Atom("a"),), left, right)
    check_shallow(d, allow_cut=True)
    with pytest.raises(CheckError, match="cut"):
        check_shallow(d)


def test_sl_rule_for_transitivity():
    r = make_sl_rule(0, 1, 2, 0)
    assert r.premise == pattern(GAMMA, children=[(CIRCLE, pattern(DELTA))])
    assert r.conclusion == pattern(GAMMA, children=[(CIRCLE, pattern(children=[(CIRCLE, pattern(DELTA))]))])
    assert (r.premise, r.conclusion) == (RULE_4.premise, RULE_4.conclusion)


def test_sl_rule_identity_case():
    r = make_sl_rule(0, 0, 0, 0)
    assert r.premise == r.conclusion == pattern(GAMMA, DELTA)


def test_sl_rule_for_uniqueness():
    r = make_sl_rule(1, 0, 1, 0)
    assert r.premise == pattern(GAMMA, DELTA)
    assert r.conclusion == pattern(GAMMA, children=[(BULLET, pattern(children=[(CIRCLE, pattern(DELTA))]))])
    assert (r.premise, r.conclusion) == (RULE_U.premise, RULE_U.conclusion)


def test_path_rules():
    r = make_path_rule(parse_axiom("wbw->w"))
    assert r.premise == pattern(GAMMA, children=[(CIRCLE, pattern(DELTA))])
    inner = pattern(children=[(BULLET, pattern(children=[(CIRCLE, pattern(DELTA))]))])
    assert r.conclusion == pattern(GAMMA, children=[(CIRCLE, inner)])
    four = make_path_rule(parse_axiom("ww->w"))
    assert (four.premise, four.conclusion) == (RULE_4.premise, RULE_4.conclusion)
    t = make_path_rule(parse_axiom("->w"))
    assert t.premise == pattern(GAMMA, children=[(CIRCLE, pattern(DELTA))])
    assert t.conclusion == pattern(GAMMA, DELTA)
    assert (t.premise, t.conclusion) == (RULE_T.premise, RULE_T.conclusion)


def test_path_and_sl_rules_agree_on_reflexivity():
    sl = make_sl_rule(0, 1, 0, 0)
    path = make_path_rule(PathAxiom((), W))
    assert (sl.premise, sl.conclusion) == (path.premise, path.conclusion)


def test_validation_examples():
    validate_structural_rule(make_sl_rule(1, 1, 1, 1))
    context_sensitive = StructuralRule(
        "bad", pattern(GAMMA, DELTA, children=[(BULLET, pattern(DELTA))]),
        pattern(GAMMA, DELTA, children=[(CIRCLE, pattern(DELTA))]))
    with pytest.raises(InvalidRule, match="variable Δ occurs twice"):
        validate_structural_rule(context_sensitive)
    lossy = StructuralRule("lossy", pattern(GAMMA, DELTA), pattern(GAMMA))
    with pytest.raises(InvalidRule, match="variable lost"):
        validate_structural_rule(lossy)


def test_primitive_forms():
    four = primitive_of_scott_lemmon(0, 1, 2, 0)
    assert four.is_path_axiom and four.as_path_axiom() == parse_axiom("ww->w")
    assert primitive_of_scott_lemmon(1, 0, 0, 1).as_path_axiom() == parse_axiom("b->b")
    sym = primitive_of_scott_lemmon(0, 0, 1, 1)
    assert sym.as_path_axiom() == parse_axiom("w->b")
    assert str(sym) == "◇X→◆X"
    assert not primitive_of_scott_lemmon(1, 1, 1, 1).is_path_axiom
    with pytest.raises(ValueError):
        primitive_of_scott_lemmon(0, 0, 0, 0).as_path_axiom()


def test_axiom_rule_instance():
    g = scott_lemmon_axiom(0, 1, 2, 0)
    assert g.instance(Atom("a")) == seq(parse("<>~a"), parse("[][]a"))
    assert resolve_axiom_rule("G(0,1,2,0)") == g
    with pytest.raises(ValueError):
        resolve_axiom_rule("H(1,2)")


def test_resolve_structural_rule_names():
    assert resolve_structural_rule("4_f") == RULE_4
    assert resolve_structural_rule("sl(0,1,2,0)").premise == RULE_4.premise
    assert resolve_structural_rule("path(wbw->w)").conclusion == make_path_rule(parse_axiom("wbw->w")).conclusion
    with pytest.raises(ValueError):
        resolve_structural_rule("nonsense")


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=lambda p: p.stem)
def test_fixture_checks_in_its_system(path):
    obj, d, system = load_fixture(path)
    check_shallow(d, system, allow_cut=obj["allow_cut"])
    assert str(d.seq) == obj["end_sequent"] or d.seq == parse_sequent(obj["end_sequent"])


def test_fixture_corpus_is_complete():
    assert len(FIXTURE_FILES) == 28


sl_params = st.tuples(*[st.integers(0, 3)] * 4)
axioms = st.builds(PathAxiom, st.lists(st.sampled_from((W, B)), max_size=4).map(tuple), st.sampled_from((W, B)))


@given(sl_params)
def test_sl_rules_are_valid(hijk):
    validate_structural_rule(make_sl_rule(*hijk))


@given(axioms)
def test_path_rules_are_valid(ax):
    validate_structural_rule(make_path_rule(ax))


@given(sl_params, sequents, sequents)
def test_occurrence_map_is_a_bijection(hijk, gamma, delta):
    r = make_sl_rule(*hijk)
    bindings = {GAMMA: gamma, DELTA: delta}
    m = occurrence_map(r, bindings)
    prem, conc = instantiate(r.premise, bindings), instantiate(r.conclusion, bindings)

    def occ(s):
        return {(a, i) for a, node in iter_nodes(s) for i in range(len(node.formulas))}

    assert {(o.node, o.index) for o in m} == occ(prem)
    assert {(o.node, o.index) for o in m.values()} == occ(conc)
    for src, dst in m.items():
        from tensera.sequent import node_at

        assert node_at(prem, src.node).formulas[src.index] == node_at(conc, dst.node).formulas[dst.index]
