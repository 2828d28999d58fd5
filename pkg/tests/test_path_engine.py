import itertools
import re

import pytest
from hypothesis import given, strategies as st

from strategies import sequents
from tensera.formula import Diamond
from tensera.path_engine import (
    EUCLID_AXIOMS,
    S4_AXIOMS,
    S5_AXIOMS,
    TRANSITIVE_AXIOMS,
    Grammar,
    PathAxiom,
    bounded_closure,
    build_grammar,
    compose_axioms,
    cyk_membership,
    find_walk,
    identity_axioms,
    invert_axiom,
    parse_axiom,
    parse_axioms,
    parse_word,
    propagation_applicable,
    propagation_witness,
    walk_ends,
    word_text,
)
from tensera.sequent import addresses, parse_sequent, propagation_graph

W, B = Diamond.WHITE, Diamond.BLACK
WBW = frozenset({parse_axiom("wbw->w")})
axioms_st = st.builds(PathAxiom, st.lists(st.sampled_from((W, B)), max_size=4).map(tuple), st.sampled_from((W, B)))


def words(max_len):
    for n in range(max_len + 1):
        yield from itertools.product((W, B), repeat=n)


def test_parsing_helpers():
    assert parse_word("wb◇") == (W, B, W)
    assert parse_axiom("bw -> w") == PathAxiom((B, W), W)
    assert parse_axiom("->w") == PathAxiom((), W)
    assert parse_axioms("->w; ww->w") == S4_AXIOMS
    assert str(PathAxiom((B, W), W)) == "bw->w"
    assert word_text((W, B)) == "wb"
    with pytest.raises(ValueError):
        parse_axiom("wx->w")


def test_inversion_examples():
    assert invert_axiom(parse_axiom("wbw->w")) == parse_axiom("bwb->b")
    assert invert_axiom(parse_axiom("w->w")) == parse_axiom("b->b")
    assert invert_axiom(parse_axiom("ww->w")) == parse_axiom("bb->b")


def test_composition_examples():
    four = parse_axiom("ww->w")
    assert compose_axioms(four, four) == {parse_axiom("www->w")}
    assert compose_axioms(parse_axiom("w->b"), parse_axiom("b->w")) == {parse_axiom("w->w")}
    assert compose_axioms(four, parse_axiom("bb->b")) == set()


def test_grammar_examples():
    euclid = build_grammar(EUCLID_AXIOMS, W)
    assert euclid.start == "F"
    assert euclid.productions == {("F", ("P", "F")), ("P", ("P", "F")), ("F", ("w",)), ("P", ("b",))}
    assert build_grammar(set(), W).productions == {("F", ("w",)), ("P", ("b",))}
    s4 = build_grammar(S4_AXIOMS, W).productions
    assert {("F", ()), ("P", ()), ("F", ("F", "F")), ("P", ("P", "P"))} <= s4


def test_membership_examples():
    trans = build_grammar(TRANSITIVE_AXIOMS, W)
    assert cyk_membership(trans, "www") and not cyk_membership(trans, "wb")
    euclid = build_grammar(EUCLID_AXIOMS, W)
    assert cyk_membership(euclid, "bw") and not cyk_membership(euclid, "wb")
    assert cyk_membership(build_grammar(set(), W), "w")
    assert not cyk_membership(build_grammar(set(), W), "")
    s5 = build_grammar(S5_AXIOMS, W)
    assert all(cyk_membership(s5, w) for w in words(5))


def test_base_propagation_to_a_child():
    s = parse_sequent("<>a, o{}")
    assert propagation_witness(s, (), (0,), W, set()) == (W,)


# The four trees of the propagation figure for ◇◆◇X→◇X, with the depicted walks.
SCENARIOS = [
    ("t, <>a, o{d1, b{d2, o{d3}}}", (), (0, 0, 0), [(), (0,), (0, 0), (0, 0, 0)]),
    ("t, <>a, o{d1, b{d2}}", (), (0,), [(), (0,), (0, 0), (0,)]),
    ("t, b{d1, <>a, o{d2}}", (0,), (0, 0), [(0,), (), (0,), (0, 0)]),
    ("t, b{d, <>a}", (0,), (), [(0,), (), (0,), ()]),
]


@pytest.mark.parametrize("text,src,tgt,walk", SCENARIOS)
def test_propagation_scenarios(text, src, tgt, walk):
    s = parse_sequent(text)
    witness = propagation_witness(s, src, tgt, W, WBW)
    assert witness is not None
    pg = propagation_graph(s)
    assert walk_ends(pg, src, witness) >= {tgt}
    # the depicted walk carries ◇◆◇ and that string is admissible
    labels = tuple(d for p, q in zip(walk, walk[1:]) for (x, y, d) in pg.edges if (x, y) == (p, q))
    assert labels == (W, B, W)
    assert cyk_membership(build_grammar(WBW, W), labels)
    assert find_walk(pg, src, tgt, labels) is not None


def test_first_scenario_needs_the_full_walk():
    s = parse_sequent(SCENARIOS[0][0])
    assert propagation_witness(s, (), (0, 0, 0), W, WBW) == (W, B, W)


def test_no_edges_and_no_empty_string():
    s = parse_sequent("<>a")
    assert not propagation_applicable(s, (), (), W, EUCLID_AXIOMS)
    assert propagation_witness(s, (), (), W, S4_AXIOMS) == ()


def test_unknown_node_is_an_error():
    with pytest.raises(IndexError):
        propagation_witness(parse_sequent("a"), (), (3,), W, S4_AXIOMS)


@given(axioms_st)
def test_inversion_is_an_involution(ax):
    assert invert_axiom(invert_axiom(ax)) == ax


def _flip_axiom(ax):
    return PathAxiom(tuple(d.inverse() for d in ax.sources), ax.target.inverse())


@given(st.frozensets(axioms_st, max_size=3))
def test_colour_symmetry(axioms):
    swap = {"F": "P", "P": "F", "w": "b", "b": "w"}
    black = build_grammar(axioms, B)
    white = build_grammar({_flip_axiom(a) for a in axioms}, W)
    relabelled = Grammar(frozenset((swap[h], tuple(swap[s] for s in body)) for h, body in white.productions),
                         swap[white.start])
    assert relabelled == black


@given(st.frozensets(axioms_st, max_size=2))
def test_closure_members_are_accepted(axioms):
    grammars = {d: build_grammar(axioms, d) for d in (W, B)}
    for ax in bounded_closure(axioms, 2):
        if len(ax.sources) <= 7:
            assert cyk_membership(grammars[ax.target], ax.sources), str(ax)


def _closure_up_to(axioms, max_len):
    """Axioms with short source strings reachable by composition, to a fixpoint."""
    base = set(axioms) | {invert_axiom(a) for a in axioms} | identity_axioms()
    current = {a for a in base if len(a.sources) <= max_len}
    while True:
        new = set(current)
        for f in current:
            for g in current:
                new |= {c for c in compose_axioms(f, g) if len(c.sources) <= max_len}
        if new == current:
            return current
        current = new


@pytest.mark.parametrize("axioms", [TRANSITIVE_AXIOMS, EUCLID_AXIOMS, S4_AXIOMS, WBW, S5_AXIOMS],
                         ids=["trans", "euclid", "s4", "wbw", "s5"])
def test_accepted_strings_come_from_the_closure(axioms):
    closure = _closure_up_to(axioms, 7)
    for d in (W, B):
        g = build_grammar(axioms, d)
        accepted = {w for w in words(6) if cyk_membership(g, w)}
        produced = {a.sources for a in closure if a.target is d and len(a.sources) <= 6}
        assert accepted == produced


REGEXES = {
    "trans": (TRANSITIVE_AXIOMS, "ww*"),
    "euclid": (EUCLID_AXIOMS, "w|b[bw]*w"),
    "s5": (S5_AXIOMS, "[wb]*"),
}


@pytest.mark.parametrize("name", sorted(REGEXES))
def test_regular_languages_short_strings(name):
    axioms, regex = REGEXES[name]
    g = build_grammar(axioms, W)
    for w in words(6):
        assert cyk_membership(g, w) == bool(re.fullmatch(regex, word_text(w)))


@given(sequents, st.data())
def test_witness_labels_a_real_walk(s, data):
    nodes = addresses(s)
    i, j = data.draw(st.sampled_from(nodes)), data.draw(st.sampled_from(nodes))
    for axioms in (EUCLID_AXIOMS, S4_AXIOMS, WBW):
        witness = propagation_witness(s, i, j, W, axioms)
        if witness is not None:
            pg = propagation_graph(s)
            assert cyk_membership(build_grammar(axioms, W), witness)
            walk = find_walk(pg, i, j, witness)
            assert walk is not None and walk[0] == i and walk[-1] == j
