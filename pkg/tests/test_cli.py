import io
import json

import pytest

from conftest import FIXTURES
from tensera import derivation as deriv
from tensera.calculus_deep import check_deep
from tensera.calculus_shallow import check_shallow
from tensera.cli import EX_INVALID, EX_NO, EX_OK, EX_UNKNOWN, EX_USAGE, run
from tensera.constructions import residuated_cut
from tensera.formula import Atom, parse
from tensera.prover import prove_dkt
from tensera.sequent import seq


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_prove_tense_axiom():
    code, text = call("prove", "--logic", "kt", "a -> []<*>a")
    assert code == EX_OK
    d = deriv.from_json(json.loads(text))
    check_deep(d)
    assert d.seq == seq(parse("a -> []<*>a"))


def test_prove_refuted_and_unknown():
    assert call("prove", "[]a -> a")[0] == EX_NO
    assert call("prove", "--logic", "path:ww->w", "--depth", "1", "[]a -> [][]a")[0] == EX_UNKNOWN
    assert call("prove", "--logic", "kts4", "[]a -> a")[0] == EX_OK


def test_prove_emits_dot():
    code, text = call("prove", "--emit", "dot", "a | ~a")
    assert code == EX_OK and text.startswith("digraph")


def test_grammar_queries():
    assert call("grammar", "--axioms", "bw->w", "--query", "bw") == (EX_OK, "accepted\n")
    assert call("grammar", "--axioms", "bw->w", "--query", "wb") == (EX_NO, "rejected\n")
    code, text = call("grammar", "--axioms", "bw->w")
    assert code == EX_OK and "F -> P F" in text
    code, text = call("grammar", "--axioms", "bw->w", "--applicable", "o{<>a}, o{},0,1,w")
    assert code == EX_OK and text == "applicable via bw\n"


def test_check_valid_and_corrupted_proofs(tmp_path):
    d = prove_dkt(parse("a -> []<*>a")).derivation
    good = tmp_path / "good.json"
    good.write_text(deriv.dumps(d))
    code, text = call("check", "--calc", "dkt", str(good))
    assert code == EX_OK and json.loads(text)["valid"]
    obj = deriv.to_json(d)
    obj["seq"]["fs"] = ["b"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, text = call("check", "--calc", "dkt", str(bad))
    assert code == EX_INVALID and not json.loads(text)["valid"]


def test_check_fixture_with_its_system():
    path = FIXTURES / "derivations" / "uniqueness_u2.json"
    assert call("check", "--calc", "skt", "--system", "auto", "--allow-cut", str(path))[0] == EX_OK
    assert call("check", "--calc", "skt", "--system", "auto", str(path))[0] == EX_INVALID


def test_translate_both_ways(tmp_path):
    d = prove_dkt(parse("[](a -> b) -> ([]a -> []b)")).derivation
    p = tmp_path / "deep.json"
    p.write_text(deriv.dumps(d))
    code, text = call("translate", "--dir", "d2s", str(p))
    assert code == EX_OK
    shallow = deriv.from_json(json.loads(text))
    check_shallow(shallow)
    q = tmp_path / "shallow.json"
    q.write_text(text)
    code, text = call("translate", "--dir", "s2d", str(q))
    assert code == EX_OK
    check_deep(deriv.from_json(json.loads(text)))


def test_cutelim_with_trace(tmp_path, capsys):
    p = tmp_path / "cut.json"
    p.write_text(deriv.dumps(residuated_cut(Atom("a1"), Atom("a2"))))
    out = io.StringIO()
    assert run(["cutelim", "--trace", str(p)], out) == EX_OK
    lines = out.getvalue().splitlines()
    final = deriv.from_json(json.loads(lines[-1]))
    check_shallow(final)
    assert "# cut 0: a1 & a2" in capsys.readouterr().err


def test_countermodel_verb():
    code, text = call("countermodel", "--bound", "3", "[]a -> a")
    assert code == EX_OK and json.loads(text)["worlds"] == 1
    assert call("countermodel", "--frames", "refl+trans", "--bound", "3", "<><>a -> <>a")[0] == EX_NO


def test_bench_is_a_tsv(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("# two lines\na | ~a\n[]a -> a\n")
    code, text = call("bench", "--corpus", str(corpus), "--jobs", "2")
    rows = [line.split("\t") for line in text.splitlines()]
    assert code == EX_OK
    assert rows[0] == ["formula", "logic", "outcome", "steps", "wall_time"]
    assert [r[2] for r in rows[1:]] == ["Proved", "Refuted"]


@pytest.mark.parametrize("argv", [
    [],
    ["prove", "--logic", "nope", "a"],
    ["prove", "a |"],
    ["check", "missing.json", "--calc", "dkt"],
    ["grammar", "--axioms", "xx->w"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    assert run(argv, io.StringIO()) == EX_USAGE
