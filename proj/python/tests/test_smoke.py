import os
from pathlib import Path

import pytest

import hgl

DATA = Path(os.environ.get("HGL_DATA", Path(__file__).resolve().parents[2] / "data"))


def read(name):
    return (DATA / name).read_text()


def test_prove():
    r = hgl.prove(read("ex1.sq"))
    assert r["verdict"] == "derivable"
    assert r["checked"]
    assert hgl.prove("p(x,y) |- q(x,y)")["verdict"] == "not-derivable"


def test_alpha_eq():
    assert hgl.alpha_eq("fa x. p(x)", "fa y. p(y)")
    assert not hgl.alpha_eq("fa x. p(x,z)", "fa z. p(z,z)")


def test_hypergraph_ops():
    ab = hgl.Hypergraph.parse(read("sg_ab.hgr"))
    assert ab.type == ["s", "t"]
    assert ab.size() == 5
    assert ab.isomorphic(hgl.Hypergraph.string_graph("ab"))
    assert not ab.isomorphic(hgl.Hypergraph.parse(read("sg_ba.hgr")))
    assert ab.canonical_form() == hgl.Hypergraph.parse(ab.render()).canonical_form()
    assert ab.diagram_formula() == "ex v1. a(v0,v1) * b(v1,v2) * nu(v0) * nu(v1) * nu(v2)"
    fused = ab.substitute({"s": "x", "t": "x"})
    assert fused.type == ["x"]
    assert len(fused.nodes) == 2
    assert ab.dot().startswith("digraph")


def test_member():
    r = hgl.member(read("ex2.gram"), hgl.Hypergraph.parse(read("ex2_graph.hgr")))
    assert r["outcome"] == "accepted"
    assert hgl.sequent_alpha_eq(r["sequent"], read("ex2_expected.txt").splitlines()[0])
    assert hgl.member_str(read("ex1.gram"), "aa")["outcome"] == "accepted"
    assert hgl.member_str(read("ex1.gram"), "aaa")["sequent"] is None


def test_encode_and_derive():
    [(name, formula)] = hgl.encode_rules(read("example6.htr"))
    assert name == "p" and formula.startswith("fa ")
    system = read("toy_string.hts")
    assert hgl.derive(system, hgl.Hypergraph.string_graph("aa"), 4) == ["more", "last"]
    assert hgl.derive(system, hgl.Hypergraph.string_graph("ab"), 4) is None
    gram = hgl.translate(system, "mill1")
    assert hgl.member_str(gram, "aaa")["outcome"] == "accepted"


def test_corpus():
    [r] = hgl.corpus("lemma1-oracle", 10, 3)
    assert r["cases"] == 10 and r["failures"] == 0 and r["seed"] == 3


def test_errors():
    with pytest.raises(hgl.HglError, match="1:5"):
        hgl.prove("p(a |-")
    with pytest.raises(ValueError):
        hgl.corpus("nonsense")
