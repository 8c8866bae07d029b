import pytest

from shiftquot.embedding import (
    EmbeddingError,
    EmbeddingPair,
    check_standing_hypotheses,
    completion_tables,
    epsilon,
    quotient_graph,
)
from shiftquot.graphs import Graph, is_primitive


def test_full3_standing(full3):
    rep = check_standing_hypotheses(full3)
    assert rep.standing()
    assert rep.h_has_cycle


def test_full2_fails_h2_only(full2):
    rep = check_standing_hypotheses(full2)
    assert rep.h0.passed and rep.h1.passed and rep.primitive.passed
    assert not rep.h2.passed
    assert rep.h2.witness == "edge h"


def test_h1_fails_when_images_overlap():
    g = Graph(["v"], [("a", "v", "v"), ("b", "v", "v")])
    h = Graph(["w"], [("h", "w", "w")])
    p = EmbeddingPair(g, h, {"w": "v"}, {"h": "a"}, {"w": "v"}, {"h": "a"})
    rep = check_standing_hypotheses(p)
    assert not rep.h1.passed
    assert "a" in rep.h1.witness


def test_h0_fails_on_disagreeing_vertex_maps():
    g = Graph(["u", "z"], [("a", "u", "u"), ("b", "z", "z"), ("c", "u", "z"), ("d", "z", "u")])
    h = Graph(["w"], [])
    p = EmbeddingPair(g, h, {"w": "u"}, {}, {"w": "z"}, {})
    rep = check_standing_hypotheses(p)
    assert not rep.h0.passed


def test_structural_validation_rejects_non_homomorphism():
    g = Graph(["u", "z"], [("a", "u", "z")])
    h = Graph(["w"], [("h", "w", "w")])
    with pytest.raises(EmbeddingError):
        EmbeddingPair(g, h, {"w": "u"}, {"h": "a"}, {"w": "u"}, {"h": "a"})


def test_quotient_full3(full3):
    q = quotient_graph(full3)
    assert len(q.graph.vertices) == 1
    assert len(q.graph.edges) == 2
    assert q.tau["a"] == q.tau["b"]
    assert q.tau["c"] != q.tau["a"]
    assert len(q.graph.edges) == len(full3.g.edges) - len(full3.h.edges)


def test_quotient_full2(full2):
    q = quotient_graph(full2)
    assert len(q.graph.edges) == 1


def test_quotient_requires_h1():
    g = Graph(["v"], [("a", "v", "v"), ("b", "v", "v")])
    h = Graph(["w"], [("h", "w", "w")])
    p = EmbeddingPair(g, h, {"w": "v"}, {"h": "a"}, {"w": "v"}, {"h": "a"})
    with pytest.raises(EmbeddingError):
        quotient_graph(p)


def test_tau_collapses_both_copies(full3, twovertex):
    for p in (full3, twovertex):
        q = quotient_graph(p)
        for y in p.h.edges:
            assert q.tau[p.xi0_edges[y]] == q.tau[p.xi1_edges[y]]


def test_doubled_edges_are_parallel(full3, twovertex):
    for p in (full3, twovertex):
        for y in p.h.edges:
            e0, e1 = p.xi0_edges[y], p.xi1_edges[y]
            assert e0 != e1
            assert p.g.source(e0) == p.g.source(e1)
            assert p.g.target(e0) == p.g.target(e1)


def test_quotient_is_primitive_when_standing(full3, twovertex):
    for p in (full3, twovertex):
        assert check_standing_hypotheses(p).standing()
        assert is_primitive(quotient_graph(p).graph)[0]


def test_epsilon(full3):
    assert epsilon(full3, "a") == 0
    assert epsilon(full3, "b") == 1
    with pytest.raises(EmbeddingError):
        epsilon(full3, "c")


def test_completion_tables_full3(full3):
    tables = completion_tables(full3)
    comp = tables["v"]
    assert comp.xi_tail == ((), ("a",))
    assert comp.nonxi_path_to_tail == ()
    assert comp.nearest_nonxi == ((), "c")
    assert comp.min_forced == 0


def test_completion_flags_missing_tail():
    # H has a single edge into a sink; no infinite image path exists anywhere
    g = Graph(
        ["u", "z"],
        [("a", "u", "z"), ("b", "u", "z"), ("c", "u", "z"),
         ("d", "z", "u"), ("e", "u", "u"), ("f", "z", "z")],
    )
    h = Graph(["p", "q"], [("y", "p", "q")])
    p = EmbeddingPair(g, h, {"p": "u", "q": "z"}, {"y": "a"}, {"p": "u", "q": "z"}, {"y": "b"})
    rep = check_standing_hypotheses(p)
    assert not rep.h_has_cycle
    tables = completion_tables(p)
    assert tables["u"].xi_tail is None
    assert tables["z"].xi_tail is None


def test_completion_rejects_dead_vertex():
    g = Graph(["u", "z"], [("a", "u", "z")])
    h = Graph([], [])
    p = EmbeddingPair(g, h, {}, {}, {}, {})
    with pytest.raises(EmbeddingError):
        completion_tables(p)


def test_twovertex_completion(twovertex):
    tables = completion_tables(twovertex)
    for v in twovertex.g.vertices:
        comp = tables[v]
        assert comp.xi_tail is not None
        assert comp.min_forced == 0
