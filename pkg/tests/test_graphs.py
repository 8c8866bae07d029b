import pytest
from hypothesis import given, settings, strategies as st

from shiftquot.graphs import (
    Graph,
    GraphError,
    IntMatrix,
    adjacency_matrix,
    higher_block_graph,
    is_irreducible,
    is_primitive,
    paths_of_length,
)


def full(n_loops: int) -> Graph:
    return Graph(["v"], [(chr(ord("a") + i), "v", "v") for i in range(n_loops)])


def two_cycle() -> Graph:
    return Graph(["u", "w"], [("f", "u", "w"), ("g", "w", "u")])


def test_adjacency_full3():
    assert adjacency_matrix(full(3)).entries == ((3,),)


def test_adjacency_orientation():
    # single edge w -> v must land at row v (target), column w (source)
    g = Graph(["v", "w"], [("e", "w", "v")])
    a = adjacency_matrix(g)
    iv, iw = g.vertex_index["v"], g.vertex_index["w"]
    assert a[iv, iw] == 1
    assert a[iw, iv] == 0


def test_adjacency_edgeless():
    g = Graph(["v", "w"], [])
    assert adjacency_matrix(g).entries == ((0, 0), (0, 0))


def test_irreducible():
    assert is_irreducible(full(3))
    assert is_irreducible(two_cycle())
    assert not is_irreducible(Graph(["v", "w"], [("e", "v", "w")]))
    with pytest.raises(GraphError):
        is_irreducible(Graph([], []))


def test_primitive_full():
    assert is_primitive(full(3)) == (True, 1)
    assert is_primitive(full(2)) == (True, 1)


def test_primitive_two_cycle_matches_matrix_powers():
    g = two_cycle()
    ok, exp = is_primitive(g)
    assert not ok and exp is None
    # oracle: direct integer powers up to the Wielandt bound
    a = adjacency_matrix(g)
    for k in range(1, (len(g.vertices) - 1) ** 2 + 2):
        powered = a.power(k)
        assert any(x == 0 for row in powered.entries for x in row)


def test_primitive_implies_irreducible_on_samples():
    graphs = [full(1), full(3), two_cycle(), Graph(["u", "w"], [("e", "u", "w")])]
    for g in graphs:
        if is_primitive(g)[0]:
            assert is_irreducible(g)


@pytest.mark.parametrize(
    "g,n,expected",
    [(full(3), 7, 3**7), (full(2), 3, 8)],
)
def test_path_counts(g, n, expected):
    assert len(paths_of_length(g, n)) == expected


def test_paths_with_endpoints():
    g = two_cycle()
    assert len(paths_of_length(g, 2, src="u", dst="u")) == 1
    assert paths_of_length(g, 2, src="u", dst="u")[0].edges == ("f", "g")


@st.composite
def small_graphs(draw):
    n = draw(st.integers(1, 3))
    vertices = [f"v{i}" for i in range(n)]
    m = draw(st.integers(1, 5))
    edges = []
    for k in range(m):
        s = draw(st.integers(0, n - 1))
        t = draw(st.integers(0, n - 1))
        edges.append((f"e{k}", f"v{s}", f"v{t}"))
    return Graph(vertices, edges)


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.integers(1, 4))
def test_path_count_equals_power_sum(g, n):
    assert len(paths_of_length(g, n)) == adjacency_matrix(g).power(n).entry_sum()


def test_higher_block_counts():
    b = higher_block_graph(full(3), 2)
    assert (len(b.vertices), len(b.edges)) == (3, 9)
    b7 = higher_block_graph(full(2), 7)
    assert (len(b7.vertices), len(b7.edges)) == (64, 128)


def test_higher_block_k2_vertices_are_edges():
    g = two_cycle()
    assert len(higher_block_graph(g, 2).vertices) == len(g.edges)


@pytest.mark.parametrize("block", [2, 3, 4])
def test_higher_block_path_bijection(block):
    g = two_cycle()
    b = higher_block_graph(g, block)
    for n in range(1, 5):
        assert len(paths_of_length(b, n)) == len(paths_of_length(g, n + block - 1))


def test_intmatrix_determinant():
    m = IntMatrix.from_rows([[2, 1], [7, 4]])
    assert m.determinant() == 1
    assert IntMatrix.identity(3).determinant() == 1
    assert IntMatrix.from_rows([[0, 1], [1, 0]]).determinant() == -1
