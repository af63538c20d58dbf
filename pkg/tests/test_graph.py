import pytest
from hypothesis import given, settings, strategies as st

from oracles import complete, cycle, path, petersen, star
from specdeg.graph import (
    Graph,
    GraphFormatError,
    bfs_distances,
    components,
    degree_stats,
    diameter,
    edge_subgraph,
    graph_hash,
    induced_subgraph,
    is_connected,
    non_isolated,
    parse_graph,
    read_graph,
    vertex_set,
    write_graph,
)


def test_parse_basic_and_canonical_form():
    g = parse_graph("# triangle\n3 3\n2 1\n0 1\n\n0 2\n")
    assert g.n == 3 and g.m == 3
    assert write_graph(g) == "3 3\n0 1\n0 2\n1 2\n"


def test_duplicates_collapse_and_are_counted():
    g = parse_graph("3 4\n0 1\n1 0\n0 1\n1 2\n")
    assert g.m == 2
    assert g.duplicates == 2


@pytest.mark.parametrize("text", [
    "",
    "# only a comment\n",
    "3\n",
    "3 1\n0 3\n",
    "3 1\n1 1\n",
    "3 1\n0 x\n",
    "-1 0\n",
    "3 1\n0 1 2\n",
])
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text)


def test_from_edges_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(-1, [])


def test_read_graph(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text(write_graph(petersen()))
    assert read_graph(p) == petersen()


def test_hash_is_canonical():
    a = Graph.from_edges(3, [(0, 1), (1, 2)])
    b = Graph.from_edges(3, [(2, 1), (1, 0), (0, 1)])
    assert graph_hash(a) == graph_hash(b)
    assert graph_hash(a) != graph_hash(Graph.from_edges(3, [(0, 1), (0, 2)]))


def test_degree_stats_and_queries():
    g = star(4)
    assert degree_stats(g) == (4, 1, [4, 1, 1, 1, 1])
    assert degree_stats(Graph.from_edges(0, [])) == (0, 0, [])
    assert g.has_edge(0, 3) and g.has_edge(3, 0) and not g.has_edge(1, 2)
    assert not g.has_edge(0, 9)
    assert g.max_degree == 4
    g.check()


def test_subgraphs():
    g = complete(5)
    sub = induced_subgraph(g, [4, 1, 3])
    assert sub.parent_ids == (1, 3, 4)
    assert sub.graph.m == 3
    assert sub.edges_in_parent() == [(1, 3), (1, 4), (3, 4)]
    h = edge_subgraph(g, [(0, 1), (2, 3)])
    assert h.n == 5 and h.m == 2
    with pytest.raises(ValueError):
        edge_subgraph(path(3), [(0, 2)])
    with pytest.raises(ValueError):
        vertex_set(g, [7])


def test_components_and_distances():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (4, 5)])
    assert components(g) == [(0, 1, 2), (3,), (4, 5)]
    assert not is_connected(g)
    assert is_connected(cycle(5))
    assert not is_connected(Graph.from_edges(0, []))
    assert bfs_distances(path(4), 0) == [0, 1, 2, 3]
    assert diameter(petersen()) == 2
    with pytest.raises(ValueError):
        diameter(g)
    ni = non_isolated(g)
    assert ni.parent_ids == (0, 1, 2, 4, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_round_trip_property(data):
    n, raw = data
    edges = [(u, v) for u, v in raw if u != v]
    g = Graph.from_edges(n, edges)
    g.check()
    again = parse_graph(write_graph(g))
    assert again == g
    assert write_graph(again) == write_graph(g)
    assert {tuple(sorted(e)) for e in edges} == set(g.edges())
