import pytest

from steinerpack import graph
from steinerpack.graph import Graph


def triangle() -> Graph:
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


def test_graph_rejects_parallel_edges_and_loops() -> None:
    with pytest.raises(ValueError, match="Parallel edges"):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError, match="Loops"):
        Graph(2, [(1, 1)])
    with pytest.raises(ValueError, match="outside the vertex range"):
        Graph(2, [(0, 2)])

    multi = Graph(2, [(0, 1), (1, 0), (1, 1)], multigraph=True)
    assert multi.multiplicity(0, 1) == 2
    assert multi.degree(1) == 4
    assert not multi.is_simple()
    assert triangle().is_simple()


def test_components() -> None:
    assert graph.components(Graph(4, [(0, 1), (2, 3)])) == [{0, 1}, {2, 3}]
    assert graph.components(Graph(0)) == []
    assert graph.components(Graph(1)) == [{0}]
    windmill = Graph(7, [(0, v) for v in range(1, 7)] + [(1, 2), (3, 4), (5, 6)])
    assert graph.components(windmill) == [set(range(7))]


def test_cut_edges() -> None:
    path = Graph(3, [(0, 1), (1, 2)])
    assert graph.cut_edges(path, {1}) == {(0, 1): 1, (1, 2): 1}
    assert not graph.cut_edges(path, {0, 1, 2})

    multi = Graph(3, {(0, 1): 2, (1, 2): 1}, multigraph=True)
    for s in [{0}, {1}, {0, 2}]:
        inside = sum(graph.cut_edges(multi, s).values())
        outside = sum(graph.cut_edges(multi, set(multi.vertices) - s).values())
        assert inside == outside
    assert sum(graph.cut_edges(multi, {0}).values()) == 2


def test_contract() -> None:
    multi = graph.contract(triangle(), {1, 2}, keep_multiplicity=True)
    assert multi.graph.vertex_count == 2
    assert multi.graph.edges == {(0, 1): 2}
    assert multi.representative == 1
    assert multi.vertex_map == {0: 0, 1: 1, 2: 1}

    simple = graph.contract(triangle(), {0, 1}, keep_multiplicity=False)
    assert simple.graph == Graph(2, [(0, 1)])
    assert simple.representative == 0

    star = Graph(5, [(0, v) for v in range(1, 5)])
    spokes = graph.contract(star, {1, 2, 3, 4}, keep_multiplicity=True)
    assert spokes.graph.edges == {(0, 1): 4}

    with pytest.raises(ValueError, match="empty"):
        graph.contract(star, set(), keep_multiplicity=True)
    with pytest.raises(ValueError, match="subset"):
        graph.contract(star, {7}, keep_multiplicity=True)


def test_suppress() -> None:
    reduced, vertex_map = graph.suppress(Graph(3, [(0, 1), (1, 2)]), 1)
    assert reduced == Graph(2, [(0, 1)])
    assert vertex_map == {0: 0, 2: 1}

    double = Graph(2, {(0, 1): 2}, multigraph=True)
    reduced, _ = graph.suppress(double, 1)
    assert reduced == Graph(1, multigraph=True)

    pendant, _ = graph.suppress(Graph(3, [(0, 1), (1, 2)]), 2)
    assert pendant == Graph(2, [(0, 1)])

    with pytest.raises(ValueError, match="degree at most 2"):
        graph.suppress(Graph(4, [(0, 1), (0, 2), (0, 3)]), 0)


def test_suppress_preserves_other_degrees() -> None:
    multi = Graph(4, {(0, 1): 2, (1, 2): 1, (2, 3): 1, (0, 3): 1}, multigraph=True)
    reduced, vertex_map = graph.suppress(multi, 2)
    for v, w in vertex_map.items():
        assert reduced.degree(w) == multi.degree(v)


def test_subdivide() -> None:
    path, w = graph.subdivide(Graph(2, [(0, 1)]), (0, 1))
    assert w == 2
    assert path == Graph(3, [(0, 2), (1, 2)])

    cycle, _ = graph.subdivide(triangle(), (0, 1))
    assert cycle.vertex_count == 4
    assert all(cycle.degree(v) == 2 for v in cycle.vertices)

    multi, w = graph.subdivide(Graph(2, {(0, 1): 2}, multigraph=True), (1, 0))
    assert multi.edges == {(0, 1): 1, (0, 2): 1, (1, 2): 1}

    with pytest.raises(ValueError, match="not in the graph"):
        graph.subdivide(triangle(), (0, 0))


def test_remove_and_induce() -> None:
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    reduced, vertex_map = g.remove_vertices([1])
    assert reduced == Graph(3, [(1, 2)])
    assert vertex_map == {0: 0, 2: 1, 3: 2}

    sub, vertex_map = g.induced_subgraph([2, 3])
    assert sub == Graph(2, [(0, 1)])
    assert vertex_map == {2: 0, 3: 1}
