"""Vertex-indexed multigraphs and the rewriting operations used throughout the package.

Vertices are the integers ``0 .. vertex_count - 1``. Edges are stored as canonical
``(u, v)`` pairs with ``u <= v`` together with a multiplicity. Every operation is
pure and returns a new :class:`Graph`; operations that delete vertices also return
an explicit old-to-new index map so callers can remap terminal sets and bags.
"""
import collections
from typing import (
    Counter,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Tuple,
    Union,
)

import networkx as nx

Edge = Tuple[int, int]
VertexMap = Dict[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


class Graph:
    """Undirected graph on dense vertex indices, optionally with parallel edges and loops.

    Args:
    - vertex_count: Number of vertices
    - edges: Either an iterable of endpoint pairs (repeats add multiplicity) or a
      mapping from endpoint pairs to multiplicities
    - multigraph: Whether parallel edges and loops are permitted
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Union[Iterable[Edge], Mapping[Edge, int]] = (),
        multigraph: bool = False,
    ) -> None:
        if vertex_count < 0:
            raise ValueError("The vertex count must be nonnegative")
        counts: Counter[Edge] = collections.Counter()
        items = edges.items() if isinstance(edges, Mapping) else ((e, 1) for e in edges)
        for (u, v), multiplicity in items:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"Edge ({u}, {v}) has an endpoint outside the vertex range")
            if multiplicity < 0:
                raise ValueError("Edge multiplicities must be nonnegative")
            if multiplicity:
                counts[canonical_edge(u, v)] += multiplicity
        if not multigraph:
            if any(u == v for u, v in counts):
                raise ValueError("Loops require a multigraph")
            if any(m > 1 for m in counts.values()):
                raise ValueError("Parallel edges require a multigraph")
        self._vertex_count = vertex_count
        self._edges: Dict[Edge, int] = dict(sorted(counts.items()))
        self._multigraph = multigraph
        self._adjacency: Dict[int, Dict[int, int]] = collections.defaultdict(dict)
        for (u, v), m in self._edges.items():
            self._adjacency[u][v] = m
            self._adjacency[v][u] = m

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def vertices(self) -> range:
        return range(self._vertex_count)

    @property
    def multigraph(self) -> bool:
        return self._multigraph

    @property
    def edges(self) -> Dict[Edge, int]:
        """Canonical edges mapped to their multiplicities, in sorted order."""
        return dict(self._edges)

    def edge_list(self) -> List[Edge]:
        """Sorted list of edges with parallel copies repeated."""
        return [e for e, m in self._edges.items() for _ in range(m)]

    @property
    def edge_count(self) -> int:
        return sum(self._edges.values())

    def is_simple(self) -> bool:
        return all(u != v and m == 1 for (u, v), m in self._edges.items())

    def multiplicity(self, u: int, v: int) -> int:
        return self._edges.get(canonical_edge(u, v), 0)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._edges

    def neighbors(self, v: int) -> List[int]:
        return sorted(w for w in self._adjacency.get(v, {}) if w != v)

    def degree(self, v: int) -> int:
        """Number of incident edges counting multiplicity; a loop counts twice."""
        return sum(m * (2 if w == v else 1) for w, m in self._adjacency.get(v, {}).items())

    def incident(self, v: int) -> Iterator[Tuple[int, int]]:
        """Yields ``(neighbor, multiplicity)`` pairs around ``v``."""
        yield from sorted(self._adjacency.get(v, {}).items())

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edge_list())
        return graph

    def simple_networkx(self) -> nx.Graph:
        """The underlying simple graph: loops dropped and parallel edges collapsed."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from((u, v) for u, v in self._edges if u != v)
        return graph

    def add_vertices(self, count: int) -> "Graph":
        return Graph(self._vertex_count + count, self._edges, self._multigraph)

    def add_edges(self, edges: Iterable[Edge]) -> "Graph":
        counts = collections.Counter(self._edges)
        for u, v in edges:
            counts[canonical_edge(u, v)] += 1
        return Graph(self._vertex_count, counts, self._multigraph)

    def remove_edge(self, u: int, v: int) -> "Graph":
        """Removes one copy of ``uv``."""
        e = canonical_edge(u, v)
        if e not in self._edges:
            raise ValueError(f"Edge ({u}, {v}) is not in the graph")
        counts = dict(self._edges)
        counts[e] -= 1
        return Graph(self._vertex_count, counts, self._multigraph)

    def as_multigraph(self) -> "Graph":
        return Graph(self._vertex_count, self._edges, True)

    def simplified(self) -> "Graph":
        return Graph(self._vertex_count, {(u, v): 1 for u, v in self._edges if u != v})

    def remove_vertices(self, removed: Iterable[int]) -> Tuple["Graph", VertexMap]:
        """Deletes vertices and their incident edges; survivors keep their relative order."""
        gone = set(removed)
        if any(not 0 <= v < self._vertex_count for v in gone):
            raise ValueError("Cannot remove a vertex outside the vertex range")
        vertex_map = {}
        for v in self.vertices:
            if v not in gone:
                vertex_map[v] = len(vertex_map)
        edges = {
            (vertex_map[u], vertex_map[v]): m
            for (u, v), m in self._edges.items()
            if u in vertex_map and v in vertex_map
        }
        return Graph(len(vertex_map), edges, self._multigraph), vertex_map

    def induced_subgraph(self, kept: Iterable[int]) -> Tuple["Graph", VertexMap]:
        keep = set(kept)
        return self.remove_vertices(v for v in self.vertices if v not in keep)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self._vertex_count == other._vertex_count
            and self._edges == other._edges
            and self._multigraph == other._multigraph
        )

    def __hash__(self) -> int:
        return hash((self._vertex_count, tuple(self._edges.items()), self._multigraph))

    def __repr__(self) -> str:
        kind = "multigraph" if self._multigraph else "graph"
        return f"Graph({self._vertex_count} vertices, {self.edge_count} edges, {kind})"


class Contraction(NamedTuple):
    graph: Graph
    representative: int
    vertex_map: VertexMap


def components(g: Graph) -> List[FrozenSet[int]]:
    """Connected components, sorted by their smallest vertex."""
    found = [frozenset(c) for c in nx.connected_components(g.simple_networkx())]
    return sorted(found, key=min)


def cut_edges(g: Graph, s: Iterable[int]) -> Counter[Edge]:
    """Edges with exactly one endpoint in ``s``, with multiplicities."""
    inside = set(s)
    return collections.Counter(
        {(u, v): m for (u, v), m in g.edges.items() if (u in inside) != (v in inside)}
    )


def contract(g: Graph, s: Iterable[int], keep_multiplicity: bool) -> Contraction:
    """Merges ``s`` into its smallest vertex.

    In multiplicity mode the result is a multigraph in which parallel edges survive
    and edges inside ``s`` (now loops) are dropped; otherwise the result is simple.
    """
    merged = set(s)
    if not merged:
        raise ValueError("Cannot contract an empty vertex set")
    if any(not 0 <= v < g.vertex_count for v in merged):
        raise ValueError("The contracted set must be a subset of the vertices")
    keeper = min(merged)
    vertex_map: VertexMap = {}
    for v in g.vertices:
        if v == keeper or v not in merged:
            vertex_map[v] = len(vertex_map)
    representative = vertex_map[keeper]
    for v in merged:
        vertex_map[v] = representative
    counts: Counter[Edge] = collections.Counter()
    for (u, v), m in g.edges.items():
        a, b = vertex_map[u], vertex_map[v]
        if a == b:
            continue
        counts[canonical_edge(a, b)] += m if keep_multiplicity else 1
    size = len(set(vertex_map.values()))
    if keep_multiplicity:
        return Contraction(Graph(size, counts, True), representative, vertex_map)
    simple = {e: 1 for e in counts}
    return Contraction(Graph(size, simple), representative, vertex_map)


def suppress(g: Graph, v: int) -> Tuple[Graph, VertexMap]:
    """Deletes a vertex of degree at most two, joining its two neighbors if it had two.

    A loop created by the join is dropped. On a simple graph the join edge is only
    added when not already present.
    """
    if not 0 <= v < g.vertex_count:
        raise ValueError(f"Vertex {v} is not in the graph")
    if g.degree(v) > 2:
        raise ValueError(
            f"Only vertices of degree at most 2 can be suppressed, vertex {v} has {g.degree(v)}"
        )
    ends = [w for w, m in g.incident(v) if w != v for _ in range(m)]
    reduced, vertex_map = g.remove_vertices([v])
    if len(ends) == 2 and ends[0] != ends[1]:
        a, b = vertex_map[ends[0]], vertex_map[ends[1]]
        if reduced.multigraph or not reduced.has_edge(a, b):
            reduced = reduced.add_edges([(a, b)])
    return reduced, vertex_map


def subdivide(g: Graph, e: Edge) -> Tuple[Graph, int]:
    """Replaces one copy of ``e`` by a path through a new vertex, returned as well."""
    u, v = e
    if not g.has_edge(u, v):
        raise ValueError(f"Edge ({u}, {v}) is not in the graph")
    w = g.vertex_count
    counts = collections.Counter(g.edges)
    counts[canonical_edge(u, v)] -= 1
    counts[(u, w)] += 1
    counts[(v, w)] += 1
    return Graph(w + 1, counts, g.multigraph), w
