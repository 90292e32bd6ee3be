"""Generalized Steiner tree packing instances, solutions and augmented graphs.

An instance is a simple host graph together with a family of terminal sets, each
carrying a positive demand. Edge-disjoint paths and Steiner tree packing are
views onto the same model through :func:`from_edp` and :func:`from_stp`.
"""
import collections
import enum
import itertools
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from steinerpack.graph import Edge, Graph, VertexMap, canonical_edge

TerminalSet = FrozenSet[int]


class Part(NamedTuple):
    """One subgraph of a packing: its edges and the index of the terminal set it serves."""

    edges: FrozenSet[Edge]
    terminal_index: int


Solution = List[Part]


def make_part(edges: Iterable[Edge], terminal_index: int) -> Part:
    return Part(frozenset(canonical_edge(u, v) for u, v in edges), terminal_index)


def _sort_key(terminal_set: TerminalSet) -> Tuple[int, ...]:
    return tuple(sorted(terminal_set))


class GstpInstance:
    """A host graph with terminal sets and demands.

    Terminal sets are canonicalized at construction: duplicate sets merge by summing
    their demands and the family is ordered lexicographically by sorted members, so
    ``terminal_sets[i]`` may differ from the i-th input set.

    Args:
    - graph: The simple host graph
    - terminal_sets: The terminal vertex sets
    - demands: One positive demand per input terminal set
    """

    def __init__(
        self, graph: Graph, terminal_sets: Iterable[Iterable[int]], demands: Iterable[int]
    ) -> None:
        if not graph.is_simple():
            raise ValueError("Instances require a simple host graph")
        raw_sets = [frozenset(t) for t in terminal_sets]
        raw_demands = list(demands)
        if len(raw_sets) != len(raw_demands):
            raise ValueError("Every terminal set needs exactly one demand")
        merged: Dict[TerminalSet, int] = collections.defaultdict(int)
        for terminal_set, demand in zip(raw_sets, raw_demands):
            if demand < 1:
                raise ValueError("Demands must be at least 1")
            if any(not 0 <= v < graph.vertex_count for v in terminal_set):
                raise ValueError("Terminal sets must be subsets of the vertex set")
            merged[terminal_set] += demand
        ordered = sorted(merged, key=_sort_key)
        self._graph = graph
        self._terminal_sets: Tuple[TerminalSet, ...] = tuple(ordered)
        self._demands: Tuple[int, ...] = tuple(merged[t] for t in ordered)

    @property
    def graph(self) -> Graph:
        return self._graph

    @property
    def terminal_sets(self) -> Tuple[TerminalSet, ...]:
        return self._terminal_sets

    @property
    def demands(self) -> Tuple[int, ...]:
        return self._demands

    @property
    def total_demand(self) -> int:
        return sum(self._demands)

    def demand_of(self, terminal_set: Iterable[int]) -> int:
        """Demand of a terminal set, or 0 if the set is not in the family."""
        key = frozenset(terminal_set)
        for t, d in zip(self._terminal_sets, self._demands):
            if t == key:
                return d
        return 0

    def index_of(self, terminal_set: Iterable[int]) -> int:
        key = frozenset(terminal_set)
        for i, t in enumerate(self._terminal_sets):
            if t == key:
                return i
        raise ValueError(f"{sorted(key)} is not a terminal set of the instance")

    def items(self) -> List[Tuple[TerminalSet, int]]:
        return list(zip(self._terminal_sets, self._demands))

    def with_terminals(self, items: Iterable[Tuple[Iterable[int], int]]) -> "GstpInstance":
        """Same graph, new terminal family given as ``(set, demand)`` pairs."""
        pairs = list(items)
        return GstpInstance(self._graph, [t for t, _ in pairs], [d for _, d in pairs])

    def add_demand(self, terminal_set: Iterable[int], amount: int = 1) -> "GstpInstance":
        """Adds ``amount`` demand to a terminal set, creating the set if necessary."""
        return self.with_terminals(self.items() + [(frozenset(terminal_set), amount)])

    def remap(self, graph: Graph, vertex_map: VertexMap) -> "GstpInstance":
        """Transfers the terminal family onto ``graph`` through ``vertex_map``.

        Terminal vertices missing from the map are an error.
        """
        items = []
        for terminal_set, demand in self.items():
            if any(v not in vertex_map for v in terminal_set):
                raise ValueError(
                    f"Terminal set {sorted(terminal_set)} loses a vertex under the map"
                )
            items.append((frozenset(vertex_map[v] for v in terminal_set), demand))
        return GstpInstance(graph, [t for t, _ in items], [d for _, d in items])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GstpInstance):
            return NotImplemented
        return (
            self._graph == other._graph
            and self._terminal_sets == other._terminal_sets
            and self._demands == other._demands
        )

    def __hash__(self) -> int:
        return hash((self._graph, self._terminal_sets, self._demands))

    def __repr__(self) -> str:
        family = ", ".join(f"{sorted(t)}x{d}" for t, d in self.items())
        return f"GstpInstance({self._graph!r}, [{family}])"


def from_stp(g: Graph, terminal_set: Iterable[int], demand: int) -> GstpInstance:
    """Steiner tree packing: one terminal set with demand ``demand``."""
    return GstpInstance(g, [terminal_set], [demand])


def from_edp(g: Graph, pairs: Iterable[Iterable[int]]) -> GstpInstance:
    """Edge-disjoint paths: every pair is a terminal set with demand 1."""
    sets = [frozenset(p) for p in pairs]
    if any(len(p) != 2 for p in sets):
        raise ValueError("Edge-disjoint paths need pairs of distinct vertices")
    return GstpInstance(g, sets, [1] * len(sets))


class Verification(NamedTuple):
    ok: bool
    violation: Optional[str] = None


def _connected_and_covers(edges: FrozenSet[Edge], terminal_set: TerminalSet) -> bool:
    if not edges:
        return len(terminal_set) <= 1
    subgraph = nx.Graph()
    subgraph.add_edges_from(edges)
    return nx.is_connected(subgraph) and terminal_set <= set(subgraph.nodes)


def verify(inst: GstpInstance, sol: Sequence[Part]) -> Verification:
    """Checks a claimed packing and reports the first violation found."""
    counts = collections.Counter()
    used: Dict[Edge, int] = {}
    for position, (edges, index) in enumerate(sol):
        if not 0 <= index < len(inst.terminal_sets):
            raise ValueError(f"Part {position} names terminal set {index}, which does not exist")
        for u, v in edges:
            e = canonical_edge(u, v)
            if not inst.graph.has_edge(*e):
                return Verification(False, f"part {position} uses {e}, which is not an edge")
            if e in used:
                return Verification(False, f"edge {e} is shared by parts {used[e]} and {position}")
            used[e] = position
        canonical = frozenset(canonical_edge(u, v) for u, v in edges)
        terminal_set = inst.terminal_sets[index]
        if not _connected_and_covers(canonical, terminal_set):
            return Verification(
                False,
                f"part {position} is not a connected subgraph containing {sorted(terminal_set)}",
            )
        counts[index] += 1
    for index, demand in enumerate(inst.demands):
        if counts[index] != demand:
            return Verification(
                False, f"terminal set {index} has {counts[index]} parts but demand {demand}"
            )
    return Verification(True)


class AugmentationMode(enum.Enum):
    VERTEX = "vertex"
    CLIQUE = "clique"


class AugmentedGraph(NamedTuple):
    graph: Graph
    aug_vertex_of: Dict[int, int]
    mode: AugmentationMode

    def is_augmented(self, v: int) -> bool:
        return v in self.aug_vertex_of.values()

    def terminal_index_of(self, v: int) -> int:
        for index, w in self.aug_vertex_of.items():
            if w == v:
                return index
        raise ValueError(f"Vertex {v} is not an augmented vertex")


def augment(inst: GstpInstance, mode: AugmentationMode) -> AugmentedGraph:
    """The vertex- or clique-augmented graph of an instance.

    Vertex mode appends ``aug(T_i)`` as vertex ``n + i`` adjacent to exactly ``T_i``.
    Clique mode adds one parallel copy of every pair inside each terminal set.
    """
    g = inst.graph
    n = g.vertex_count
    if mode is AugmentationMode.VERTEX:
        aug_vertex_of = {i: n + i for i in range(len(inst.terminal_sets))}
        new_edges = [(v, n + i) for i, t in enumerate(inst.terminal_sets) for v in sorted(t)]
        graph = g.add_vertices(len(inst.terminal_sets)).add_edges(new_edges)
        return AugmentedGraph(graph, aug_vertex_of, mode)
    pairs = [pair for t in inst.terminal_sets for pair in itertools.combinations(sorted(t), 2)]
    return AugmentedGraph(g.as_multigraph().add_edges(pairs), {}, mode)
