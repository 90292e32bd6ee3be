"""Small exact structural parameters of graphs.

All parameters are taken over the underlying simple graph: loops are dropped and
parallel edges collapse. The vertex cover and feedback vertex set solvers are exact
searches and refuse graphs above the configured vertex cap.
"""
import itertools
import logging
from typing import FrozenSet, Optional

import networkx as nx

from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Graph

logger = logging.getLogger(__name__)

PARAMETERS = ("vc", "fvs", "fen", "max_degree", "fracture")


def _check_cap(g: Graph, which: str, caps: SolverCaps) -> None:
    if g.vertex_count > caps.parameter_vertices:
        raise CapExceededError(which, "parameter_vertices", caps.parameter_vertices, g.vertex_count)


def _cover_within(graph: nx.Graph, budget: int) -> Optional[FrozenSet[int]]:
    """A vertex cover of size at most ``budget``, branching on the two ends of an edge."""
    edge = next(iter(graph.edges), None)
    if edge is None:
        return frozenset()
    if budget == 0:
        return None
    for v in edge:
        rest = graph.copy()
        rest.remove_node(v)
        found = _cover_within(rest, budget - 1)
        if found is not None:
            return found | {v}
    return None


def minimum_vertex_cover(g: Graph, caps: SolverCaps = SolverCaps()) -> FrozenSet[int]:
    _check_cap(g, "vc", caps)
    graph = g.simple_networkx()
    for budget in range(g.vertex_count + 1):
        found = _cover_within(graph, budget)
        if found is not None:
            logger.debug("vertex cover of size %d found", budget)
            return found
    raise AssertionError("the full vertex set is always a cover")


def minimum_feedback_vertex_set(g: Graph, caps: SolverCaps = SolverCaps()) -> FrozenSet[int]:
    _check_cap(g, "fvs", caps)
    graph = g.simple_networkx()
    for size in range(g.vertex_count + 1):
        for removed in itertools.combinations(g.vertices, size):
            rest = graph.copy()
            rest.remove_nodes_from(removed)
            if nx.is_forest(rest):
                return frozenset(removed)
    raise AssertionError("removing every vertex leaves a forest")


def feedback_edge_number(g: Graph) -> int:
    """|E| - |V| + |components| of the underlying simple graph."""
    graph = g.simple_networkx()
    return graph.number_of_edges() - graph.number_of_nodes() + nx.number_connected_components(graph)


def max_degree(g: Graph) -> int:
    graph = g.simple_networkx()
    return max((d for _, d in graph.degree), default=0)


def parameter(g: Graph, which: str, caps: SolverCaps = SolverCaps()) -> int:
    """Computes one of ``vc``, ``fvs``, ``fen``, ``max_degree`` or ``fracture``."""
    if which == "vc":
        return len(minimum_vertex_cover(g, caps))
    if which == "fvs":
        return len(minimum_feedback_vertex_set(g, caps))
    if which == "fen":
        return feedback_edge_number(g)
    if which == "max_degree":
        return max_degree(g)
    if which == "fracture":
        from steinerpack.fracture import fracture_number

        return fracture_number(g)
    raise ValueError(f"Unknown parameter `{which}`; choose from {', '.join(PARAMETERS)}")
