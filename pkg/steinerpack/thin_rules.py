"""Reduction rules for cluttered thin nodes of a tree-cut decomposition.

A node s qualifies when it is not the root, the host vertices below it number at
least two, no terminal set crosses its link and exactly two host edges uv and xy
(u and x below s) leave its subtree. Two vertices whose link edges meet the same
outside vertex do not qualify, since contracting them gives the same pair back. For a
decomposition of the vertex-augmented graph, the two edges must also be the only
augmented-graph edges leaving it.

Three sub-instances on the vertices below s decide how the instance shrinks:

- supply: the sets inside, plus one extra demand on {u, x}. If positive, the
  inside can also route one path for the outside, so it is contracted to a vertex.
- independent: the sets inside alone. If positive, the inside is deleted.
- demand: the sets inside with the outside contracted to a vertex. If positive,
  the inside needs one path through the outside, so it is deleted and {v, y}
  gains one demand.

If all three are negative the instance is negative.
"""
import logging
from typing import Callable, FrozenSet, List, NamedTuple, Optional, Tuple, Union

from steinerpack.graph import Edge, Graph, VertexMap, contract, cut_edges, subdivide
from steinerpack.instances import AugmentationMode, GstpInstance, TerminalSet, augment
from steinerpack.reductions import TRIVIAL_NEGATIVE, TrivialNegative
from steinerpack.solvers.solver import SolveResult
from steinerpack.tree_cut import (
    TreeCutDecomposition,
    carry_over,
    cross_link,
    is_augmented_decomposition,
    prune_empty_leaves,
    remove_subtree,
    replace_subtree,
    reroot,
    with_bag,
)

logger = logging.getLogger(__name__)

Subsolver = Callable[[GstpInstance], SolveResult]


class ThinNodeSubinstances(NamedTuple):
    """The three sub-instances of a cluttered thin node.

    ``boundary`` holds the edges (u, v) and (x, y) leaving the subtree, inside
    endpoint first. ``inner_map`` sends inner host vertices to their index in
    ``supply`` and ``independent``; ``outer_map`` sends every host vertex to its
    index in ``demand``, where the outside is one vertex.
    """

    supply: GstpInstance
    independent: GstpInstance
    demand: GstpInstance
    boundary: Tuple[Edge, Edge]
    inner: FrozenSet[int]
    inner_map: VertexMap
    outer_map: VertexMap
    contained: Tuple[TerminalSet, ...]


class ThinReduction(NamedTuple):
    instance: GstpInstance
    decomposition: TreeCutDecomposition
    rules: Tuple[str, ...]


def _without_parallel_edges(graph: Graph) -> Graph:
    """Subdivides every extra copy of a parallel edge; new vertices come last."""
    while True:
        heavy = next((e for e, m in graph.edges.items() if m > 1), None)
        if heavy is None:
            return graph.simplified()
        graph, _ = subdivide(graph, heavy)


def _problem(
    inst: GstpInstance, tcd: TreeCutDecomposition, s: int, augmented_graph: Optional[Graph]
) -> Optional[str]:
    if s == tcd.root:
        return "the root has no link"
    g = inst.graph
    inner = tcd.below(s) & frozenset(g.vertices)
    if len(inner) < 2:
        return f"node {s} has {len(inner)} host vertices below it"
    if cross_link(inst, tcd, s):
        return f"a terminal set crosses the link above node {s}"
    leaving = cut_edges(g, inner)
    if sum(leaving.values()) != 2:
        return f"node {s} has host adhesion {sum(leaving.values())}, not 2"
    if len(inner) == 2 and len({w for e in leaving for w in e} - inner) == 1:
        # Contracting would give back the same two vertices after subdivision.
        return f"node {s} is already contracted"
    if augmented_graph is not None:
        augmented_cut = cut_edges(augmented_graph, tcd.below(s))
        if sum(augmented_cut.values()) != 2 or any(max(e) >= g.vertex_count for e in augmented_cut):
            return f"the link above node {s} carries augmented edges"
    return None


def _augmented_graph(inst: GstpInstance, tcd: TreeCutDecomposition) -> Optional[Graph]:
    if is_augmented_decomposition(inst, tcd):
        return augment(inst, AugmentationMode.VERTEX).graph
    return None


def thin_subinstances(
    inst: GstpInstance, tcd: TreeCutDecomposition, s: int
) -> ThinNodeSubinstances:
    problem = _problem(inst, tcd, s, _augmented_graph(inst, tcd))
    if problem is not None:
        raise ValueError(f"Node {s} is not a cluttered thin node: {problem}")
    g = inst.graph
    inner = tcd.below(s) & frozenset(g.vertices)
    boundary = []
    for a, b in sorted(cut_edges(g, inner)):
        boundary.append((a, b) if a in inner else (b, a))
    (u, v), (x, y) = boundary
    contained = tuple(t for t in inst.terminal_sets if t <= inner)
    items = [(t, inst.demand_of(t)) for t in contained]

    induced, inner_map = g.induced_subgraph(inner)
    independent = GstpInstance(induced, [], []).with_terminals(
        (frozenset(inner_map[w] for w in t), d) for t, d in items
    )
    supply = independent.add_demand({inner_map[u], inner_map[x]})

    outside = frozenset(g.vertices) - inner
    contraction = contract(g, outside, keep_multiplicity=True)
    outer_map = contraction.vertex_map
    demand = GstpInstance(_without_parallel_edges(contraction.graph), [], []).with_terminals(
        (frozenset(outer_map[w] for w in t), d) for t, d in items
    )
    return ThinNodeSubinstances(
        supply, independent, demand, ((u, v), (x, y)), inner, inner_map, outer_map, contained
    )


def apply_thin_reduction(
    inst: GstpInstance, tcd: TreeCutDecomposition, s: int, subsolver: Subsolver
) -> Union[ThinReduction, TrivialNegative]:
    """Applies the first rule whose sub-instance ``subsolver`` finds feasible.

    The decomposition follows the instance: the subtree of ``s`` shrinks to the
    contracted vertex or disappears, and for decompositions of the augmented graph
    a new terminal set {v, y} gets its augmented vertex where the subtree was.
    """
    sub = thin_subinstances(inst, tcd, s)
    g = inst.graph
    augmented = is_augmented_decomposition(inst, tcd)
    (u, v), (_, y) = sub.boundary
    rest = [(t, d) for t, d in inst.items() if t not in sub.contained]

    def moved_to(
        graph: Graph, host_map: VertexMap, extra: List[Tuple[FrozenSet[int], int]]
    ) -> GstpInstance:
        items = [(frozenset(host_map[w] for w in t), d) for t, d in rest] + extra
        return GstpInstance(graph, [t for t, _ in items], [d for _, d in items])

    if subsolver(sub.supply).feasible:
        rule = "supply"
        contraction = contract(g, sub.inner, keep_multiplicity=True)
        graph = _without_parallel_edges(contraction.graph)
        reduced = moved_to(graph, contraction.vertex_map, [])
        kept = min(sub.inner)
        moved = carry_over(
            inst, reduced, replace_subtree(tcd, s, [kept]), contraction.vertex_map, augmented
        )
        h = contraction.representative
        home = moved.node_of(h)
        subdivisions = range(contraction.graph.vertex_count, graph.vertex_count)
        moved = with_bag(moved, home, moved.bags[home] | set(subdivisions))
    elif subsolver(sub.independent).feasible:
        rule = "independent"
        graph, host_map = g.remove_vertices(sub.inner)
        reduced = moved_to(graph, host_map, [])
        moved = carry_over(inst, reduced, remove_subtree(tcd, s), host_map, augmented)
    elif subsolver(sub.demand).feasible:
        rule = "demand"
        graph, host_map = g.remove_vertices(sub.inner)
        ends = frozenset({host_map[v], host_map[y]})
        reduced = moved_to(graph, host_map, [(ends, 1)])
        if augmented and frozenset({v, y}) not in inst.terminal_sets:
            # u stands in for the augmented vertex of the new set {v, y}.
            placeholder = {**host_map, u: graph.vertex_count + reduced.index_of(ends)}
            moved = carry_over(inst, reduced, replace_subtree(tcd, s, [u]), placeholder, augmented)
        else:
            moved = carry_over(inst, reduced, remove_subtree(tcd, s), host_map, augmented)
    else:
        logger.debug("thin node %d: supply, independent and demand instances are all negative", s)
        return TRIVIAL_NEGATIVE

    moved = prune_empty_leaves(moved)
    moved.validate(augment(reduced, AugmentationMode.VERTEX).graph if augmented else reduced.graph)
    logger.debug(
        "thin node %d: applied the %s rule, %d host vertices left",
        s,
        rule,
        reduced.graph.vertex_count,
    )
    return ThinReduction(reduced, moved, (rule,))


def _deepest_candidate(inst: GstpInstance, tcd: TreeCutDecomposition) -> Optional[int]:
    augmented_graph = _augmented_graph(inst, tcd)
    eligible = [t for t in range(tcd.node_count) if _problem(inst, tcd, t, augmented_graph) is None]
    if not eligible:
        return None
    return min(eligible, key=lambda t: (-tcd.depth(t), t))


def reduce_thin_nodes(
    inst: GstpInstance, tcd: TreeCutDecomposition, subsolver: Subsolver
) -> Union[ThinReduction, TrivialNegative]:
    """Applies the thin-node rules until no qualifying node is left.

    The deepest qualifying node goes first. When its subtree holds at least half of
    the decomposed vertices and the other side of its link qualifies as well, the
    decomposition is rerooted at it and the other side is reduced instead.
    """
    rules: List[str] = []
    while True:
        s = _deepest_candidate(inst, tcd)
        if s is None:
            break
        if 2 * len(tcd.below(s)) >= len(tcd.vertices):
            p = tcd.parent[s]
            assert p is not None
            flipped = reroot(tcd, s)
            if _problem(inst, flipped, p, _augmented_graph(inst, flipped)) is None:
                logger.debug("rerooted at node %d to reduce the other side of its link", s)
                tcd, s = flipped, p
        result = apply_thin_reduction(inst, tcd, s, subsolver)
        if result is TRIVIAL_NEGATIVE:
            return TRIVIAL_NEGATIVE
        assert isinstance(result, ThinReduction)
        inst, tcd = result.instance, result.decomposition
        rules += result.rules
    logger.info("thin-node rules applied %d times", len(rules))
    return ThinReduction(inst, tcd, tuple(rules))
