"""Fracture deletion sets, fracture modulators and nice modulators.

A k-fracture deletion set of size d is a set S of exactly d vertices such that every
component of G - S has at most k vertices. A fracture modulator is a k-fracture
deletion set of size k.

The search below branches on a connected set of k + 1 vertices, since one of them
must be deleted. It is tempting to also assume that a minimum modulator meets every
component in exactly one vertex, but that is false: P5 has no modulator of size 1,
while two disjoint copies of P5 have the modulator made of their two centers, one
vertex per copy. Hence disconnected graphs are split and each oversized component
is searched for its own smallest deletion set, with d decreasing, instead of
recursing with the modulator size fixed.
"""
import dataclasses
import logging
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Set, Tuple

from steinerpack.graph import Graph, VertexMap, subdivide
from steinerpack.instances import AugmentationMode, GstpInstance, augment

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FractureQuery:
    k: int
    d: int

    def __post_init__(self) -> None:
        if self.k < 0 or self.d < 0:
            raise ValueError("Fracture queries need nonnegative k and d")


def _components_of(adjacency: Dict[int, List[int]], alive: FrozenSet[int]) -> List[FrozenSet[int]]:
    seen: Set[int] = set()
    found = []
    for start in sorted(alive):
        if start in seen:
            continue
        seen.add(start)
        component = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w in alive and w not in seen:
                    seen.add(w)
                    component.add(w)
                    stack.append(w)
        found.append(frozenset(component))
    return found


def _connected_prefix(
    adjacency: Dict[int, List[int]], alive: FrozenSet[int], size: int
) -> Optional[List[int]]:
    """The first ``size`` vertices reached by BFS from the lowest alive vertex."""
    start = min(alive)
    order = [start]
    seen = {start}
    head = 0
    while head < len(order) and len(order) < size:
        for w in adjacency[order[head]]:
            if w in alive and w not in seen:
                seen.add(w)
                order.append(w)
                if len(order) == size:
                    break
        head += 1
    return order if len(order) == size else None


def _pad(chosen: FrozenSet[int], alive: FrozenSet[int], d: int) -> FrozenSet[int]:
    extra = [v for v in sorted(alive) if v not in chosen][: d - len(chosen)]
    return chosen | frozenset(extra)


def fracture_deletion(g: Graph, q: FractureQuery) -> Optional[FrozenSet[int]]:
    """A k-fracture deletion set of size exactly d, or None if there is none."""
    adjacency = {v: g.neighbors(v) for v in g.vertices}
    calls = 0

    def search(alive: FrozenSet[int], d: int) -> Optional[FrozenSet[int]]:
        nonlocal calls
        calls += 1
        if len(alive) < d:
            return None
        parts = _components_of(adjacency, alive)
        if len(parts) == 1:
            branch = _connected_prefix(adjacency, alive, q.k + 1)
            if branch is None:
                return _pad(frozenset(), alive, d)
            if d == 0:
                return None
            for u in sorted(branch):
                found = search(alive - {u}, d - 1)
                if found is not None:
                    return found | {u}
            return None
        big = [c for c in parts if len(c) > q.k]
        if not big:
            return _pad(frozenset(), alive, d)
        if len(big) == 1:
            # The oversized component may hold fewer than d vertices; the rest is padding.
            found = search(big[0], min(d, len(big[0])))
            return None if found is None else _pad(found, alive, d)
        if len(big) > d:
            return None
        chosen: FrozenSet[int] = frozenset()
        for position, component in enumerate(big):
            remaining = len(big) - position - 1
            for size in range(1, d):
                if len(chosen) + size + remaining > d:
                    return None
                found = search(component, size)
                if found is not None:
                    chosen |= found
                    break
            else:
                return None
        return _pad(chosen, alive, d)

    result = search(frozenset(g.vertices), q.d)
    logger.debug(
        "(%d, %d)-fracture deletion: %d calls, found=%s", q.k, q.d, calls, result is not None
    )
    return result


def is_fracture_deletion_set(g: Graph, s: Iterable[int], k: int) -> bool:
    adjacency = {v: g.neighbors(v) for v in g.vertices}
    alive = frozenset(g.vertices) - frozenset(s)
    return all(len(c) <= k for c in _components_of(adjacency, alive))


def fracture_modulator(g: Graph) -> Tuple[FrozenSet[int], int]:
    """A minimum fracture modulator together with its size."""
    if g.vertex_count == 0:
        raise ValueError("The empty graph has no fracture modulator")
    for k in range(1, g.vertex_count + 1):
        found = fracture_deletion(g, FractureQuery(k, k))
        if found is not None:
            logger.info("fracture modulator of size %d found", k)
            return found, k
    raise AssertionError("deleting every vertex always works")


def fracture_number(g: Graph) -> int:
    return fracture_modulator(g)[1]


class NiceModulatorResult(NamedTuple):
    instance: GstpInstance
    modulator: FrozenSet[int]
    vertex_map: VertexMap


def _spread(aug_graph: Graph, removed: FrozenSet[int], terminal_set: FrozenSet[int]) -> int:
    """Number of components of ``aug_graph - removed`` that meet ``terminal_set``."""
    adjacency = {v: aug_graph.neighbors(v) for v in aug_graph.vertices}
    alive = frozenset(aug_graph.vertices) - removed
    return sum(1 for c in _components_of(adjacency, alive) if c & terminal_set)


def is_nice_modulator(inst: GstpInstance, s: Iterable[int]) -> bool:
    """Checks that ``s`` is a nice fracture modulator of the vertex-augmented graph."""
    modulator = frozenset(s)
    augmented = augment(inst, AugmentationMode.VERTEX)
    n = inst.graph.vertex_count
    if not is_fracture_deletion_set(augmented.graph, modulator, len(modulator)):
        return False
    inside = [v for v in modulator if v < n]
    if any(inst.graph.has_edge(u, v) for u in inside for v in inside):
        return False
    return all(
        _spread(augmented.graph, modulator, inst.terminal_sets[index]) >= 2
        for index, v in augmented.aug_vertex_of.items()
        if v in modulator
    )


def make_nice_modulator(inst: GstpInstance, x: Iterable[int]) -> NiceModulatorResult:
    """Turns a fracture modulator of the vertex-augmented graph into a nice one.

    Every host edge inside the modulator is subdivided, augmented vertices whose
    terminal set meets at most one component are dropped from the modulator, and
    isolated host vertices are added to it until it is a fracture modulator again.
    New host vertices are appended, so host indices are stable while augmented
    vertices shift by the number of added vertices.
    """
    modulator = frozenset(x)
    augmented = augment(inst, AugmentationMode.VERTEX)
    if not is_fracture_deletion_set(augmented.graph, modulator, len(modulator)):
        raise ValueError("The given set is not a fracture modulator of the vertex-augmented graph")
    n = inst.graph.vertex_count
    host = inst.graph
    inside = sorted(v for v in modulator if v < n)
    for u in inside:
        for v in inside:
            if u < v and inst.graph.has_edge(u, v):
                host, _ = subdivide(host, (u, v))
    subdivided = host.vertex_count - n
    if subdivided:
        logger.debug("subdivided %d edges inside the modulator", subdivided)

    def lifted(added: int) -> Dict[int, int]:
        return {v: (v if v < n else v + added) for v in range(n + len(inst.terminal_sets))}

    shift = lifted(subdivided)
    h_inst = GstpInstance(host, inst.terminal_sets, inst.demands)
    h_aug = augment(h_inst, AugmentationMode.VERTEX)
    x_h = frozenset(shift[v] for v in modulator)
    dropped = frozenset(
        v
        for index, v in h_aug.aug_vertex_of.items()
        if v in x_h and _spread(h_aug.graph, x_h, inst.terminal_sets[index]) <= 1
    )
    kept = x_h - dropped
    adjacency = {v: h_aug.graph.neighbors(v) for v in h_aug.graph.vertices}
    rest = frozenset(h_aug.graph.vertices) - kept
    largest = max((len(c) for c in _components_of(adjacency, rest)), default=0)
    padding = max(0, largest - len(kept))
    final_host = host.add_vertices(padding)
    n_host = host.vertex_count
    result = GstpInstance(final_host, inst.terminal_sets, inst.demands)
    vertex_map = lifted(subdivided + padding)
    s = frozenset(v if v < n_host else v + padding for v in kept)
    s |= frozenset(range(n_host, n_host + padding))
    logger.info(
        "nice modulator: %d vertices (dropped %d, padded %d)", len(s), len(dropped), padding
    )
    return NiceModulatorResult(result, s, vertex_map)
