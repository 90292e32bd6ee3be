"""Instance-level reduction rules shared by every solver."""
import enum
import logging
from typing import List, NamedTuple, Sequence, Tuple, Union

from steinerpack.graph import VertexMap, canonical_edge, components
from steinerpack.instances import GstpInstance, Part, Solution, TerminalSet

logger = logging.getLogger(__name__)


class TrivialNegative(enum.Enum):
    """Marker returned by a rule that proved the instance negative."""

    TRIVIAL_NEGATIVE = "trivially negative"


TRIVIAL_NEGATIVE = TrivialNegative.TRIVIAL_NEGATIVE

Reduced = Union[GstpInstance, TrivialNegative]


def remove_small_terminal_sets(inst: GstpInstance) -> GstpInstance:
    """Drops every terminal set with fewer than two vertices."""
    kept = [(t, d) for t, d in inst.items() if len(t) >= 2]
    if len(kept) < len(inst.terminal_sets):
        logger.debug("removed %d small terminal sets", len(inst.terminal_sets) - len(kept))
    return inst.with_terminals(kept)


def degree_negative(inst: GstpInstance) -> bool:
    """True if some vertex lies in more demanded sets than it has edges.

    Only sets with at least two vertices count, matching an instance already cleared
    of small terminal sets.
    """
    load = [0] * inst.graph.vertex_count
    for terminal_set, demand in inst.items():
        if len(terminal_set) < 2:
            continue
        for v in terminal_set:
            load[v] += demand
    return any(load[v] > inst.graph.degree(v) for v in inst.graph.vertices)


def apply_basic_rules(inst: GstpInstance) -> Reduced:
    """Removes small terminal sets, then checks for a degree-negative vertex."""
    reduced = remove_small_terminal_sets(inst)
    if degree_negative(reduced):
        logger.debug("degree-negative instance")
        return TRIVIAL_NEGATIVE
    return reduced


class ComponentInstance(NamedTuple):
    instance: GstpInstance
    vertex_map: VertexMap


def split_components(inst: GstpInstance) -> Union[List[ComponentInstance], TrivialNegative]:
    """Splits an instance into one sub-instance per connected component.

    A terminal set spread over two components makes the instance negative. The
    instance is positive exactly when every returned sub-instance is positive.
    Empty terminal sets need no edges and are dropped.
    """
    parts = components(inst.graph)
    owner = {v: index for index, part in enumerate(parts) for v in part}
    grouped: List[List[Tuple[TerminalSet, int]]] = [[] for _ in parts]
    for terminal_set, demand in inst.items():
        homes = {owner[v] for v in terminal_set}
        if len(homes) > 1:
            logger.debug("terminal set %s spans several components", sorted(terminal_set))
            return TRIVIAL_NEGATIVE
        if homes:
            grouped[homes.pop()].append((terminal_set, demand))
    result = []
    for part, items in zip(parts, grouped):
        sub, vertex_map = inst.graph.induced_subgraph(part)
        sets = [frozenset(vertex_map[v] for v in t) for t, _ in items]
        result.append(ComponentInstance(GstpInstance(sub, sets, [d for _, d in items]), vertex_map))
    return result


def restore_singletons(
    inst: GstpInstance, reduced: GstpInstance, solution: Sequence[Part]
) -> Solution:
    """Lifts a solution of ``remove_small_terminal_sets(inst)`` back to ``inst``.

    Parts keep their edges and are reindexed; every removed set receives ``d(T)``
    parts with no edges.
    """
    lifted = [Part(edges, inst.index_of(reduced.terminal_sets[index])) for edges, index in solution]
    for index, (terminal_set, demand) in enumerate(inst.items()):
        if len(terminal_set) < 2:
            lifted += [Part(frozenset(), index)] * demand
    return lifted


def lift_component_solution(
    inst: GstpInstance, piece: ComponentInstance, solution: Sequence[Part]
) -> Solution:
    """Maps a solution of one component sub-instance back onto ``inst``."""
    inverse = {w: v for v, w in piece.vertex_map.items()}
    lifted = []
    for edges, index in solution:
        original = frozenset(canonical_edge(inverse[u], inverse[v]) for u, v in edges)
        terminal_set = frozenset(inverse[v] for v in piece.instance.terminal_sets[index])
        lifted.append(Part(original, inst.index_of(terminal_set)))
    return lifted
