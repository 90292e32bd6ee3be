"""Dynamic programming for GSTP over a nice tree decomposition.

Every demanded copy of a terminal set gets an index in ``[0, ΣD)``. At a node s a
table entry records, per index, whether its subgraph is finished below s, crosses
the bag, or has not been started, and for crossing indices which bag vertices are
already connected using only edges that leave the bag. Edges are handed out when
their first endpoint is forgotten, so the two subtrees of a join never compete for
an edge and their entries merge independently.

A crossing index with an empty family has been started but holds no bag vertex
yet. Blocks are always nonempty.
"""
import collections
import dataclasses
import itertools
import logging
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Edge, Graph, canonical_edge
from steinerpack.instances import GstpInstance, Part, TerminalSet
from steinerpack.reductions import TRIVIAL_NEGATIVE, apply_basic_rules, restore_singletons
from steinerpack.solvers.solver import SolveResult, Solver, Status
from steinerpack.tree_decomposition import (
    NodeKind,
    TreeDecomposition,
    make_nice,
    tree_decomposition,
)

logger = logging.getLogger(__name__)

Blocks = FrozenSet[FrozenSet[int]]
Table = Dict["DpTuple", Any]


@dataclasses.dataclass(frozen=True)
class DpTuple:
    """One table entry.

    ``bottom`` holds finished indices and ``top`` unstarted ones. Every crossing index
    maps to its family of blocks.
    """

    bottom: FrozenSet[int]
    top: FrozenSet[int]
    partitions: Tuple[Tuple[int, Blocks], ...] = ()

    @classmethod
    def build(
        cls,
        bottom: Iterable[int],
        top: Iterable[int],
        partitions: Mapping[int, Iterable[Iterable[int]]],
    ) -> "DpTuple":
        blocks = tuple(
            sorted((i, frozenset(frozenset(b) for b in family)) for i, family in partitions.items())
        )
        return cls(frozenset(bottom), frozenset(top), blocks)

    @property
    def crossing(self) -> FrozenSet[int]:
        return frozenset(i for i, _ in self.partitions)

    def blocks(self, i: int) -> Blocks:
        return dict(self.partitions)[i]

    def is_valid(self, total: int, bag: Iterable[int]) -> bool:
        """Whether the index sets partition ``[0, total)``.

        Every family must also consist of disjoint nonempty subsets of the bag.
        """
        allowed = frozenset(bag)
        crossing = self.crossing
        if len(self.bottom) + len(self.top) + len(crossing) != total:
            return False
        if (self.bottom | self.top | crossing) != frozenset(range(total)):
            return False
        for _, family in self.partitions:
            members = [v for block in family for v in block]
            if len(members) != len(set(members)):
                return False
            if any(not block or not block <= allowed for block in family):
                return False
        return True


class DpStatistics(NamedTuple):
    nodes: int
    largest_table: int
    total_tuples: int


def enumerate_terminals(inst: GstpInstance) -> List[TerminalSet]:
    """The terminal set of every index, consecutive per set in family order."""
    return [t for t, d in inst.items() for _ in range(d)]


def _components(hyperedges: Iterable[FrozenSet[int]]) -> List[FrozenSet[int]]:
    groups: List[Set[int]] = []
    for edge in hyperedges:
        touching = [g for g in groups if g & edge]
        merged = set(edge).union(*touching)
        groups = [g for g in groups if not g & edge] + [merged]
    return [frozenset(g) for g in groups]


def dp_leaf(total: int) -> Set[DpTuple]:
    """Every split of the indices into started and unstarted ones, with nothing in the empty bag."""
    return set(_leaf(total))


def _leaf(total: int) -> Table:
    table: Table = {}
    indices = range(total)
    for size in range(total + 1):
        for started in itertools.combinations(indices, size):
            table[DpTuple.build((), set(indices) - set(started), {i: () for i in started})] = None
    return table


def _introduce(table: Mapping[DpTuple, Any], v: int, terminals: Sequence[TerminalSet]) -> Table:
    needed = frozenset(i for i, t in enumerate(terminals) if v in t)
    result: Table = {}
    for tau in table:
        open_indices = tau.crossing | tau.top
        if not needed <= open_indices:
            continue
        optional = sorted(open_indices - needed)
        families = dict(tau.partitions)
        for size in range(len(optional) + 1):
            for extra in itertools.combinations(optional, size):
                chosen = needed | frozenset(extra)
                partitions = dict(families)
                for i in chosen:
                    partitions[i] = families.get(i, frozenset()) | {frozenset([v])}
                entry = DpTuple(tau.bottom, tau.top - chosen, tuple(sorted(partitions.items())))
                result.setdefault(entry, tau)
    return result


def dp_introduce(
    table: Iterable[DpTuple], v: int, bag: Iterable[int], terminal_index_map: Sequence[TerminalSet]
) -> Set[DpTuple]:
    """The table after ``v`` joins the bag; every index whose terminal set holds ``v`` must take it.

    ``bag`` is the bag after the introduction and only serves as a consistency check.
    """
    if v not in frozenset(bag):
        raise ValueError(f"Vertex {v} is not in the bag it is introduced to")
    return set(_introduce(dict.fromkeys(table), v, terminal_index_map))


def _merge(alpha: DpTuple, beta: DpTuple) -> DpTuple:
    b = dict(beta.partitions)
    partitions = tuple((i, frozenset(_components(family | b[i]))) for i, family in alpha.partitions)
    return DpTuple(alpha.bottom | beta.bottom, alpha.top - beta.bottom, partitions)


def _join(first: Mapping[DpTuple, Any], second: Mapping[DpTuple, Any]) -> Table:
    by_crossing: Dict[FrozenSet[int], List[DpTuple]] = collections.defaultdict(list)
    for beta in second:
        by_crossing[beta.crossing].append(beta)
    result: Table = {}
    for alpha in first:
        for beta in by_crossing.get(alpha.crossing, []):
            result.setdefault(_merge(alpha, beta), (alpha, beta))
    return result


def dp_join(table_a: Iterable[DpTuple], table_b: Iterable[DpTuple]) -> Set[DpTuple]:
    """Merges entries of two children that agree on their crossing indices."""
    return set(_join(dict.fromkeys(table_a), dict.fromkeys(table_b)))


def _forget(
    table: Mapping[DpTuple, Any],
    v: int,
    edges: Sequence[Edge],
    introduced: FrozenSet[int],
    terminals: Sequence[TerminalSet],
) -> Table:
    result: Table = {}
    for gamma in table:
        crossing = sorted(gamma.crossing)
        families = dict(gamma.partitions)
        for owners in itertools.product([None] + crossing, repeat=len(edges)):
            assigned: Dict[int, List[FrozenSet[int]]] = collections.defaultdict(list)
            for edge, owner in zip(edges, owners):
                if owner is not None:
                    assigned[owner].append(frozenset(edge))
            finished = set()
            partitions = {}
            for i in crossing:
                parts = _components(list(families[i]) + assigned[i])
                after = [part - {v} for part in parts]
                if any(not part for part in after):
                    # The component of v lost its last bag vertex.
                    if len(after) > 1 or not terminals[i] <= introduced:
                        break
                    finished.add(i)
                else:
                    partitions[i] = frozenset(after)
            else:
                tau = DpTuple(gamma.bottom | finished, gamma.top, tuple(sorted(partitions.items())))
                result.setdefault(tau, (gamma, tuple(zip(edges, owners))))
    return result


def dp_forget(
    table: Iterable[DpTuple],
    v: int,
    bag_before: Iterable[int],
    edges_ev: Iterable[Edge],
    y_c: Iterable[int],
    terminal_index_map: Sequence[TerminalSet],
) -> Set[DpTuple]:
    """The table after ``v`` leaves the bag.

    Each edge from ``v`` into the bag goes to one crossing index or to none.

    ``y_c`` holds every vertex introduced at or below the child; an index may only
    finish once its whole terminal set is among them.
    """
    before = frozenset(bag_before)
    edges = sorted(canonical_edge(a, b) for a, b in edges_ev)
    if v not in before or any(v not in e or not set(e) <= before for e in edges):
        raise ValueError("Forgotten edges must join the forgotten vertex to the bag")
    return set(_forget(dict.fromkeys(table), v, edges, frozenset(y_c), terminal_index_map))


class DpRun(NamedTuple):
    root_tuple: DpTuple
    tables: List[Table]
    statistics: DpStatistics

    @property
    def feasible(self) -> bool:
        return self.root_tuple in self.tables[-1]


def run_dp(g: Graph, nice: TreeDecomposition, terminals: Sequence[TerminalSet]) -> DpRun:
    """Fills every table of a nice decomposition bottom-up; ``tables[-1]`` belongs to the root."""
    violation = nice.nice_violation()
    if violation is not None:
        raise ValueError(f"The decomposition is not nice: {violation}")
    kinds = nice.kinds
    assert kinds is not None
    total = len(terminals)
    tables: Dict[int, Table] = {}
    introduced: Dict[int, FrozenSet[int]] = {}
    largest = 0
    count = 0
    order = nice.postorder()
    for t in order:
        kind = kinds[t]
        kids = nice.children(t)
        if kind is NodeKind.LEAF:
            tables[t] = _leaf(total)
            introduced[t] = frozenset()
        elif kind is NodeKind.INTRODUCE:
            v = nice.changed_vertex(t)
            tables[t] = _introduce(tables[kids[0]], v, terminals)
            introduced[t] = introduced[kids[0]] | {v}
        elif kind is NodeKind.FORGET:
            v = nice.changed_vertex(t)
            edges = [canonical_edge(v, x) for x in g.neighbors(v) if x in nice.bags[t]]
            tables[t] = _forget(tables[kids[0]], v, edges, introduced[kids[0]], terminals)
            introduced[t] = introduced[kids[0]]
        else:
            a, b = kids
            tables[t] = _join(tables[a], tables[b])
            introduced[t] = introduced[a] | introduced[b]
        largest = max(largest, len(tables[t]))
        count += len(tables[t])
    statistics = DpStatistics(len(order), largest, count)
    logger.debug("tree decomposition DP: %d nodes, largest table %d, %d tuples", *statistics)
    root_tuple = DpTuple(frozenset(range(total)), frozenset(), ())
    return DpRun(root_tuple, [tables[t] for t in order], statistics)


def _witness(nice: TreeDecomposition, run: DpRun) -> Dict[int, Set[Edge]]:
    """Edges handed to every index along the back-pointers of the root entry."""
    order = nice.postorder()
    table_of = dict(zip(order, run.tables))
    edges: Dict[int, Set[Edge]] = collections.defaultdict(set)
    stack = [(nice.root, run.root_tuple, frozenset())]
    while stack:
        t, entry, ignored = stack.pop()
        kids = nice.children(t)
        previous = table_of[t][entry]
        if not kids:
            continue
        if len(kids) == 2:
            alpha, beta = previous
            # An index finished on both sides keeps only the first copy.
            stack.append((kids[0], alpha, ignored))
            stack.append((kids[1], beta, ignored | (alpha.bottom & beta.bottom)))
        elif isinstance(previous, DpTuple):
            stack.append((kids[0], previous, ignored))
        else:
            gamma, owners = previous
            for edge, owner in owners:
                if owner is not None and owner not in ignored:
                    edges[owner].add(edge)
            stack.append((kids[0], gamma, ignored))
    return edges


def decide_tw(
    inst: GstpInstance,
    td: Optional[TreeDecomposition] = None,
    caps: SolverCaps = SolverCaps(),
    witness: bool = False,
) -> SolveResult:
    """Decides ``inst`` with the tree decomposition DP, optionally building a packing.

    A supplied decomposition is validated against the host graph. Raises
    ``CapExceededError`` when the total demand or the width exceeds the caps.
    """
    reduced = apply_basic_rules(inst)
    if reduced is TRIVIAL_NEGATIVE:
        return SolveResult(Status.INFEASIBLE, solver="twdp", details={"rule": "degree negative"})
    terminals = enumerate_terminals(reduced)
    if len(terminals) > caps.twdp_demand:
        raise CapExceededError("twdp", "twdp_demand", caps.twdp_demand, len(terminals))
    if td is None:
        td = tree_decomposition(reduced.graph, caps.td_exact)
    else:
        td.validate(reduced.graph)
    if td.width > caps.twdp_width:
        raise CapExceededError("twdp", "twdp_width", caps.twdp_width, td.width)
    nice = make_nice(td)
    run = run_dp(reduced.graph, nice, terminals)
    details = {"width": td.width, "total_demand": len(terminals), **run.statistics._asdict()}
    logger.info(
        "twdp: width %d, total demand %d, feasible=%s", td.width, len(terminals), run.feasible
    )
    if not run.feasible:
        return SolveResult(Status.INFEASIBLE, solver="twdp", details=details)
    solution = None
    if witness:
        owner_edges = _witness(nice, run)
        parts = [
            Part(frozenset(owner_edges[i]), reduced.index_of(terminal_set))
            for i, terminal_set in enumerate(terminals)
        ]
        solution = restore_singletons(inst, reduced, parts)
    return SolveResult(Status.FEASIBLE, solution, "twdp", details)


class TreewidthSolver(Solver):
    name = "twdp"

    def __init__(self, caps: SolverCaps = SolverCaps(), witness: bool = False) -> None:
        self.caps = caps
        self.witness = witness

    def solve(self, inst: GstpInstance) -> SolveResult:
        return decide_tw(inst, caps=self.caps, witness=self.witness)
