"""Deciding GSTP through a fracture modulator of the vertex-augmented graph.

Fix a nice fracture modulator S. Each component C of the augmented graph minus S
only talks to the rest of the instance through S, and a :class:`Configuration`
records how:

- ``demand``: connections between modulator vertices that trees of terminal sets
  local to C borrow from other components;
- ``supply``: connections between modulator vertices that C lends out;
- ``assign``: for every tree of a terminal set whose augmented vertex lies in S,
  the modulator vertices reached from each vertex of C.

A component admits a configuration when a local packing realizes it. Components
with isomorphic neighbourhoods admit the same configurations, so the instance
becomes an integer program that picks how many components of each class take
each configuration.

Signatures are computed constructively: every configuration is read off a
packing of inclusion-minimal pieces in C plus S, and configurations dominated by
another one with the same assignment (no more demand, no less supply) are
dropped, since demand and supply only enter the program through the balance
constraints.
"""
import collections
import dataclasses
import functools
import itertools
import logging
import math
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.fracture import fracture_modulator, is_nice_modulator, make_nice_modulator
from steinerpack.graph import Edge, Graph, canonical_edge
from steinerpack.ilp import IlpModel, ilp_feasible, write_lp
from steinerpack.instances import AugmentationMode, GstpInstance, TerminalSet, augment
from steinerpack.reductions import TRIVIAL_NEGATIVE, apply_basic_rules, degree_negative
from steinerpack.solvers.solver import SolveResult, Status

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]
AssignKey = Tuple[int, int, int]
Counts = Tuple[Tuple[Subset, int], ...]
Assignment = Tuple[Tuple[AssignKey, Subset], ...]
Hypergraph = Tuple[FrozenSet[int], ...]
SubsetLike = Union[Subset, FrozenSet[int]]

MAX_HYPERGRAPH_VERTICES = 4


def _key(vertices: Iterable[int]) -> Subset:
    return tuple(sorted(vertices))


def _name(vertices: Iterable[int]) -> str:
    return "-".join(str(v) for v in sorted(vertices)) or "none"


def _merge_counts(first: Counts, second: Counts) -> Counts:
    total: Dict[Subset, int] = collections.Counter(dict(first))
    for subset, count in second:
        total[subset] += count
    return tuple(sorted((s, c) for s, c in total.items() if c))


def _subsets(universe: Sequence[int], smallest: int) -> List[FrozenSet[int]]:
    return [
        frozenset(chosen)
        for size in range(smallest, len(universe) + 1)
        for chosen in itertools.combinations(universe, size)
    ]


def _supersets(base: FrozenSet[int], universe: Sequence[int]) -> List[FrozenSet[int]]:
    rest = [v for v in universe if v not in base]
    return [base | extra for extra in _subsets(rest, 0)]


@dataclasses.dataclass(frozen=True)
class Configuration:
    """How one component interacts with the rest of the instance.

    Keys of ``demand`` and ``supply`` are sorted tuples of modulator host vertices and
    only positive counts are stored. ``assign`` maps ``(terminal index, tree, slot)``
    to the nonempty set of modulator vertices reached from the vertex in that slot;
    missing keys stand for the empty set.
    """

    demand: Counts = ()
    supply: Counts = ()
    assign: Assignment = ()

    @classmethod
    def build(
        cls,
        demand: Optional[Mapping[SubsetLike, int]] = None,
        supply: Optional[Mapping[SubsetLike, int]] = None,
        assign: Optional[Mapping[AssignKey, SubsetLike]] = None,
    ) -> "Configuration":
        def counts(raw: Optional[Mapping[SubsetLike, int]]) -> Counts:
            pairs = tuple((_key(k), v) for k, v in (raw or {}).items())
            return _merge_counts((), pairs)

        if any(c < 0 for c in list((demand or {}).values()) + list((supply or {}).values())):
            raise ValueError("Configuration counts must be nonnegative")
        entries = tuple(
            sorted((key, _key(value)) for key, value in (assign or {}).items() if value)
        )
        return cls(counts(demand), counts(supply), entries)

    def demand_of(self, subset: Iterable[int]) -> int:
        return dict(self.demand).get(_key(subset), 0)

    def supply_of(self, subset: Iterable[int]) -> int:
        return dict(self.supply).get(_key(subset), 0)

    def assign_of(self, terminal_index: int, tree: int, slot: int) -> FrozenSet[int]:
        return frozenset(dict(self.assign).get((terminal_index, tree, slot), ()))

    def assigned(self, terminal_index: int, tree: int) -> Set[FrozenSet[int]]:
        """The nonempty modulator sets that tree ``tree`` of the set reaches through here."""
        return {
            frozenset(value)
            for (t, i, _), value in self.assign
            if (t, i) == (terminal_index, tree)
        }

    def is_viable(self, modulator_size: int) -> bool:
        u = math.comb(2 * modulator_size, 2)
        demands = [c for _, c in self.demand]
        supplies = [c for _, c in self.supply]
        return (
            all(c <= u for c in demands + supplies)
            and sum(demands) <= u * modulator_size
            and sum(supplies) <= u
        )


Signature = FrozenSet[Configuration]


def _configuration_order(config: Configuration) -> Tuple[Counts, Counts, Assignment]:
    return (config.demand, config.supply, config.assign)


class ModulatorContext:
    """An instance together with a nice fracture modulator of its vertex-augmented graph."""

    def __init__(self, inst: GstpInstance, modulator: Iterable[int]) -> None:
        self.instance = inst
        self.modulator = frozenset(modulator)
        if not is_nice_modulator(inst, self.modulator):
            raise ValueError("The given set is not a nice fracture modulator")
        self.augmented = augment(inst, AugmentationMode.VERTEX)
        n = inst.graph.vertex_count
        self.host_modulator: Subset = _key(v for v in self.modulator if v < n)
        self.size = len(self.modulator)
        self.u = math.comb(2 * self.size, 2)
        self.star_sets = [
            t for t, terminal_set in enumerate(inst.terminal_sets) if terminal_set <= self.modulator
        ]
        self.modulator_sets = [
            t for t, v in self.augmented.aug_vertex_of.items() if v in self.modulator
        ]
        g = self.augmented.graph.simple_networkx()
        g.remove_nodes_from(self.modulator)
        self.components: List[FrozenSet[int]] = sorted(
            (frozenset(c) for c in nx.connected_components(g)), key=min
        )

    def local_sets(self, component: FrozenSet[int]) -> List[int]:
        """Terminal sets whose augmented vertex lies in the component and that meet it."""
        return [
            t
            for t, v in self.augmented.aug_vertex_of.items()
            if v in component and self.instance.terminal_sets[t] & component
        ]

    def host_edges(self, component: FrozenSet[int]) -> List[Edge]:
        """Host edges of the component's closed neighbourhood.

        The modulator is independent in the host, so no edge joins two of its vertices.
        """
        n = self.instance.graph.vertex_count
        edges = {
            canonical_edge(v, w)
            for v in component
            if v < n
            for w in self.instance.graph.neighbors(v)
        }
        return sorted(edges)

    def sigma(self, component: FrozenSet[int]) -> Tuple[int, ...]:
        """The canonical surjection from modulator slots onto the component."""
        ordered = sorted(component)
        return tuple(ordered[min(j, len(ordered) - 1)] for j in range(self.size))


def check_scale(ctx: ModulatorContext, caps: SolverCaps) -> None:
    if ctx.size > caps.fnilp_modulator:
        raise CapExceededError("fnilp", "fnilp_modulator", caps.fnilp_modulator, ctx.size)
    if len(ctx.modulator_sets) > caps.fnilp_modulator_terminals:
        raise CapExceededError(
            "fnilp",
            "fnilp_modulator_terminals",
            caps.fnilp_modulator_terminals,
            len(ctx.modulator_sets),
        )


class ConfigurationInstance(NamedTuple):
    """The local instance a component must solve to admit a configuration.

    ``fresh`` maps every added demand vertex to its neighbourhood and
    ``supply_sets`` lists the terminal sets that stand for supply.
    """

    instance: GstpInstance
    fresh: Dict[int, Subset]
    supply_sets: FrozenSet[FrozenSet[int]]


def _configuration_host(
    ctx: ModulatorContext, component: FrozenSet[int], config: Configuration
) -> Tuple[Graph, Dict[int, Subset]]:
    base = ctx.augmented.graph.vertex_count
    fresh: Dict[int, Subset] = {}
    edges = list(ctx.host_edges(component))
    for subset, count in config.demand:
        for _ in range(count):
            v = base + len(fresh)
            fresh[v] = subset
            edges += [(s, v) for s in subset]
    return Graph(base + len(fresh), edges), fresh


def component_instance(
    ctx: ModulatorContext, component: Iterable[int], config: Configuration, sigma: Sequence[int]
) -> ConfigurationInstance:
    """Builds the local instance of ``component`` under ``config`` and the slot map ``sigma``.

    The host is the component's closed neighbourhood in the host graph plus one fresh
    vertex per unit of demand, adjacent to exactly its modulator set. Assignments of
    trees beyond the demand of their terminal set are ignored.
    """
    component = frozenset(component)
    if len(sigma) != ctx.size or set(sigma) != component:
        raise ValueError("sigma must map the modulator slots onto the component")
    graph, fresh = _configuration_host(ctx, component, config)
    inst = ctx.instance
    items: List[Tuple[FrozenSet[int], int]] = [
        (inst.terminal_sets[t], inst.demands[t]) for t in ctx.local_sets(component)
    ]
    items += [(frozenset(subset), count) for subset, count in config.supply]
    for t in ctx.modulator_sets:
        for i in range(inst.demands[t]):
            reached: Dict[FrozenSet[int], Set[int]] = collections.defaultdict(set)
            for j, v in enumerate(sigma):
                subset = config.assign_of(t, i, j)
                if subset:
                    reached[subset].add(v)
            items += [(subset | frozenset(vertices), 1) for subset, vertices in reached.items()]
    local = GstpInstance(graph, [s for s, _ in items], [d for _, d in items])
    return ConfigurationInstance(local, fresh, frozenset(frozenset(s) for s, _ in config.supply))


class _Tree(NamedTuple):
    mask: int
    vertices: FrozenSet[int]
    degree: Dict[int, int]


def _all_trees(edges: Sequence[Edge]) -> List[_Tree]:
    """Every edge subset that forms a tree, smallest first."""
    vertex_count = len({v for e in edges for v in e})
    found = []
    for size in range(1, min(len(edges), vertex_count - 1) + 1):
        for chosen in itertools.combinations(range(len(edges)), size):
            parent: Dict[int, int] = {}

            def root(v: int) -> int:
                while parent.get(v, v) != v:
                    v = parent[v]
                return v

            acyclic = True
            for index in chosen:
                a, b = (root(v) for v in edges[index])
                if a == b:
                    acyclic = False
                    break
                parent[a] = b
            if not acyclic:
                continue
            degree: Dict[int, int] = collections.Counter(
                v for index in chosen for v in edges[index]
            )
            if len(degree) == size + 1:
                mask = sum(1 << index for index in chosen)
                found.append(_Tree(mask, frozenset(degree), dict(degree)))
    return found


def _spanning_trees(edges: Sequence[Edge], terminals: FrozenSet[int]) -> Iterator[int]:
    """Edge masks of the trees containing ``terminals`` whose leaves are all terminals."""
    incident: Dict[int, List[Tuple[int, int]]] = collections.defaultdict(list)
    for index, (u, v) in enumerate(edges):
        incident[u].append((index, v))
        incident[v].append((index, u))

    def reaches(vertices: FrozenSet[int], excluded: int) -> bool:
        seen = set(vertices)
        stack = list(vertices)
        while stack:
            v = stack.pop()
            for index, w in incident[v]:
                if not excluded >> index & 1 and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return terminals <= seen

    def grow(vertices: FrozenSet[int], tree: int, excluded: int) -> Iterator[int]:
        if terminals <= vertices:
            degree = collections.Counter(
                v for index, e in enumerate(edges) if tree >> index & 1 for v in e
            )
            if all(d != 1 or v in terminals for v, d in degree.items()):
                yield tree
            return
        if not reaches(vertices, excluded):
            return
        frontier = min(
            (
                (index, w)
                for v in vertices
                for index, w in incident[v]
                if not (excluded | tree) >> index & 1 and w not in vertices
            ),
            default=None,
        )
        if frontier is None:
            return
        index, w = frontier
        yield from grow(vertices | {w}, tree | 1 << index, excluded)
        yield from grow(vertices, tree, excluded | 1 << index)

    yield from grow(frozenset([min(terminals)]), 0, 0)


def _assigned_where_needed(
    ctx: ModulatorContext, config: Configuration, sigma: Sequence[int]
) -> bool:
    for t in ctx.modulator_sets:
        terminal_set = ctx.instance.terminal_sets[t]
        for i in range(ctx.instance.demands[t]):
            positions = enumerate(sigma)
            if any(v in terminal_set and not config.assign_of(t, i, j) for j, v in positions):
                return False
    return True


def _surjections(values: Sequence[int], length: int) -> Iterator[Tuple[int, ...]]:
    for sigma in itertools.product(values, repeat=length):
        if len(set(sigma)) == len(values):
            yield sigma


def admits(
    ctx: ModulatorContext, component: Iterable[int], config: Configuration, edge_budget: int = 16
) -> bool:
    """Exhaustively decides whether ``component`` admits ``config``.

    Tries every slot map and every packing of trees in the local host, requiring
    supply trees to avoid fresh vertices, every fresh vertex to sit in exactly one
    tree with degree at least two there, and every tree to use an edge next to the
    component. Raises ``CapExceededError`` when the local host has more than
    ``edge_budget`` edges.
    """
    component = frozenset(component)
    if not config.is_viable(ctx.size):
        return False
    host, fresh = _configuration_host(ctx, component, config)
    edges = host.edge_list()
    if len(edges) > edge_budget:
        raise CapExceededError("fnilp", "oracle_edges", edge_budget, len(edges))
    inner = sum(1 << i for i, (a, b) in enumerate(edges) if a not in fresh and b not in fresh)
    fresh_bit = {v: 1 << k for k, v in enumerate(sorted(fresh))}
    trees = [
        (tree, sum(fresh_bit[v] for v in tree.vertices if v in fresh))
        for tree in _all_trees(edges)
        if tree.mask & inner and all(tree.degree[v] >= 2 for v in tree.vertices if v in fresh)
    ]
    everything = (1 << len(fresh)) - 1
    for sigma in _surjections(sorted(component), ctx.size):
        if not _assigned_where_needed(ctx, config, sigma):
            continue
        local = component_instance(ctx, component, config, sigma)
        slots = [(s, s in local.supply_sets) for s, d in local.instance.items() for _ in range(d)]
        options = [
            [
                k
                for k, (tree, touched) in enumerate(trees)
                if s <= tree.vertices and not (supply and touched)
            ]
            for s, supply in slots
        ]

        def place(k: int, used: int, covered: int, lower: int) -> bool:
            if k == len(slots):
                return covered == everything
            same_next = k + 1 < len(slots) and slots[k + 1][0] == slots[k][0]
            for index in options[k]:
                if index <= lower:
                    continue
                tree, touched = trees[index]
                if tree.mask & used or touched & covered:
                    continue
                if place(k + 1, used | tree.mask, covered | touched, index if same_next else -1):
                    return True
            return False

        if place(0, 0, 0, -1):
            return True
    return False


class _Option(NamedTuple):
    mask: int
    demand: Counts
    assign: Assignment


def _maximal_supplies(found: Iterable[Counts]) -> FrozenSet[Counts]:
    vectors = [dict(c) for c in set(found)]

    def dominated(a: Dict[Subset, int], b: Dict[Subset, int]) -> bool:
        return a != b and all(b.get(k, 0) >= v for k, v in a.items())

    return frozenset(
        _merge_counts((), tuple(a.items()))
        for a in vectors
        if not any(dominated(a, b) for b in vectors)
    )


def _prune_dominated(configs: Iterable[Configuration]) -> Signature:
    by_assign: Dict[Assignment, List[Configuration]] = collections.defaultdict(list)
    for config in set(configs):
        by_assign[config.assign].append(config)

    def dominates(a: Configuration, b: Configuration) -> bool:
        demand_a, demand_b = dict(a.demand), dict(b.demand)
        supply_a, supply_b = dict(a.supply), dict(b.supply)
        return (
            a != b
            and all(demand_b.get(k, 0) >= v for k, v in demand_a.items())
            and all(supply_a.get(k, 0) >= v for k, v in supply_b.items())
        )

    kept = []
    for group in by_assign.values():
        kept += [c for c in group if not any(dominates(other, c) for other in group)]
    return frozenset(kept)


def _local_set_options(
    ctx: ModulatorContext, edges: List[Edge], terminal_set: TerminalSet
) -> List[_Option]:
    hops = [_key(q) for q in _subsets(ctx.host_modulator, 2)]
    base = ctx.augmented.graph.vertex_count
    virtual = list(edges) + [(s, base + k) for k, hop in enumerate(hops) for s in hop]
    options = []
    for mask in _spanning_trees(virtual, frozenset(terminal_set)):
        degree = collections.Counter(
            v for index, e in enumerate(virtual) if mask >> index & 1 for v in e
        )
        used = [k for k, hop in enumerate(hops) if degree[base + k]]
        if all(degree[base + k] == len(hops[k]) for k in used):
            host_mask = mask & ((1 << len(edges)) - 1)
            options.append(_Option(host_mask, tuple((hops[k], 1) for k in used), ()))
    return options


def _modulator_set_options(
    ctx: ModulatorContext, component: FrozenSet[int], trees: List[_Tree], t: int, tree_index: int
) -> List[_Option]:
    terminal_set = ctx.instance.terminal_sets[t]
    modulator = frozenset(ctx.host_modulator)
    pieces = [
        tree
        for tree in trees
        if tree.vertices & modulator
        and all(
            tree.degree[v] == 1 if v in modulator else v in terminal_set or tree.degree[v] >= 2
            for v in tree.vertices
        )
    ]
    must_cover = terminal_set & component
    sigma = ctx.sigma(component)
    options = []

    def extend(
        start: int, chosen: List[_Tree], covered: FrozenSet[int], reached: FrozenSet[Subset]
    ) -> None:
        if must_cover <= covered:
            mask = sum(p.mask for p in chosen)
            assign = []
            for j, v in enumerate(sigma):
                for p in chosen:
                    if v in p.vertices:
                        assign.append(((t, tree_index, j), _key(p.vertices & modulator)))
            options.append(_Option(mask, (), tuple(sorted(assign))))
        for k in range(start, len(pieces)):
            piece = pieces[k]
            inner = piece.vertices - modulator
            hit = _key(piece.vertices & modulator)
            # Two pieces joining the same two or more modulator vertices close a cycle.
            if inner & covered or (len(hit) >= 2 and hit in reached):
                continue
            extend(k + 1, chosen + [piece], covered | inner, reached | {hit})

    extend(0, [], frozenset(), frozenset())
    return options


def signature(
    ctx: ModulatorContext, component: Iterable[int], caps: SolverCaps = SolverCaps()
) -> Signature:
    """The viable configurations ``component`` admits, up to domination.

    Configurations are built tree by tree, and every survivor of the domination
    pruning is confirmed with ``admits`` on a local host of at most
    ``caps.oracle_edges`` edges.
    """
    check_scale(ctx, caps)
    component = frozenset(component)
    edges = ctx.host_edges(component)
    modulator = frozenset(ctx.host_modulator)
    trees = _all_trees(edges)
    supply_pieces = [
        (tree.mask, _key(tree.vertices & modulator))
        for tree in trees
        if len(tree.vertices & modulator) >= 2
        and all(
            tree.degree[v] == 1 if v in modulator else tree.degree[v] >= 2 for v in tree.vertices
        )
    ]
    inst = ctx.instance
    slots: List[Tuple[Tuple[str, int], List[_Option]]] = []
    for t in ctx.local_sets(component):
        options = _local_set_options(ctx, edges, inst.terminal_sets[t])
        slots += [(("local", t), options)] * inst.demands[t]
    for t in ctx.modulator_sets:
        for i in range(inst.demands[t]):
            slots.append((("modulator", t), _modulator_set_options(ctx, component, trees, t, i)))
    everything = (1 << len(edges)) - 1

    @functools.lru_cache(maxsize=None)
    def supplies(free: int) -> FrozenSet[Counts]:
        found = {()}
        for mask, subset in supply_pieces:
            if not mask & ~free:
                found |= {_merge_counts(rest, ((subset, 1),)) for rest in supplies(free & ~mask)}
        return _maximal_supplies(found)

    @functools.lru_cache(maxsize=None)
    def search(k: int, used: int, lower: int) -> FrozenSet[Tuple[Counts, Assignment, Counts]]:
        if k == len(slots):
            return frozenset(((), (), supply) for supply in supplies(everything & ~used))
        label, options = slots[k]
        repeats = k + 1 < len(slots) and slots[k + 1][0] == label and label[0] == "local"
        found = set()
        for index, option in enumerate(options):
            if index <= lower or option.mask & used:
                continue
            rest = search(k + 1, used | option.mask, index if repeats else -1)
            for demand, assign, supply in rest:
                merged = _merge_counts(demand, option.demand)
                found.add((merged, tuple(sorted(assign + option.assign)), supply))
        return frozenset(found)

    raw = [Configuration(demand, supply, assign) for demand, assign, supply in search(0, 0, -1)]
    pruned = _prune_dominated(c for c in raw if c.is_viable(ctx.size))
    result = frozenset(c for c in pruned if admits(ctx, component, c, caps.oracle_edges))
    logger.debug(
        "component %s: %d configurations, %d viable and admitted after domination",
        sorted(component),
        len(set(raw)),
        len(result),
    )
    return result


class ComponentClass(NamedTuple):
    representative: FrozenSet[int]
    members: Tuple[FrozenSet[int], ...]

    @property
    def count(self) -> int:
        return len(self.members)


def _neighbourhood(ctx: ModulatorContext, component: FrozenSet[int]) -> nx.Graph:
    g = nx.Graph()
    for s in ctx.modulator:
        g.add_node(s, label=("s", s))
    for v in component:
        if ctx.augmented.is_augmented(v):
            demand = ctx.instance.demands[ctx.augmented.terminal_index_of(v)]
            label: Tuple[object, ...] = ("aug", demand)
        else:
            label = ("g",)
        g.add_node(v, label=label)
    g.add_edges_from((v, w) for v in component for w in ctx.augmented.graph.neighbors(v))
    return g


def indistinguishable(ctx: ModulatorContext, first: Iterable[int], second: Iterable[int]) -> bool:
    """Whether the closed neighbourhoods are isomorphic under a map fixing the modulator.

    The map must also send augmented vertices to augmented vertices of equal demand.
    """
    a, b = frozenset(first), frozenset(second)
    if len(a) != len(b):
        return False
    return nx.is_isomorphic(
        _neighbourhood(ctx, a),
        _neighbourhood(ctx, b),
        node_match=lambda x, y: x["label"] == y["label"],
    )


def equivalence_classes(
    ctx: ModulatorContext, components: Optional[Sequence[FrozenSet[int]]] = None
) -> List[ComponentClass]:
    """Groups components into indistinguishability classes, in order of first appearance."""
    groups: List[List[FrozenSet[int]]] = []
    for component in ctx.components if components is None else components:
        for group in groups:
            if indistinguishable(ctx, group[0], component):
                group.append(component)
                break
        else:
            groups.append([component])
    return [ComponentClass(group[0], tuple(group)) for group in groups]


def _connects(vertices: FrozenSet[int], hyperedges: Iterable[FrozenSet[int]]) -> bool:
    if not vertices:
        return True
    edges = list(hyperedges)
    reached = {min(vertices)}
    changed = True
    while changed:
        changed = False
        for edge in edges:
            if edge & reached and not edge <= reached:
                reached |= edge
                changed = True
    return reached == vertices


def minimally_connected_hypergraphs(vertices: Iterable[int]) -> List[Hypergraph]:
    """Every hyperedge set on ``vertices`` that connects them but not without any one edge.

    A single vertex is connected by the empty set. Sets of more than four vertices
    are refused.
    """
    universe = frozenset(vertices)
    if len(universe) > MAX_HYPERGRAPH_VERTICES:
        raise ValueError(
            f"Hypergraphs are enumerated on at most {MAX_HYPERGRAPH_VERTICES} vertices"
        )
    candidates = _subsets(_key(universe), 2)
    found = []
    for count in range(max(len(universe), 1)):
        for chosen in itertools.combinations(candidates, count):
            if not _connects(universe, chosen):
                continue
            if all(not _connects(universe, chosen[:k] + chosen[k + 1 :]) for k in range(count)):
                found.append(tuple(chosen))
    return found


def _add_rho(
    model: IlpModel,
    universe: Subset,
    star_items: Sequence[Tuple[int, TerminalSet, int]],
    supply_names: Mapping[Subset, str],
    bound: int,
) -> None:
    """Routes every tree of a set inside the modulator over supplied connections."""
    usage: Dict[Subset, Dict[str, int]] = collections.defaultdict(dict)
    for t, terminal_set, demand in star_items:
        exact: Dict[str, int] = {}
        h = 0
        for vertex_set in _supersets(frozenset(terminal_set), universe):
            for hypergraph in minimally_connected_hypergraphs(vertex_set):
                p = model.add_variable(f"p_{t}_{h}", 0, demand)
                exact[p] = 1
                for r, hyperedge in enumerate(hypergraph):
                    q = model.add_variable(f"q_{t}_{h}_{r}", 0, bound)
                    model.add_constraint({q: 1, p: -1}, ">=", 0, f"uses_{t}_{h}_{r}")
                    usage[_key(hyperedge)][q] = 1
                h += 1
        model.add_constraint(exact, "=", demand, f"route_{t}")
    for hyperedge, coefs in sorted(usage.items()):
        model.add_constraint(
            {**coefs, supply_names[hyperedge]: -1}, "<=", 0, f"supplied_{_name(hyperedge)}"
        )


def _add_assign(
    model: IlpModel,
    universe: Subset,
    items: Sequence[Tuple[int, TerminalSet, int]],
    assign_names: Mapping[Tuple[int, int, Subset], str],
) -> None:
    """Adds the constraints that the reached sets of every tree form a connected hypergraph."""
    nonempty = _subsets(universe, 1)
    for t, terminal_set, demand in items:
        base = frozenset(terminal_set) & frozenset(universe)
        choices = _supersets(base, universe)
        for i in range(demand):

            def a(subset: FrozenSet[int]) -> str:
                return assign_names[(t, i, _key(subset))]

            b = {
                vertex_set: model.add_variable(f"b_{t}_{i}_{_name(vertex_set)}", 0, 1)
                for vertex_set in choices
            }
            model.add_constraint({name: 1 for name in b.values()}, "=", 1, f"span_{t}_{i}")
            for vertex_set, chosen in b.items():
                within = [y for y in nonempty if y <= vertex_set]
                coefs = {a(y): 1 for y in within}
                coefs[chosen] = -1
                model.add_constraint(coefs, ">=", 0, f"edge_{t}_{i}_{_name(vertex_set)}")
                for side in _subsets(_key(vertex_set), 1):
                    if side == vertex_set:
                        continue
                    crossing = {a(y): 1 for y in within if y & side and y - side}
                    crossing[chosen] = -1
                    label = f"cut_{t}_{i}_{_name(vertex_set)}_{_name(side)}"
                    model.add_constraint(crossing, ">=", 0, label)
            for y in nonempty:
                coefs = {name: 1 for vertex_set, name in b.items() if y <= vertex_set}
                coefs[a(y)] = -1
                model.add_constraint(coefs, ">=", 0, f"inside_{t}_{i}_{_name(y)}")


def rho_model(
    universe: Iterable[int],
    star_items: Sequence[Tuple[Iterable[int], int]],
    supply: Mapping[SubsetLike, int],
) -> IlpModel:
    """The routing constraints alone, with every supply fixed to the given value."""
    ordered = _key(universe)
    fixed = {_key(k): v for k, v in supply.items()}
    model = IlpModel()
    names = {}
    for subset in _subsets(ordered, 2):
        value = fixed.get(_key(subset), 0)
        names[_key(subset)] = model.add_variable(f"s_{_name(subset)}", value, value)
    items = [(t, frozenset(s), d) for t, (s, d) in enumerate(star_items)]
    bound = max([0] + list(fixed.values()))
    _add_rho(model, ordered, items, names, bound)
    return model


def build_selector_ilp(
    ctx: ModulatorContext,
    classes: Sequence[ComponentClass],
    signatures: Sequence[Sequence[Configuration]],
) -> IlpModel:
    """The integer program that has a solution exactly when the instance is positive."""
    model = IlpModel()
    universe = ctx.host_modulator
    inst = ctx.instance
    total = sum(c.count for c in classes)
    bound = total * ctx.u
    subsets = _subsets(universe, 2)
    supply_names = {_key(s): model.add_variable(f"s_{_name(s)}", 0, bound) for s in subsets}
    chosen: List[Tuple[str, Configuration]] = []
    for c, (component_class, configs) in enumerate(zip(classes, signatures)):
        count = component_class.count
        names = [
            (model.add_variable(f"d_{c}_{g}", 0, count), config)
            for g, config in enumerate(configs)
        ]
        model.add_constraint({name: 1 for name, _ in names}, "=", count, f"class_{c}")
        chosen += names
    for subset in subsets:
        coefs = {supply_names[_key(subset)]: 1}
        for name, config in chosen:
            delta = config.demand_of(subset) - config.supply_of(subset)
            if delta:
                coefs[name] = delta
        model.add_constraint(coefs, "<=", 0, f"balance_{_name(subset)}")
    assign_names: Dict[Tuple[int, int, Subset], str] = {}
    for t in ctx.modulator_sets:
        for i in range(inst.demands[t]):
            for subset in _subsets(universe, 1):
                a = model.add_variable(f"a_{t}_{i}_{_name(subset)}", 0, 1)
                assign_names[(t, i, _key(subset))] = a
                users = {name: 1 for name, config in chosen if subset in config.assigned(t, i)}
                suffix = f"{t}_{i}_{_name(subset)}"
                model.add_constraint({**users, a: -1}, ">=", 0, f"seen_{suffix}")
                model.add_constraint({**users, a: -max(total, 1)}, "<=", 0, f"flag_{suffix}")
    star_items = [(t, inst.terminal_sets[t], inst.demands[t]) for t in ctx.star_sets]
    _add_rho(model, universe, star_items, supply_names, bound)
    assign_items = [(t, inst.terminal_sets[t], inst.demands[t]) for t in ctx.modulator_sets]
    _add_assign(model, universe, assign_items, assign_names)
    logger.debug(
        "selector program: %d variables, %d constraints", len(model), len(model.constraints)
    )
    return model


def decide_by_fracture(
    inst: GstpInstance, caps: SolverCaps = SolverCaps(), dump_ilp: Optional[str] = None
) -> SolveResult:
    """Decides ``inst`` through a nice fracture modulator and the selector program.

    Raises ``CapExceededError`` when the nice modulator or the number of terminal
    sets whose augmented vertex it contains exceeds the configured caps.
    """
    reduced = apply_basic_rules(inst)
    if reduced is TRIVIAL_NEGATIVE:
        return SolveResult(Status.INFEASIBLE, solver="fnilp", details={"rule": "degree negative"})
    if not reduced.terminal_sets:
        return SolveResult(
            Status.FEASIBLE, solution=None, solver="fnilp", details={"rule": "no terminal sets"}
        )
    augmented = augment(reduced, AugmentationMode.VERTEX)
    modulator, fracture = fracture_modulator(augmented.graph)
    nice = make_nice_modulator(reduced, modulator)
    if degree_negative(nice.instance):
        return SolveResult(Status.INFEASIBLE, solver="fnilp", details={"rule": "degree negative"})
    ctx = ModulatorContext(nice.instance, nice.modulator)
    check_scale(ctx, caps)
    classes = equivalence_classes(ctx)
    signatures = [
        sorted(signature(ctx, c.representative, caps), key=_configuration_order) for c in classes
    ]
    model = build_selector_ilp(ctx, classes, signatures)
    if dump_ilp is not None:
        with open(dump_ilp, "w") as handle:
            handle.write(write_lp(model))
    result = ilp_feasible(model)
    logger.info(
        "fracture pipeline: modulator %d, nice modulator %d, %d classes, feasible=%s",
        fracture,
        ctx.size,
        len(classes),
        result.feasible,
    )
    details = {
        "fracture_number": fracture,
        "modulator": ctx.size,
        "classes": len(classes),
        "configurations": sum(len(s) for s in signatures),
        "variables": len(model),
        "constraints": len(model.constraints),
        "ilp_nodes": result.nodes,
    }
    status = Status.FEASIBLE if result.feasible else Status.INFEASIBLE
    return SolveResult(status, solver="fnilp", details=details)
