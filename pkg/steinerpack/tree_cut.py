"""Tree-cut decompositions: widths, shape predicates and the rewriting operations on them.

A tree-cut decomposition is a rooted tree whose bags form a near-partition of the
vertex set: bags are pairwise disjoint, cover every vertex and may be empty. For a
node t, ``Y_t`` is the union of the bags below and at t and the adhesion of t counts
the edges leaving ``Y_t``. The torso at t keeps the bag and contracts the vertex set
of every child subtree, and everything outside ``Y_t``, into single peripheral
vertices. Suppressing peripheral vertices of degree at most two (one) gives the
3-center (2-center) whose sizes, together with the adhesions, define the width
(slim width).

Decompositions are immutable; every operation returns a new one.
"""
import logging
from typing import (
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

from steinerpack.graph import Edge, Graph, canonical_edge, cut_edges
from steinerpack.instances import AugmentationMode, GstpInstance, TerminalSet, Verification, augment
from steinerpack.reductions import TRIVIAL_NEGATIVE, Reduced
from steinerpack.tree_decomposition import check_parent_links

logger = logging.getLogger(__name__)


class TreeCutDecomposition:
    """A rooted tree with one bag per node; the bags are pairwise disjoint.

    Args:
    - parent: Parent of every node, with None for the root
    - bags: The vertex set of every node, possibly empty
    """

    def __init__(self, parent: Sequence[Optional[int]], bags: Sequence[Iterable[int]]) -> None:
        if len(parent) != len(bags):
            raise ValueError("Every node needs exactly one bag")
        self._root = check_parent_links(parent)
        self._parent: Tuple[Optional[int], ...] = tuple(parent)
        self._bags: Tuple[FrozenSet[int], ...] = tuple(frozenset(b) for b in bags)
        self._node_of: Dict[int, int] = {}
        for t, bag in enumerate(self._bags):
            for v in bag:
                if v in self._node_of:
                    raise ValueError(f"Bags of nodes {self._node_of[v]} and {t} share vertex {v}")
                self._node_of[v] = t
        self._children: List[List[int]] = [[] for _ in parent]
        for t, p in enumerate(parent):
            if p is not None:
                self._children[p].append(t)
        self._below: Optional[List[FrozenSet[int]]] = None

    @property
    def root(self) -> int:
        return self._root

    @property
    def parent(self) -> Tuple[Optional[int], ...]:
        return self._parent

    @property
    def bags(self) -> Tuple[FrozenSet[int], ...]:
        return self._bags

    @property
    def node_count(self) -> int:
        return len(self._parent)

    @property
    def vertices(self) -> FrozenSet[int]:
        return frozenset(self._node_of)

    def children(self, t: int) -> List[int]:
        return list(self._children[t])

    def node_of(self, v: int) -> int:
        """The node whose bag holds ``v``."""
        if v not in self._node_of:
            raise ValueError(f"Vertex {v} is in no bag")
        return self._node_of[v]

    def postorder(self) -> List[int]:
        order = []
        stack = [(self._root, False)]
        while stack:
            t, expanded = stack.pop()
            if expanded:
                order.append(t)
                continue
            stack.append((t, True))
            stack.extend((c, False) for c in reversed(self._children[t]))
        return order

    def below(self, t: int) -> FrozenSet[int]:
        """``Y_t``: the vertices in the bags of t and its descendants."""
        if self._below is None:
            below: List[FrozenSet[int]] = [frozenset()] * self.node_count
            for node in self.postorder():
                gathered = set(self._bags[node])
                for c in self._children[node]:
                    gathered |= below[c]
                below[node] = frozenset(gathered)
            self._below = below
        return self._below[t]

    def subtree(self, t: int) -> List[int]:
        """t and all of its descendants, in preorder."""
        nodes = []
        stack = [t]
        while stack:
            node = stack.pop()
            nodes.append(node)
            stack.extend(reversed(self._children[node]))
        return nodes

    def depth(self, t: int) -> int:
        depth = 0
        p = self._parent[t]
        while p is not None:
            depth += 1
            p = self._parent[p]
        return depth

    def validate(self, g: Graph) -> None:
        """Raises ``ValueError`` unless the bags near-partition the vertices of ``g``."""
        for v in sorted(self._node_of):
            if not 0 <= v < g.vertex_count:
                raise ValueError(
                    f"Bag of node {self._node_of[v]} holds vertex {v}, which is outside the graph"
                )
        for v in g.vertices:
            if v not in self._node_of:
                raise ValueError(f"Vertex {v} is in no bag")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeCutDecomposition):
            return NotImplemented
        return (self._parent, self._bags) == (other._parent, other._bags)

    def __repr__(self) -> str:
        return f"TreeCutDecomposition({self.node_count} nodes, {len(self._node_of)} vertices)"


class Torso(NamedTuple):
    """The torso at a node.

    Torso vertices ``0 .. len(core) - 1`` are the bag vertices in sorted order. The
    next ones stand for the nonempty child subtrees listed in ``children``, and
    ``top``, when present, stands for everything outside the subtree.
    """

    graph: Graph
    core: Tuple[int, ...]
    children: Tuple[int, ...]
    top: Optional[int]

    def vertex_of_child(self, c: int) -> int:
        return len(self.core) + self.children.index(c)

    def child_of_vertex(self, z: int) -> Optional[int]:
        """The child node a torso vertex stands for, or None for bag vertices and the top."""
        k = len(self.core)
        if k <= z < k + len(self.children):
            return self.children[z - k]
        return None

    @property
    def peripheral(self) -> List[int]:
        return list(range(len(self.core), self.graph.vertex_count))


class Center(NamedTuple):
    """What remains of a graph after suppressing peripheral vertices.

    ``graph`` is relabeled to ``0 .. len(kept) - 1`` in the order of ``kept``;
    ``suppressed`` lists the removed vertices in suppression order.
    """

    graph: Graph
    kept: Tuple[int, ...]
    suppressed: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.kept)


def torso(tcd: TreeCutDecomposition, g: Graph, t: int) -> Torso:
    """The torso at ``t`` as a multigraph; edges inside a contracted set are dropped."""
    core = tuple(sorted(tcd.bags[t]))
    label = {v: i for i, v in enumerate(core)}
    children = tuple(c for c in tcd.children(t) if tcd.below(c))
    for i, c in enumerate(children):
        for v in tcd.below(c):
            label[v] = len(core) + i
    top: Optional[int] = None
    if len(tcd.below(t)) < g.vertex_count:
        top = len(core) + len(children)
    counts: Dict[Edge, int] = {}
    for (u, v), m in g.edges.items():
        a, b = label.get(u, top), label.get(v, top)
        assert a is not None and b is not None
        if a == b:
            continue
        e = canonical_edge(a, b)
        counts[e] = counts.get(e, 0) + m
    vertex_count = len(core) + len(children) + (top is not None)
    return Torso(Graph(vertex_count, counts, multigraph=True), core, children, top)


def suppress_peripheral(
    graph: Graph,
    removable: Iterable[int],
    max_degree: int,
    priority: Optional[Sequence[int]] = None,
) -> Center:
    """Suppresses removable vertices of degree at most ``max_degree`` until none is left.

    A suppressed vertex with two distinct neighbors is replaced by an edge between
    them; loops never arise. Among the suppressible vertices the one earliest in
    ``priority`` (or the smallest, without a priority) goes first.
    """
    adjacency: Dict[int, Dict[int, int]] = {v: {} for v in graph.vertices}
    for (u, v), m in graph.edges.items():
        if u == v:
            continue
        adjacency[u][v] = adjacency[u].get(v, 0) + m
        adjacency[v][u] = adjacency[v].get(u, 0) + m
    rank = {v: i for i, v in enumerate(priority)} if priority is not None else {}
    candidates = set(removable)
    suppressed: List[int] = []

    while True:
        ready = [v for v in candidates if sum(adjacency[v].values()) <= max_degree]
        if not ready:
            break
        v = min(ready, key=lambda w: (rank.get(w, len(rank)), w))
        candidates.discard(v)
        ends = [w for w, m in adjacency[v].items() for _ in range(m)]
        for w in adjacency.pop(v):
            del adjacency[w][v]
        if len(ends) == 2 and ends[0] != ends[1]:
            a, b = ends
            adjacency[a][b] = adjacency[a].get(b, 0) + 1
            adjacency[b][a] = adjacency[b].get(a, 0) + 1
        suppressed.append(v)

    kept = tuple(sorted(adjacency))
    relabel = {v: i for i, v in enumerate(kept)}
    edges = {
        (relabel[u], relabel[w]): m
        for u, around in adjacency.items()
        for w, m in around.items()
        if u < w
    }
    return Center(Graph(len(kept), edges, multigraph=True), kept, tuple(suppressed))


def _suppression_priority(h: Torso) -> List[int]:
    thin = [h.vertex_of_child(c) for c in h.children if h.graph.degree(h.vertex_of_child(c)) <= 2]
    bold = [h.vertex_of_child(c) for c in h.children if h.graph.degree(h.vertex_of_child(c)) > 2]
    top = [] if h.top is None else [h.top]
    return thin + top + bold


def three_center(tcd: TreeCutDecomposition, g: Graph, t: int, h: Optional[Torso] = None) -> Center:
    """The 3-center of the torso at ``t``.

    Thin children go first, then the top vertex, then bold children, which
    keeps fake children in the order of the path they form.
    """
    h = torso(tcd, g, t) if h is None else h
    return suppress_peripheral(h.graph, h.peripheral, 2, _suppression_priority(h))


def two_center(tcd: TreeCutDecomposition, g: Graph, t: int) -> Center:
    h = torso(tcd, g, t)
    return suppress_peripheral(h.graph, h.peripheral, 1)


def adhesion(tcd: TreeCutDecomposition, g: Graph, t: int) -> int:
    if t == tcd.root:
        return 0
    return sum(cut_edges(g, tcd.below(t)).values())


def width(tcd: TreeCutDecomposition, g: Graph) -> int:
    adhesions = (adhesion(tcd, g, t) for t in range(tcd.node_count))
    centers = (three_center(tcd, g, t).size for t in range(tcd.node_count))
    return max(max(adhesions), max(centers))


def slim_width(tcd: TreeCutDecomposition, g: Graph) -> int:
    adhesions = (adhesion(tcd, g, t) for t in range(tcd.node_count))
    centers = (two_center(tcd, g, t).size for t in range(tcd.node_count))
    return max(max(adhesions), max(centers))


def bold_children(tcd: TreeCutDecomposition, g: Graph, s: int) -> List[int]:
    return [c for c in tcd.children(s) if adhesion(tcd, g, c) > 2]


def thin_children(tcd: TreeCutDecomposition, g: Graph, s: int) -> List[int]:
    return [c for c in tcd.children(s) if adhesion(tcd, g, c) <= 2]


def _neighborhood(g: Graph, vertices: FrozenSet[int]) -> Set[int]:
    return {w for v in vertices for w in g.neighbors(v) if w not in vertices}


def is_nice(tcd: TreeCutDecomposition, g: Graph) -> Verification:
    """No thin node has a neighbor in the subtree of one of its siblings."""
    for t in range(tcd.node_count):
        p = tcd.parent[t]
        if p is None or adhesion(tcd, g, t) > 2:
            continue
        around = _neighborhood(g, tcd.below(t))
        for sibling in tcd.children(p):
            if sibling != t and around & tcd.below(sibling):
                return Verification(
                    False, f"thin node {t} has a neighbor below its sibling {sibling}"
                )
    return Verification(True)


def is_friendly(tcd: TreeCutDecomposition, g: Graph) -> Verification:
    """Nice, and every node has at most w + 2 bold children plus bag vertices."""
    nice = is_nice(tcd, g)
    if not nice.ok:
        return nice
    w = width(tcd, g)
    for s in range(tcd.node_count):
        load = len(bold_children(tcd, g, s)) + len(tcd.bags[s])
        if load > w + 2:
            return Verification(
                False,
                f"node {s} has {load} bold children and bag vertices, more than width {w} + 2",
            )
    return Verification(True)


def cross_link(inst: GstpInstance, tcd: TreeCutDecomposition, s: int) -> List[TerminalSet]:
    """Terminal sets with vertices of the host graph on both sides of the link above ``s``."""
    inside = tcd.below(s) & frozenset(inst.graph.vertices)
    return [t for t in inst.terminal_sets if t & inside and t - inside]


def cross_link_demand(inst: GstpInstance, tcd: TreeCutDecomposition, s: int) -> int:
    return sum(inst.demand_of(t) for t in cross_link(inst, tcd, s))


def host_adhesion(inst: GstpInstance, tcd: TreeCutDecomposition, s: int) -> int:
    """Adhesion of ``s`` after dropping augmented vertices from the bags."""
    if s == tcd.root:
        return 0
    inside = tcd.below(s) & frozenset(inst.graph.vertices)
    return sum(cut_edges(inst.graph, inside).values())


def is_simple(inst: GstpInstance, tcd: TreeCutDecomposition) -> Verification:
    """Friendly, and every thin non-root node is a single vertex of adhesion 2.

    No terminal set may cross the link above such a node.
    """
    g = inst.graph
    friendly = is_friendly(tcd, g)
    if not friendly.ok:
        return friendly
    for t in range(tcd.node_count):
        if t == tcd.root or adhesion(tcd, g, t) > 2:
            continue
        if len(tcd.below(t)) != 1:
            return Verification(False, f"thin node {t} has {len(tcd.below(t))} vertices below it")
        if adhesion(tcd, g, t) != 2:
            return Verification(False, f"thin node {t} has adhesion {adhesion(tcd, g, t)}")
        if cross_link(inst, tcd, t):
            return Verification(False, f"a terminal set crosses the link above thin node {t}")
    return Verification(True)


def fake_nodes(tcd: TreeCutDecomposition, g: Graph, s: int) -> List[int]:
    """Bold children of ``s`` suppressed on the way to the 3-center, in suppression order."""
    h = torso(tcd, g, s)
    center = three_center(tcd, g, s, h)
    fakes = []
    for z in center.suppressed:
        c = h.child_of_vertex(z)
        if c is not None and h.graph.degree(z) > 2:
            fakes.append(c)
    return fakes


def _expansion_check(tcd: TreeCutDecomposition, g: Graph, s: int, a: int, b: int) -> Optional[str]:
    h = torso(tcd, g, s)
    za, zb = h.vertex_of_child(a), h.vertex_of_child(b)
    m = h.graph.multiplicity(za, zb)
    if m < 1:
        return f"no edge joins the subtrees of nodes {a} and {b}"
    if h.graph.degree(za) + h.graph.degree(zb) - 2 * m < 3:
        return f"nodes {a} and {b} together would be thin"
    return None


def expand(tcd: TreeCutDecomposition, g: Graph, s: int, a: int, b: int) -> TreeCutDecomposition:
    """Inserts a new empty child of ``s`` that adopts the fake children ``a`` and ``b``."""
    if a == b or tcd.parent[a] != s or tcd.parent[b] != s:
        raise ValueError(f"Nodes {a} and {b} must be distinct children of node {s}")
    fakes = fake_nodes(tcd, g, s)
    for c in (a, b):
        if c not in fakes:
            raise ValueError(f"Node {c} is not a fake child of node {s}")
    problem = _expansion_check(tcd, g, s, a, b)
    if problem is not None:
        raise ValueError(f"Cannot expand node {s}: {problem}")
    parent = list(tcd.parent) + [s]
    parent[a] = parent[b] = tcd.node_count
    return TreeCutDecomposition(parent, list(tcd.bags) + [()])


def blow_up(
    tcd: TreeCutDecomposition, g: Graph, s: int, bound: Optional[int] = None
) -> TreeCutDecomposition:
    """Expands ``s`` along consecutive fake children until it carries at most bound + 2
    bold children and bag vertices, or no expansion applies.

    ``bound`` defaults to the width of ``tcd``.
    """
    bound = width(tcd, g) if bound is None else bound
    expansions = 0
    while len(bold_children(tcd, g, s)) + len(tcd.bags[s]) > bound + 2:
        fakes = fake_nodes(tcd, g, s)
        pair = next(
            (
                (a, b)
                for a, b in zip(fakes, fakes[1:])
                if _expansion_check(tcd, g, s, a, b) is None
            ),
            None,
        )
        if pair is None:
            logger.debug("blow-up of node %d stopped without an expandable pair", s)
            break
        tcd = expand(tcd, g, s, *pair)
        expansions += 1
    if expansions:
        logger.debug("blew up node %d with %d expansions", s, expansions)
    return tcd


def make_friendly(tcd: TreeCutDecomposition, g: Graph) -> TreeCutDecomposition:
    """Blows up every node of a nice decomposition against its original width.

    Decompositions of width exactly 3 would need a modified expand step that keeps
    the bound at 3; that variant is not implemented, so the bound stays the
    original width.
    """
    nice = is_nice(tcd, g)
    if not nice.ok:
        raise ValueError(f"make_friendly needs a nice decomposition, but {nice.violation}")
    w = width(tcd, g)
    for s in range(tcd.node_count):
        tcd = blow_up(tcd, g, s, w)
    logger.info("friendly decomposition with %d nodes for width %d", tcd.node_count, w)
    return tcd


def _keep_nodes(
    tcd: TreeCutDecomposition, keep: Sequence[bool]
) -> Tuple[TreeCutDecomposition, Dict[int, int]]:
    node_map: Dict[int, int] = {}
    for t in range(tcd.node_count):
        if keep[t]:
            node_map[t] = len(node_map)
    parent = [None if tcd.parent[t] is None else node_map[tcd.parent[t]] for t in node_map]
    bags = [tcd.bags[t] for t in node_map]
    return TreeCutDecomposition(parent, bags), node_map


def prune_empty_leaves(tcd: TreeCutDecomposition) -> TreeCutDecomposition:
    """Removes non-root subtrees whose bags are all empty; surviving nodes keep their order."""
    keep = [t == tcd.root or bool(tcd.below(t)) for t in range(tcd.node_count)]
    return _keep_nodes(tcd, keep)[0]


def remove_subtree(tcd: TreeCutDecomposition, s: int) -> TreeCutDecomposition:
    if s == tcd.root:
        raise ValueError("Cannot remove the subtree of the root")
    gone = set(tcd.subtree(s))
    return _keep_nodes(tcd, [t not in gone for t in range(tcd.node_count)])[0]


def replace_subtree(tcd: TreeCutDecomposition, s: int, bag: Iterable[int]) -> TreeCutDecomposition:
    """Replaces the subtree of ``s`` by a single node with ``bag``, keeping its position."""
    gone = set(tcd.subtree(s)) - {s}
    bags = list(tcd.bags)
    bags[s] = frozenset(bag)
    pruned = TreeCutDecomposition(
        tcd.parent, [() if t in gone else b for t, b in enumerate(bags)]
    )
    return _keep_nodes(pruned, [t not in gone for t in range(tcd.node_count)])[0]


def with_bag(tcd: TreeCutDecomposition, t: int, bag: Iterable[int]) -> TreeCutDecomposition:
    bags = list(tcd.bags)
    bags[t] = frozenset(bag)
    return TreeCutDecomposition(tcd.parent, bags)


def add_node(tcd: TreeCutDecomposition, parent: int, bag: Iterable[int]) -> TreeCutDecomposition:
    """Appends a new node below ``parent``; it gets index ``tcd.node_count``."""
    return TreeCutDecomposition(list(tcd.parent) + [parent], list(tcd.bags) + [frozenset(bag)])


def relabel(tcd: TreeCutDecomposition, mapping: Mapping[int, int]) -> TreeCutDecomposition:
    """Renames bag vertices through ``mapping``; unmapped vertices are dropped."""
    bags = [[mapping[v] for v in bag if v in mapping] for bag in tcd.bags]
    return TreeCutDecomposition(tcd.parent, bags)


def reroot(tcd: TreeCutDecomposition, s: int) -> TreeCutDecomposition:
    """The same tree hanging from ``s``."""
    parent = list(tcd.parent)
    previous: Optional[int] = None
    t: Optional[int] = s
    while t is not None:
        up = parent[t]
        parent[t] = previous
        previous, t = t, up
    return TreeCutDecomposition(parent, tcd.bags)


def is_augmented_decomposition(inst: GstpInstance, tcd: TreeCutDecomposition) -> bool:
    """Whether ``tcd`` decomposes the vertex-augmented graph rather than the host graph."""
    n = inst.graph.vertex_count
    covered = tcd.vertices
    if covered == frozenset(range(n)):
        return False
    if covered == frozenset(range(n + len(inst.terminal_sets))):
        return True
    raise ValueError("The decomposition covers neither the host graph nor its vertex augmentation")


def decomposed_graph(inst: GstpInstance, tcd: TreeCutDecomposition) -> Graph:
    if is_augmented_decomposition(inst, tcd):
        return augment(inst, AugmentationMode.VERTEX).graph
    return inst.graph


def carry_over(
    inst: GstpInstance,
    reduced: GstpInstance,
    tcd: TreeCutDecomposition,
    host_map: Mapping[int, int],
    augmented: bool,
) -> TreeCutDecomposition:
    """Moves ``tcd`` from ``inst`` to ``reduced`` along a map of host vertices.

    ``augmented`` tells whether ``tcd`` came from a decomposition of the augmented
    graph; the tree itself may already be cut down and cover neither graph. Augmented
    vertices follow their terminal sets; sets that do not survive the map lose their
    augmented vertex.
    """
    mapping = dict(host_map)
    if augmented:
        n, reduced_n = inst.graph.vertex_count, reduced.graph.vertex_count
        mapping = {v: w for v, w in host_map.items() if v < n}
        positions = {t: j for j, t in enumerate(reduced.terminal_sets)}
        for j, t in enumerate(inst.terminal_sets):
            if all(v in host_map for v in t):
                image = frozenset(host_map[v] for v in t)
                if image in positions:
                    mapping[n + j] = reduced_n + positions[image]
    return relabel(tcd, mapping)


def apply_rr_crosslink(inst: GstpInstance, tcd: TreeCutDecomposition) -> Reduced:
    """Negative when some link carries more crossing demand than it has edges."""
    for s in range(tcd.node_count):
        if s == tcd.root:
            continue
        demand, available = cross_link_demand(inst, tcd, s), host_adhesion(inst, tcd, s)
        if demand > available:
            logger.debug(
                "crossing demand %d exceeds adhesion %d above node %d", demand, available, s
            )
            return TRIVIAL_NEGATIVE
    return inst


def apply_rr_adh1(
    inst: GstpInstance, tcd: TreeCutDecomposition, s: int
) -> Tuple[GstpInstance, TreeCutDecomposition]:
    """Removes the only host edge uv leaving the subtree of ``s`` (u inside).

    A terminal set T crossing that edge is replaced by ``(T inside) + u`` and
    ``(T outside) + v``, each with T's demand, merging into existing sets. For a
    decomposition of the vertex-augmented graph, the new inside set takes over the
    augmented vertex of T when that vertex lies below ``s`` (and the outside set
    otherwise); the other new set gets a fresh one-vertex node.
    """
    g = inst.graph
    if s == tcd.root:
        raise ValueError("The root has no link to cut")
    adhesion_in_host = host_adhesion(inst, tcd, s)
    if adhesion_in_host != 1:
        raise ValueError(f"Node {s} has adhesion {adhesion_in_host} in the host graph, not 1")
    crossing = cross_link(inst, tcd, s)
    if cross_link_demand(inst, tcd, s) > 1:
        raise ValueError(
            f"Crossing demand above node {s} exceeds its adhesion; apply_rr_crosslink first"
        )
    augmented = is_augmented_decomposition(inst, tcd)

    inside = tcd.below(s) & frozenset(g.vertices)
    ((a, b),) = cut_edges(g, inside)
    u, v = (a, b) if a in inside else (b, a)
    items = [(t, d) for t, d in inst.items() if t not in crossing]
    split: List[FrozenSet[int]] = []
    if crossing:
        (t,) = crossing
        split = [(t & inside) | {u}, (t - inside) | {v}]
        items += [(part, inst.demand_of(t)) for part in split]
    reduced = GstpInstance(g.remove_edge(u, v), [t for t, _ in items], [d for _, d in items])
    logger.debug("cut bridge %s above node %d, split %d terminal sets", (u, v), s, len(crossing))
    if not augmented:
        return reduced, tcd

    n = g.vertex_count
    moved = carry_over(inst, reduced, tcd, {w: w for w in g.vertices}, augmented=True)
    if crossing:
        fresh = [part for part in split if part not in inst.terminal_sets]
        old_aug = n + inst.index_of(crossing[0])
        aug_inside = old_aug in tcd.below(s)
        home = tcd.node_of(old_aug)
        for part in fresh:
            aug_vertex = n + reduced.index_of(part)
            takes_place = (part == split[0]) == aug_inside
            if takes_place:
                moved = with_bag(moved, home, moved.bags[home] | {aug_vertex})
            elif part == split[0]:
                moved = add_node(moved, s, [aug_vertex])
            else:
                p = tcd.parent[s]
                assert p is not None
                moved = add_node(moved, p, [aug_vertex])
    moved = prune_empty_leaves(moved)
    moved.validate(augment(reduced, AugmentationMode.VERTEX).graph)
    return reduced, moved


def make_simple(
    inst: GstpInstance, tcd: TreeCutDecomposition
) -> Tuple[GstpInstance, TreeCutDecomposition]:
    """Turns a nice decomposition of the host graph into a simple one of an equivalent instance.

    Empty leaves are removed first. Every node except the simple thin ones then gets
    two new bag vertices t_s and t'_s, and each non-simple thin child r of s is wired
    to s by the four edges between {t_s, t'_s} and {t_r, t'_r}, which makes r bold.
    The root is then padded with isolated vertices until its 3-center reaches
    w + 4 + max(0, max delta_s). None of the new vertices is connected to the host
    graph, so the instance keeps its answer.
    """
    g = inst.graph
    nice = is_nice(tcd, g)
    if not nice.ok:
        raise ValueError(f"make_simple needs a nice decomposition, but {nice.violation}")
    # Below a simple thin node only simple thin nodes and empty leaves can hang.
    tcd = prune_empty_leaves(tcd)
    w = width(tcd, g)

    def simple_thin(t: int) -> bool:
        return (
            t != tcd.root
            and adhesion(tcd, g, t) == 2
            and len(tcd.below(t)) == 1
            and not cross_link(inst, tcd, t)
        )

    non_simple: Dict[int, List[int]] = {
        s: [r for r in thin_children(tcd, g, s) if not simple_thin(r)]
        for s in range(tcd.node_count)
    }
    deltas = [
        len(non_simple[s]) + len(bold_children(tcd, g, s)) + len(tcd.bags[s]) - w - 1
        for s in range(tcd.node_count)
    ]
    target = w + 4 + max(0, max(deltas))

    scaffold: Dict[int, Tuple[int, int]] = {}
    next_vertex = g.vertex_count
    for s in range(tcd.node_count):
        if not simple_thin(s):
            scaffold[s] = (next_vertex, next_vertex + 1)
            next_vertex += 2
    edges = [
        (x, y)
        for s, wired in non_simple.items()
        for r in wired
        for x in scaffold[s]
        for y in scaffold[r]
    ]
    bags = [tcd.bags[s] | frozenset(scaffold.get(s, ())) for s in range(tcd.node_count)]
    graph = g.add_vertices(next_vertex - g.vertex_count).add_edges(edges)
    scaffolded = TreeCutDecomposition(tcd.parent, bags)

    padding = max(0, target - three_center(scaffolded, graph, tcd.root).size)
    root = tcd.root
    bags[root] = bags[root] | frozenset(range(next_vertex, next_vertex + padding))
    graph = graph.add_vertices(padding)
    result = prune_empty_leaves(TreeCutDecomposition(tcd.parent, bags))
    logger.info(
        "simple decomposition: width %d raised to %d with %d padding vertices", w, target, padding
    )
    return GstpInstance(graph, inst.terminal_sets, inst.demands), result
