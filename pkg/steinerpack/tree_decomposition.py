"""Rooted tree decompositions: construction, validation and nice form."""
import enum
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from steinerpack.graph import Graph

logger = logging.getLogger(__name__)


class NodeKind(enum.Enum):
    LEAF = "leaf"
    INTRODUCE = "introduce"
    FORGET = "forget"
    JOIN = "join"


def check_parent_links(parent: Sequence[Optional[int]]) -> int:
    roots = [t for t, p in enumerate(parent) if p is None]
    if len(roots) != 1:
        raise ValueError(f"A decomposition tree needs exactly one root, found {len(roots)}")
    for t, p in enumerate(parent):
        if p is not None and not 0 <= p < len(parent):
            raise ValueError(f"Node {t} has parent {p}, which is not a node")
    for start in range(len(parent)):
        seen = set()
        t: Optional[int] = start
        while t is not None:
            if t in seen:
                raise ValueError("The parent links contain a cycle")
            seen.add(t)
            t = parent[t]
    return roots[0]


class TreeDecomposition:
    """A rooted tree decomposition given by parent links and one bag per node.

    Args:
    - parent: Parent of every node, with None for the root
    - bags: The vertex set of every node
    - kinds: Optional node kinds of a nice decomposition
    """

    def __init__(
        self,
        parent: Sequence[Optional[int]],
        bags: Sequence[Iterable[int]],
        kinds: Optional[Sequence[NodeKind]] = None,
    ) -> None:
        if len(parent) != len(bags):
            raise ValueError("Every node needs exactly one bag")
        if kinds is not None and len(kinds) != len(parent):
            raise ValueError("Every node needs exactly one kind")
        self._root = check_parent_links(parent)
        self._parent: Tuple[Optional[int], ...] = tuple(parent)
        self._bags: Tuple[FrozenSet[int], ...] = tuple(frozenset(b) for b in bags)
        self._kinds: Optional[Tuple[NodeKind, ...]] = None if kinds is None else tuple(kinds)
        self._children: List[List[int]] = [[] for _ in parent]
        for t, p in enumerate(parent):
            if p is not None:
                self._children[p].append(t)

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
    def kinds(self) -> Optional[Tuple[NodeKind, ...]]:
        return self._kinds

    @property
    def node_count(self) -> int:
        return len(self._parent)

    @property
    def width(self) -> int:
        return max((len(b) for b in self._bags), default=0) - 1

    def children(self, t: int) -> List[int]:
        return list(self._children[t])

    def postorder(self) -> List[int]:
        """Nodes with every child before its parent."""
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

    def validate(self, g: Graph) -> None:
        """Raises ``ValueError`` unless the bags cover ``g`` connectedly.

        Every vertex and every edge must lie in some bag.
        """
        for t, bag in enumerate(self._bags):
            if any(not 0 <= v < g.vertex_count for v in bag):
                raise ValueError(f"Bag of node {t} holds a vertex outside the graph")
        holders: Dict[int, List[int]] = {v: [] for v in g.vertices}
        for t, bag in enumerate(self._bags):
            for v in bag:
                holders[v].append(t)
        for v, nodes in holders.items():
            if not nodes:
                raise ValueError(f"Vertex {v} is in no bag")
            # The nodes holding v are connected iff all but one have their parent among them.
            inside = set(nodes)
            tops = [t for t in nodes if self._parent[t] not in inside]
            if len(tops) != 1:
                raise ValueError(f"The bags holding vertex {v} are not connected in the tree")
        for u, v in g.edges:
            if u != v and not set(holders[u]) & set(holders[v]):
                raise ValueError(f"Edge ({u}, {v}) is in no bag")

    def changed_vertex(self, t: int) -> int:
        """The vertex introduced or forgotten at node ``t``."""
        (child,) = self._children[t]
        delta = self._bags[t] ^ self._bags[child]
        if len(delta) != 1:
            raise ValueError(f"Node {t} does not change its bag by exactly one vertex")
        return next(iter(delta))

    def nice_violation(self) -> Optional[str]:
        """Describes the first way in which the decomposition is not nice, if any."""
        if self._kinds is None:
            return "node kinds are missing"
        if self._bags[self._root]:
            return "the root bag is not empty"
        for t, kind in enumerate(self._kinds):
            kids = self._children[t]
            bag = self._bags[t]
            if kind is NodeKind.LEAF:
                if kids or bag:
                    return f"leaf {t} has children or a nonempty bag"
            elif kind is NodeKind.JOIN:
                if len(kids) != 2 or any(self._bags[c] != bag for c in kids):
                    return f"join {t} needs two children with its own bag"
            else:
                if len(kids) != 1:
                    return f"{kind.value} node {t} needs exactly one child"
                child = self._bags[kids[0]]
                grows = kind is NodeKind.INTRODUCE
                small, large = (child, bag) if grows else (bag, child)
                if not (small < large and len(large - small) == 1):
                    return f"{kind.value} node {t} is inconsistent with its child's bag"
        return None

    def is_nice(self) -> bool:
        return self.nice_violation() is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeDecomposition):
            return NotImplemented
        return (self._parent, self._bags, self._kinds) == (other._parent, other._bags, other._kinds)

    def __repr__(self) -> str:
        return f"TreeDecomposition({self.node_count} nodes, width {self.width})"


def from_elimination_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """The decomposition with one bag per vertex.

    The bag of a vertex holds it and its later neighbours in the filled graph.
    """
    if sorted(order) != list(g.vertices):
        raise ValueError("The ordering must list every vertex exactly once")
    if not order:
        return TreeDecomposition([None], [[]])
    position = {v: i for i, v in enumerate(order)}
    adjacency = {v: set(g.neighbors(v)) for v in g.vertices}
    parent: List[Optional[int]] = []
    bags = []
    for i, v in enumerate(order):
        later = {w for w in adjacency[v] if position[w] > i}
        bags.append({v} | later)
        for a in later:
            adjacency[a] |= later - {a}
        parent.append(min((position[w] for w in later), default=None))
    last = len(order) - 1
    # Bags of other components hang below the last one.
    parent = [p if p is not None or t == last else last for t, p in enumerate(parent)]
    return TreeDecomposition(parent, bags)


def _exact_ordering(g: Graph) -> Tuple[int, List[int]]:
    """Minimum width elimination ordering by dynamic programming over vertex subsets."""
    n = g.vertex_count
    adjacency = [sum(1 << w for w in g.neighbors(v)) for v in g.vertices]

    def outside(eliminated: int, v: int) -> int:
        seen = 1 << v
        reached = 0
        stack = [v]
        while stack:
            rest = adjacency[stack.pop()] & ~seen
            while rest:
                bit = rest & -rest
                rest ^= bit
                seen |= bit
                if bit & eliminated:
                    stack.append(bit.bit_length() - 1)
                else:
                    reached += 1
        return reached

    best = [-1] * (1 << n)
    last = [0] * (1 << n)
    for subset in range(1, 1 << n):
        value = n
        rest = subset
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            candidate = max(best[subset ^ bit], outside(subset ^ bit, v))
            if candidate < value:
                value, last[subset] = candidate, v
        best[subset] = value
    order = []
    subset = (1 << n) - 1
    while subset:
        order.append(last[subset])
        subset ^= 1 << last[subset]
    order.reverse()
    return best[(1 << n) - 1], order


def _from_networkx(tree: nx.Graph) -> TreeDecomposition:
    nodes = sorted(tree.nodes, key=lambda bag: (sorted(bag), len(bag)))
    index = {bag: i for i, bag in enumerate(nodes)}
    parent: List[Optional[int]] = [None] * len(nodes)
    for component in nx.connected_components(tree):
        start = min(component, key=lambda bag: index[bag])
        for a, b in nx.bfs_edges(tree, start):
            parent[index[b]] = index[a]
        if index[start] != 0:
            parent[index[start]] = 0
    return TreeDecomposition(parent, nodes)


def tree_decomposition(g: Graph, exact_cap: int = 15) -> TreeDecomposition:
    """A validated tree decomposition of ``g``.

    The width is minimum when ``g`` has at most ``exact_cap`` vertices. Larger graphs
    get the min-fill-in heuristic of networkx.
    """
    if g.vertex_count <= exact_cap:
        width, order = _exact_ordering(g)
        td = from_elimination_ordering(g, order)
        logger.debug("exact tree decomposition of width %d", width)
    else:
        width, tree = treewidth_min_fill_in(g.simple_networkx())
        td = _from_networkx(tree)
        logger.debug("min-fill-in tree decomposition of width %d", width)
    td.validate(g)
    return td


class _NiceBuilder:
    def __init__(self) -> None:
        self.bags: List[FrozenSet[int]] = []
        self.kinds: List[NodeKind] = []
        self.children: List[List[int]] = []

    def add(self, bag: FrozenSet[int], kind: NodeKind, children: List[int]) -> int:
        self.bags.append(bag)
        self.kinds.append(kind)
        self.children.append(children)
        return len(self.bags) - 1

    def adapt(self, node: int, target: FrozenSet[int]) -> int:
        """Forgets, then introduces, one vertex at a time until the bag equals ``target``."""
        for v in sorted(self.bags[node] - target):
            node = self.add(self.bags[node] - {v}, NodeKind.FORGET, [node])
        for v in sorted(target - self.bags[node]):
            node = self.add(self.bags[node] | {v}, NodeKind.INTRODUCE, [node])
        return node

    def build(self, top: int) -> TreeDecomposition:
        parent: List[Optional[int]] = [None] * len(self.bags)
        for t, kids in enumerate(self.children):
            for c in kids:
                parent[c] = t
        assert parent[top] is None
        return TreeDecomposition(parent, self.bags, self.kinds)


def make_nice(td: TreeDecomposition) -> TreeDecomposition:
    """An equivalent nice decomposition of the same width, with empty root and leaf bags."""
    builder = _NiceBuilder()
    top: Dict[int, int] = {}
    for t in td.postorder():
        bag = td.bags[t]
        kids = td.children(t)
        if not kids:
            top[t] = builder.adapt(builder.add(frozenset(), NodeKind.LEAF, []), bag)
            continue
        branches = [builder.adapt(top[c], bag) for c in kids]
        node = branches[0]
        for other in branches[1:]:
            node = builder.add(bag, NodeKind.JOIN, [node, other])
        top[t] = node
    root = builder.adapt(top[td.root], frozenset())
    nice = builder.build(root)
    logger.debug("nice decomposition with %d nodes from %d", nice.node_count, td.node_count)
    return nice
