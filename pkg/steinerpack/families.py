"""Named graph and instance families used as fixtures and generator inputs.

Every generator is a pure function of its parameters (and of ``seed`` for the
random family), so fixtures built from them are reproducible.
"""
import itertools
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from steinerpack.graph import Edge, Graph
from steinerpack.instances import GstpInstance, from_stp
from steinerpack.tree_cut import TreeCutDecomposition


def _positive(name: str, value: int, minimum: int = 1) -> None:
    if value < minimum:
        raise ValueError(f"`{name}` must be at least {minimum}, got {value}")


def path(n: int) -> Graph:
    _positive("n", n, 0)
    return Graph(n, [(v, v + 1) for v in range(n - 1)])


def cycle(n: int) -> Graph:
    _positive("n", n, 3)
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def complete(n: int) -> Graph:
    _positive("n", n, 0)
    return Graph(n, itertools.combinations(range(n), 2))


def star(n: int) -> Graph:
    """Star with center 0 and leaves 1..n."""
    _positive("n", n, 0)
    return Graph(n + 1, [(0, v) for v in range(1, n + 1)])


def star_spokes(n: int, k: int) -> Graph:
    """Center 0 joined to each of n outer vertices by k parallel edges."""
    _positive("n", n)
    _positive("k", k)
    return Graph(n + 1, {(0, v): k for v in range(1, n + 1)}, multigraph=True)


def windmill(n: int) -> Graph:
    """n triangles sharing the center 0; blade j is {0, 2j+1, 2j+2}."""
    _positive("n", n)
    edges: List[Edge] = []
    for j in range(n):
        a, b = 2 * j + 1, 2 * j + 2
        edges += [(0, a), (0, b), (a, b)]
    return Graph(2 * n + 1, edges)


def wall(n: int) -> Graph:
    """The wall of height n: n rows of 2n vertices, with rungs at alternating columns.

    Vertex (r, c) has index r * 2n + c. Rows are paths, and (r, c) joins (r + 1, c)
    exactly when r + c is even, so every vertex has at most one rung.
    """
    _positive("n", n)
    width = 2 * n

    def index(r: int, c: int) -> int:
        return r * width + c

    edges = [(index(r, c), index(r, c + 1)) for r in range(n) for c in range(width - 1)]
    edges += [
        (index(r, c), index(r + 1, c))
        for r in range(n - 1)
        for c in range(width)
        if (r + c) % 2 == 0
    ]
    return Graph(n * width, edges)


def star_pairs(i: int) -> GstpInstance:
    """Star with one pair {center, leaf} per leaf; its vertex augmentation is a windmill."""
    _positive("i", i)
    g = star(i)
    return GstpInstance(g, [{0, v} for v in range(1, i + 1)], [1] * i)


def star_leaves(i: int) -> GstpInstance:
    """Star whose single terminal set is the set of all leaves."""
    _positive("i", i)
    return from_stp(star(i), range(1, i + 1), 1)


def triangles(i: int) -> GstpInstance:
    """3i isolated vertices whose terminal sets are the consecutive triples.

    Clique augmentation yields i disjoint triangles, vertex augmentation a forest.
    """
    _positive("i", i)
    return GstpInstance(Graph(3 * i), [range(3 * j, 3 * j + 3) for j in range(i)], [1] * i)


def isolated_paths(i: int) -> Tuple[GstpInstance, TreeCutDecomposition]:
    """A center 0 plus 4i^4 isolated three-vertex paths P_j, with terminal sets {0} + P_j.

    Also returns a tree-cut decomposition of the vertex-augmented graph: the root bag
    is {0} and child j holds aug({0} + P_j) together with P_j.
    """
    _positive("i", i)
    count = 4 * i**4
    edges: List[Edge] = []
    terminal_sets = []
    for j in range(count):
        a, b, c = 1 + 3 * j, 2 + 3 * j, 3 + 3 * j
        edges += [(a, b), (b, c)]
        terminal_sets.append({0, a, b, c})
    n = 1 + 3 * count
    inst = GstpInstance(Graph(n, edges), terminal_sets, [1] * count)
    # Terminal sets are already in canonical order, so aug(T_j) is n + j.
    parent: List[Optional[int]] = [None] + [0] * count
    bags = [[0]] + [[n + j, 1 + 3 * j, 2 + 3 * j, 3 + 3 * j] for j in range(count)]
    return inst, TreeCutDecomposition(parent, bags)


def leafy_path(n: int, demand: int = 1) -> GstpInstance:
    """Steiner tree packing on a path of n vertices with three leaves hung on each.

    The terminal set is the set of all leaves.
    """
    _positive("n", n)
    edges = [(v, v + 1) for v in range(n - 1)]
    leaves = []
    for v in range(n):
        for k in range(3):
            leaf = n + 3 * v + k
            edges.append((v, leaf))
            leaves.append(leaf)
    return from_stp(Graph(4 * n, edges), leaves, demand)


def unlimited_bold_children(length: int) -> Tuple[Graph, TreeCutDecomposition]:
    """A nice decomposition of width 5 whose thin node has ``length + 2`` bold children.

    Vertices 0 and 1 form the root bag. Below it sits an empty node m whose children
    are a ladder of ``length`` rungs {a_i, b_i} (adhesion 4 each) and two 4-paths
    u and v (adhesion 5 each) joined rung by rung. The ladder hangs between the root
    and the two paths, so every rung becomes a fake node of m.
    """
    _positive("length", length)
    a = [2 + 2 * i for i in range(length)]
    b = [3 + 2 * i for i in range(length)]
    u = [2 + 2 * length + k for k in range(4)]
    v = [6 + 2 * length + k for k in range(4)]
    edges: List[Edge] = [(0, 1), (a[0], 0), (b[0], 1), (a[-1], u[0]), (b[-1], v[0])]
    edges += [(a[i], b[i]) for i in range(length)]
    edges += [(a[i], a[i + 1]) for i in range(length - 1)]
    edges += [(b[i], b[i + 1]) for i in range(length - 1)]
    edges += [(u[k], u[k + 1]) for k in range(3)] + [(v[k], v[k + 1]) for k in range(3)]
    edges += [(u[k], v[k]) for k in range(4)]
    g = Graph(10 + 2 * length, edges)

    # Node 0 is the root, node 1 is m, then the rungs, then the two paths.
    parent: List[Optional[int]] = [None, 0] + [1] * (length + 2)
    bags: List[Sequence[int]] = [[0, 1], []]
    bags += [[a[i], b[i]] for i in range(length)]
    bags += [u, v]
    return g, TreeCutDecomposition(parent, bags)


def random_instance(
    n: int,
    m: int,
    t: int,
    max_demand: int = 1,
    seed: Optional[int] = None,
    max_set_size: int = 3,
) -> GstpInstance:
    """Random simple graph with ``m`` distinct edges and ``t`` random terminal sets.

    Terminal sets have between 2 and ``max_set_size`` members and uniform demands in
    ``[1, max_demand]``. Sets drawn twice merge, so the family may end up smaller.
    """
    _positive("n", n, 2)
    _positive("t", t, 0)
    _positive("max_demand", max_demand)
    pairs = list(itertools.combinations(range(n), 2))
    if not 0 <= m <= len(pairs):
        raise ValueError(f"A simple graph on {n} vertices has between 0 and {len(pairs)} edges")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(pairs), size=m, replace=False)
    g = Graph(n, [pairs[k] for k in sorted(chosen)])
    terminal_sets = []
    for _ in range(t):
        size = int(rng.integers(2, min(n, max_set_size) + 1))
        terminal_sets.append(rng.choice(n, size=size, replace=False).tolist())
    demands = rng.integers(1, max_demand + 1, size=t).tolist()
    return GstpInstance(g, terminal_sets, demands)


FAMILIES: Dict[str, Callable[..., Any]] = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "star": star,
    "star_spokes": star_spokes,
    "windmill": windmill,
    "wall": wall,
    "star_pairs": star_pairs,
    "star_leaves": star_leaves,
    "triangles": triangles,
    "isolated_paths": isolated_paths,
    "leafy_path": leafy_path,
    "unlimited_bold_children": unlimited_bold_children,
    "random": random_instance,
}


def family(
    name: str, params: Sequence[int], seed: Optional[int] = None
) -> Union[Graph, GstpInstance]:
    """Builds a family member by name.

    Families that come with a decomposition return only the graph or instance here.
    ``seed`` is only meaningful for ``random``.
    """
    if name not in FAMILIES:
        raise ValueError(f"Unknown family `{name}`; choose from {', '.join(sorted(FAMILIES))}")
    try:
        if name == "random":
            built = random_instance(*params, seed=seed)
        else:
            built = FAMILIES[name](*params)
    except TypeError:
        raise ValueError(f"Wrong number of parameters for family `{name}`") from None
    if isinstance(built, tuple):
        return built[0]
    return built
