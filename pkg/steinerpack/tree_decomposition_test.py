import collections

import numpy as np
import pytest

from steinerpack import families
from steinerpack.graph import Graph
from steinerpack.tree_decomposition import (
    NodeKind,
    TreeDecomposition,
    from_elimination_ordering,
    make_nice,
    tree_decomposition,
)


def shape(td: TreeDecomposition) -> collections.Counter:
    assert td.kinds is not None
    return collections.Counter((kind, td.bags[t]) for t, kind in enumerate(td.kinds))


def test_exact_widths() -> None:
    assert tree_decomposition(families.path(5)).width == 1
    assert tree_decomposition(families.star(4)).width == 1
    assert tree_decomposition(families.complete(4)).width == 3
    assert tree_decomposition(families.cycle(5)).width == 2
    assert tree_decomposition(families.windmill(3)).width == 2
    assert tree_decomposition(Graph(3)).width == 0
    assert tree_decomposition(Graph(0)).width == -1


def test_heuristic_beyond_the_exact_cap() -> None:
    g = families.wall(2)
    exact = tree_decomposition(g)
    heuristic = tree_decomposition(g, exact_cap=3)
    heuristic.validate(g)
    assert heuristic.width >= exact.width == 2


def test_exact_width_is_never_beaten() -> None:
    for seed in range(10):
        g = families.random_instance(8, 12, 0, seed=seed).graph
        assert tree_decomposition(g).width <= tree_decomposition(g, exact_cap=1).width


def test_elimination_ordering() -> None:
    td = from_elimination_ordering(families.cycle(4), [0, 1, 2, 3])
    td.validate(families.cycle(4))
    assert td.width == 2
    with pytest.raises(ValueError, match="every vertex exactly once"):
        from_elimination_ordering(families.cycle(4), [0, 1, 2])


def test_validation() -> None:
    g = families.path(3)
    TreeDecomposition([None, 0], [[0, 1], [1, 2]]).validate(g)
    with pytest.raises(ValueError, match="in no bag"):
        TreeDecomposition([None], [[0, 1]]).validate(g)
    with pytest.raises(ValueError, match=r"Edge \(1, 2\) is in no bag"):
        TreeDecomposition([None, 0], [[0, 1], [2]]).validate(g)
    with pytest.raises(ValueError, match="not connected"):
        TreeDecomposition([None, 0, 1], [[0, 1], [2], [1, 2]]).validate(g)
    with pytest.raises(ValueError, match="outside the graph"):
        TreeDecomposition([None], [[0, 1, 2, 3]]).validate(g)
    with pytest.raises(ValueError, match="exactly one root"):
        TreeDecomposition([None, None], [[0], [1]])
    with pytest.raises(ValueError, match="cycle"):
        TreeDecomposition([None, 2, 1], [[0], [1], [2]])


def test_make_nice_single_bag() -> None:
    nice = make_nice(TreeDecomposition([None], [[0, 1, 2]]))
    assert nice.is_nice()
    assert nice.width == 2
    assert nice.node_count == 7
    assert nice.bags[nice.root] == frozenset()
    counts = collections.Counter(nice.kinds)
    assert counts == {NodeKind.LEAF: 1, NodeKind.INTRODUCE: 3, NodeKind.FORGET: 3}


def test_make_nice_keeps_nice_decompositions() -> None:
    nice = make_nice(tree_decomposition(families.windmill(2)))
    again = make_nice(nice)
    assert again.node_count == nice.node_count
    assert shape(again) == shape(nice)


def test_make_nice_on_random_graphs() -> None:
    rng = np.random.default_rng(2)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(0, n * (n - 1) // 2 + 1))
        g = families.random_instance(n, m, 0, seed=int(rng.integers(1000))).graph
        td = tree_decomposition(g)
        nice = make_nice(td)
        assert nice.nice_violation() is None
        nice.validate(g)
        assert nice.width == td.width


def test_nice_violations() -> None:
    td = TreeDecomposition([None, 0], [[0], [0]], [NodeKind.FORGET, NodeKind.LEAF])
    assert td.nice_violation() == "the root bag is not empty"
    assert TreeDecomposition([None], [[]]).nice_violation() == "node kinds are missing"
    bad_join = TreeDecomposition(
        [None, 0, 1, 1],
        [[], [0], [], []],
        [NodeKind.FORGET, NodeKind.JOIN, NodeKind.LEAF, NodeKind.LEAF],
    )
    assert bad_join.nice_violation() == "join 1 needs two children with its own bag"
