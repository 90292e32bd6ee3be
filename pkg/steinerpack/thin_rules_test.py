from typing import List, Tuple

import numpy as np
import pytest

from steinerpack.graph import Edge, Graph
from steinerpack.instances import AugmentationMode, GstpInstance, augment
from steinerpack.reductions import TRIVIAL_NEGATIVE
from steinerpack.solvers.oracle import solve_exact
from steinerpack.thin_rules import (
    ThinReduction,
    apply_thin_reduction,
    reduce_thin_nodes,
    thin_subinstances,
)
from steinerpack.tree_cut import TreeCutDecomposition

TWO_TRIANGLES = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4)])
INNER_BELOW = TreeCutDecomposition([None, 0], [[3, 4, 5], [0, 1, 2]])


def reduce(sets: List[List[int]], demands: List[int]) -> ThinReduction:
    inst = GstpInstance(TWO_TRIANGLES, sets, demands)
    result = apply_thin_reduction(inst, INNER_BELOW, 1, solve_exact)
    assert isinstance(result, ThinReduction)
    return result


def test_subinstances() -> None:
    inst = GstpInstance(TWO_TRIANGLES, [[0, 2], [4, 5]], [1, 1])
    sub = thin_subinstances(inst, INNER_BELOW, 1)
    assert sub.boundary == ((0, 3), (1, 4))
    assert sub.inner == frozenset({0, 1, 2})
    assert sub.contained == (frozenset({0, 2}),)
    assert sub.independent.terminal_sets == (frozenset({0, 2}),)
    assert sub.supply.demand_of({0, 1}) == 1
    assert sub.demand.graph.edges == {(0, 1): 1, (0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1}
    assert sub.outer_map[5] == sub.outer_map[3] == 3


def test_preconditions() -> None:
    with pytest.raises(ValueError, match="root has no link"):
        thin_subinstances(GstpInstance(TWO_TRIANGLES, [], []), INNER_BELOW, 0)
    with pytest.raises(ValueError, match="crosses the link"):
        thin_subinstances(GstpInstance(TWO_TRIANGLES, [[0, 3]], [1]), INNER_BELOW, 1)
    with pytest.raises(ValueError, match="1 host vertices"):
        thin_subinstances(
            GstpInstance(TWO_TRIANGLES, [], []),
            TreeCutDecomposition([None, 0], [[0, 1, 3, 4, 5], [2]]),
            1,
        )
    with pytest.raises(ValueError, match="host adhesion 3, not 2"):
        thin_subinstances(
            GstpInstance(TWO_TRIANGLES.add_edges([(2, 5)]), [], []), INNER_BELOW, 1
        )


def test_supply_rule_contracts_the_inside() -> None:
    result = reduce([[0, 2]], [1])
    assert result.rules == ("supply",)
    assert result.instance.terminal_sets == ()
    assert result.instance.graph.edges == {(0, 1): 1, (0, 2): 1, (1, 2): 1, (1, 3): 1, (2, 3): 1}
    assert result.decomposition == TreeCutDecomposition([None, 0], [[1, 2, 3], [0]])


def test_independent_rule_deletes_the_inside() -> None:
    result = reduce([[0, 1]], [2])
    assert result.rules == ("independent",)
    assert result.instance.graph.edges == {(0, 1): 1, (0, 2): 1, (1, 2): 1}
    assert result.decomposition == TreeCutDecomposition([None], [[0, 1, 2]])


def test_demand_rule_moves_one_path_outside() -> None:
    result = reduce([[0, 1]], [3])
    assert result.rules == ("demand",)
    assert result.instance.terminal_sets == (frozenset({0, 1}),)
    assert result.instance.demands == (1,)


def test_all_negative() -> None:
    inst = GstpInstance(TWO_TRIANGLES, [[0, 2], [1, 2]], [2, 1])
    assert apply_thin_reduction(inst, INNER_BELOW, 1, solve_exact) is TRIVIAL_NEGATIVE
    assert not solve_exact(inst).feasible


def test_demand_rule_on_the_augmented_decomposition() -> None:
    inst = GstpInstance(TWO_TRIANGLES, [[0, 1], [3, 5]], [3, 1])
    tcd = TreeCutDecomposition([None, 0], [[3, 4, 5, 7], [0, 1, 2, 6]])
    tcd.validate(augment(inst, AugmentationMode.VERTEX).graph)
    result = apply_thin_reduction(inst, tcd, 1, solve_exact)
    assert isinstance(result, ThinReduction)
    assert result.rules == ("demand",)
    assert result.instance.terminal_sets == (frozenset({0, 1}), frozenset({0, 2}))
    assert result.decomposition == TreeCutDecomposition([None, 0], [[0, 1, 2, 4], [3]])


def blobs(seed: int) -> Tuple[GstpInstance, TreeCutDecomposition]:
    """Random blobs on {0..3} and {4..7} joined by two distinct edges."""
    rng = np.random.default_rng(seed)
    edges: List[Edge] = [
        (u, v)
        for base in (0, 4)
        for u in range(base, base + 4)
        for v in range(u + 1, base + 4)
        if rng.random() < 0.6
    ]
    crossing = [(u, v) for u in range(4) for v in range(4, 8)]
    for k in rng.choice(len(crossing), size=2, replace=False):
        edges.append(crossing[int(k)])
    sets = []
    for base in (0, 4):
        for _ in range(int(rng.integers(0, 3))):
            sets.append([base + int(v) for v in rng.choice(4, size=2, replace=False)])
    tcd = TreeCutDecomposition([None, 0], [range(4, 8), range(4)])
    return GstpInstance(Graph(8, edges), sets, [1] * len(sets)), tcd


def test_single_rule_preserves_the_answer() -> None:
    for seed in range(100):
        inst, tcd = blobs(seed)
        expected = solve_exact(inst).status
        result = apply_thin_reduction(inst, tcd, 1, solve_exact)
        if result is TRIVIAL_NEGATIVE:
            assert not solve_exact(inst).feasible
            continue
        assert isinstance(result, ThinReduction)
        assert solve_exact(result.instance).status is expected


def test_driver_preserves_the_answer() -> None:
    for seed in range(40):
        inst, tcd = blobs(seed)
        result = reduce_thin_nodes(inst, tcd, solve_exact)
        if result is TRIVIAL_NEGATIVE:
            assert not solve_exact(inst).feasible
            continue
        assert isinstance(result, ThinReduction)
        assert 1 <= len(result.rules)
        assert result.instance.graph.vertex_count < inst.graph.vertex_count
        result.decomposition.validate(result.instance.graph)
        assert solve_exact(result.instance).status is solve_exact(inst).status


def test_driver_leaves_a_contracted_pair_alone() -> None:
    # Both link edges of {0, 1} end at 2, so contracting it would rebuild it.
    g = Graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    inst = GstpInstance(g, [[2, 3]], [1])
    tcd = TreeCutDecomposition([None, 0], [[2, 3], [0, 1]])
    with pytest.raises(ValueError, match="already contracted"):
        thin_subinstances(inst, tcd, 1)
    result = reduce_thin_nodes(inst, tcd, solve_exact)
    assert isinstance(result, ThinReduction)
    assert result.rules == ()
    assert result.instance is inst
