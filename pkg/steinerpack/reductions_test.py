from typing import List

import numpy as np

from steinerpack import families, reductions
from steinerpack.graph import Graph
from steinerpack.instances import GstpInstance, from_stp, verify
from steinerpack.solvers.oracle import solve_exact


def corpus(count: int, seed: int) -> List[GstpInstance]:
    rng = np.random.default_rng(seed)
    result = []
    for _ in range(count):
        n = int(rng.integers(3, 7))
        m = int(rng.integers(0, min(9, n * (n - 1) // 2) + 1))
        result.append(
            families.random_instance(n, m, 2, max_demand=2, seed=int(rng.integers(1 << 30)))
        )
    return result


def test_remove_small_terminal_sets() -> None:
    inst = GstpInstance(families.path(3), [[], [1], [0, 2]], [1, 2, 1])
    reduced = reductions.remove_small_terminal_sets(inst)
    assert reduced.terminal_sets == ({0, 2},)
    assert reduced.demands == (1,)


def test_small_terminal_sets_do_not_change_the_decision() -> None:
    rng = np.random.default_rng(5)
    for inst in corpus(100, 1):
        v = int(rng.integers(inst.graph.vertex_count))
        padded = inst.add_demand({v}, int(rng.integers(1, 3)))
        assert solve_exact(padded).feasible == solve_exact(inst).feasible


def test_degree_negative() -> None:
    inst = from_stp(families.path(3), {0, 2}, 2)
    assert reductions.degree_negative(inst)
    assert reductions.apply_basic_rules(inst) is reductions.TRIVIAL_NEGATIVE
    assert not reductions.degree_negative(from_stp(families.path(3), {0, 2}, 1))
    # Singleton sets carry no load.
    assert not reductions.degree_negative(GstpInstance(Graph(1), [[0]], [4]))


def test_degree_negative_instances_are_infeasible() -> None:
    for inst in corpus(100, 2):
        if reductions.degree_negative(inst):
            assert not solve_exact(inst).feasible


def test_split_components() -> None:
    g = Graph(5, [(0, 1), (2, 3), (3, 4)])
    inst = GstpInstance(g, [[0, 1], [2, 4], []], [1, 1, 1])
    pieces = reductions.split_components(inst)
    assert not isinstance(pieces, reductions.TrivialNegative)
    assert [p.instance.graph.vertex_count for p in pieces] == [2, 3]
    assert pieces[1].instance.terminal_sets == ({0, 2},)
    assert pieces[1].vertex_map == {2: 0, 3: 1, 4: 2}

    crossing = GstpInstance(g, [[0, 4]], [1])
    assert reductions.split_components(crossing) is reductions.TRIVIAL_NEGATIVE


def test_split_components_preserves_the_decision() -> None:
    for inst in corpus(100, 3):
        pieces = reductions.split_components(inst)
        expected = solve_exact(inst).feasible
        if isinstance(pieces, reductions.TrivialNegative):
            assert not expected
            continue
        results = [solve_exact(piece.instance) for piece in pieces]
        assert all(r.feasible for r in results) == expected
        if expected:
            lifted = [
                part
                for piece, result in zip(pieces, results)
                for part in reductions.lift_component_solution(inst, piece, result.solution or [])
            ]
            assert verify(inst, lifted).ok
