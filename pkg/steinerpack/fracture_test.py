import itertools

import numpy as np
import pytest

from steinerpack import families
from steinerpack.fracture import (
    FractureQuery,
    fracture_deletion,
    fracture_modulator,
    is_fracture_deletion_set,
    is_nice_modulator,
    make_nice_modulator,
)
from steinerpack.graph import Graph
from steinerpack.instances import AugmentationMode, GstpInstance, augment, from_stp
from steinerpack.solvers.oracle import solve_exact


def two_paths() -> Graph:
    return Graph(10, [(v, v + 1) for v in range(4)] + [(v, v + 1) for v in range(5, 9)])


def exists_by_subsets(g: Graph, k: int, d: int) -> bool:
    return any(is_fracture_deletion_set(g, s, k) for s in itertools.combinations(g.vertices, d))


def test_fracture_deletion_fixtures() -> None:
    assert fracture_deletion(families.path(5), FractureQuery(1, 1)) is None
    assert fracture_deletion(two_paths(), FractureQuery(2, 2)) == {2, 7}
    assert fracture_deletion(Graph(1), FractureQuery(1, 0)) == set()
    assert fracture_deletion(Graph(2), FractureQuery(0, 3)) is None
    with pytest.raises(ValueError, match="nonnegative"):
        FractureQuery(-1, 0)


def test_fracture_deletion_matches_subset_search() -> None:
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(1, 9))
        pairs = list(itertools.combinations(range(n), 2))
        keep = rng.random(len(pairs)) < rng.uniform(0.1, 0.6)
        g = Graph(n, [p for p, chosen in zip(pairs, keep) if chosen])
        for k in range(n + 1):
            for d in range(n + 1):
                found = fracture_deletion(g, FractureQuery(k, d))
                assert (found is not None) == exists_by_subsets(g, k, d)
                if found is not None:
                    assert len(found) == d
                    assert is_fracture_deletion_set(g, found, k)


def test_fracture_modulator() -> None:
    s, k = fracture_modulator(families.path(5))
    assert k == 2
    assert is_fracture_deletion_set(families.path(5), s, 2)
    assert fracture_modulator(Graph(1)) == ({0}, 1)
    assert fracture_modulator(families.windmill(2))[1] == 2
    with pytest.raises(ValueError, match="empty graph"):
        fracture_modulator(Graph(0))


def test_fracture_modulator_is_monotone_under_edge_addition() -> None:
    rng = np.random.default_rng(8)
    for seed in range(15):
        g = families.random_instance(7, 6, 0, seed=seed).graph
        missing = [e for e in families.complete(7).edges if not g.has_edge(*e)]
        extra = missing[int(rng.integers(len(missing)))]
        assert fracture_modulator(g.add_edges([extra]))[1] >= fracture_modulator(g)[1]


def test_nice_modulator_unchanged_when_already_nice() -> None:
    inst = from_stp(families.path(3), {0, 2}, 1)
    result = make_nice_modulator(inst, {1, 3})
    assert result.instance == inst
    assert result.modulator == {1, 3}
    assert is_nice_modulator(inst, {1, 3})
    assert solve_exact(result.instance).feasible


def test_nice_modulator_subdivides_inner_edges() -> None:
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    inst = GstpInstance(g, [[0, 3]], [1])
    result = make_nice_modulator(inst, {1, 2, 4})
    assert result.instance.graph.vertex_count >= 5
    assert not result.instance.graph.has_edge(1, 2)
    assert is_nice_modulator(result.instance, result.modulator)
    assert len(result.modulator) <= 6
    assert result.vertex_map[4] == result.instance.graph.vertex_count


def test_nice_modulator_drops_local_terminal_sets() -> None:
    # aug({0, 1}) sees only one component once 1 is in the modulator.
    inst = GstpInstance(families.path(4), [[0, 1]], [1])
    result = make_nice_modulator(inst, {1, 2, 4})
    aug = result.vertex_map[4]
    assert aug not in result.modulator
    assert is_nice_modulator(result.instance, result.modulator)


def test_nice_modulator_rejects_non_modulators() -> None:
    with pytest.raises(ValueError, match="not a fracture modulator"):
        make_nice_modulator(from_stp(families.path(5), {0, 4}, 1), {2})


def test_nice_modulator_preserves_the_decision() -> None:
    checked = 0
    for seed in range(60):
        inst = families.random_instance(5, 5, 1, max_demand=2, seed=seed)
        modulator, _ = fracture_modulator(augment(inst, AugmentationMode.VERTEX).graph)
        result = make_nice_modulator(inst, modulator)
        assert is_nice_modulator(result.instance, result.modulator)
        if result.instance.graph.edge_count <= 16:
            assert solve_exact(result.instance).feasible == solve_exact(inst).feasible
            checked += 1
    assert checked > 0
