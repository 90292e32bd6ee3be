import pytest

from steinerpack import families
from steinerpack.graph import Graph
from steinerpack.instances import AugmentationMode, GstpInstance, augment


def test_basic_graphs() -> None:
    assert families.path(4).edge_count == 3
    assert families.cycle(5).edge_count == 5
    assert families.complete(5).edge_count == 10
    assert families.star(3).neighbors(0) == [1, 2, 3]
    assert families.star_spokes(2, 3).multiplicity(0, 2) == 3
    windmill = families.windmill(3)
    assert (windmill.vertex_count, windmill.edge_count) == (7, 9)
    wall = families.wall(2)
    assert wall.vertex_count == 8
    assert max(wall.degree(v) for v in wall.vertices) == 3


def test_parameters_are_checked() -> None:
    with pytest.raises(ValueError, match="`n` must be at least 3"):
        families.cycle(2)
    with pytest.raises(ValueError, match="between 0 and 3 edges"):
        families.random_instance(3, 4, 0)


def test_augmented_fixtures() -> None:
    pairs = families.star_pairs(3)
    assert augment(pairs, AugmentationMode.VERTEX).graph.edge_count == 9
    triangles = families.triangles(2)
    assert triangles.terminal_sets == (frozenset({0, 1, 2}), frozenset({3, 4, 5}))
    assert augment(triangles, AugmentationMode.CLIQUE).graph.edge_count == 6
    leafy = families.leafy_path(3, demand=2)
    assert len(leafy.terminal_sets[0]) == 9
    assert leafy.demands == (2,)


def test_isolated_paths() -> None:
    inst, tcd = families.isolated_paths(1)
    assert inst.graph.vertex_count == 13
    assert len(inst.terminal_sets) == 4
    assert tcd.node_count == 5
    tcd.validate(augment(inst, AugmentationMode.VERTEX).graph)
    assert tcd.bags[1] == frozenset({13, 1, 2, 3})


def test_unlimited_bold_children_shape() -> None:
    g, tcd = families.unlimited_bold_children(3)
    assert g.vertex_count == 16
    assert tcd.node_count == 7
    tcd.validate(g)
    assert tcd.bags[1] == frozenset()


def test_random_instance_is_reproducible() -> None:
    first = families.random_instance(7, 9, 3, max_demand=2, seed=5)
    assert first == families.random_instance(7, 9, 3, max_demand=2, seed=5)
    assert first.graph.edge_count == 9
    assert all(2 <= len(t) <= 3 for t in first.terminal_sets)
    assert all(1 <= d for d in first.demands)


def test_family_lookup() -> None:
    assert families.family("windmill", [3]) == families.windmill(3)
    built = families.family("isolated_paths", [1])
    assert isinstance(built, GstpInstance)
    assert isinstance(families.family("random", [5, 4, 1], seed=2), GstpInstance)
    assert isinstance(families.family("path", [2]), Graph)
    with pytest.raises(ValueError, match="Unknown family"):
        families.family("petersen", [])
    with pytest.raises(ValueError, match="Wrong number of parameters"):
        families.family("windmill", [])
