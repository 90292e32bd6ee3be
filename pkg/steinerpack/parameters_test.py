import itertools

import networkx as nx
import pytest

from steinerpack import families
from steinerpack.errors import CapExceededError
from steinerpack.graph import Graph
from steinerpack.instances import AugmentationMode, augment
from steinerpack.parameters import feedback_edge_number, max_degree, minimum_vertex_cover, parameter


@pytest.mark.parametrize("i", [2, 3, 4, 5, 6])
def test_vertex_augmentation_can_blow_up_vertex_cover(i: int) -> None:
    inst = families.star_pairs(i)
    assert parameter(augment(inst, AugmentationMode.VERTEX).graph, "vc") == i + 1
    assert parameter(augment(inst, AugmentationMode.CLIQUE).graph, "vc") == 1
    assert parameter(families.windmill(i), "vc") == i + 1


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_clique_augmentation_can_blow_up_feedback_edges(i: int) -> None:
    inst = families.triangles(i)
    assert parameter(augment(inst, AugmentationMode.CLIQUE).graph, "fen") == i
    assert parameter(augment(inst, AugmentationMode.VERTEX).graph, "fen") == 0
    assert parameter(augment(inst, AugmentationMode.CLIQUE).graph, "fvs") == i


def test_feedback_edge_number_matches_brute_force() -> None:
    for seed in range(20):
        g = families.random_instance(6, 8, 0, seed=seed).graph
        edges = list(g.edges)
        best = next(
            size
            for size in range(len(edges) + 1)
            for removed in itertools.combinations(edges, size)
            if nx.is_forest(Graph(6, [e for e in edges if e not in removed]).simple_networkx())
        )
        assert feedback_edge_number(g) == best


def test_small_values() -> None:
    assert parameter(families.path(5), "fen") == 0
    assert parameter(families.cycle(5), "fvs") == 1
    assert parameter(families.complete(4), "vc") == 3
    assert minimum_vertex_cover(families.star(4)) == {0}
    assert max_degree(families.wall(4)) == 3
    assert max_degree(Graph(0)) == 0
    assert parameter(families.windmill(2), "fracture") == 2


def test_wall_shape() -> None:
    wall = families.wall(4)
    assert wall.vertex_count == 32
    assert parameter(wall, "max_degree") == 3


def test_caps_and_unknown_parameters() -> None:
    with pytest.raises(CapExceededError, match="parameter_vertices"):
        parameter(Graph(21), "vc")
    with pytest.raises(ValueError, match="Unknown parameter"):
        parameter(Graph(2), "tw")
    assert parameter(Graph(30), "fen") == 0
