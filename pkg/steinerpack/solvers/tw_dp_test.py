import numpy as np
import pytest

from steinerpack import families
from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Graph
from steinerpack.instances import GstpInstance, from_edp, from_stp, verify
from steinerpack.solvers.oracle import solve_exact
from steinerpack.solvers.solver import Status
from steinerpack.solvers.tw_dp import (
    DpTuple,
    TreewidthSolver,
    decide_tw,
    dp_forget,
    dp_introduce,
    dp_join,
    dp_leaf,
    enumerate_terminals,
    run_dp,
)
from steinerpack.tree_decomposition import TreeDecomposition, make_nice, tree_decomposition


def test_leaf_tables() -> None:
    assert dp_leaf(0) == {DpTuple.build((), (), {})}
    assert len(dp_leaf(1)) == 2
    two = dp_leaf(2)
    assert len(two) == 4
    assert all(not family for entry in two for _, family in entry.partitions)
    assert DpTuple.build((), (0, 1), {}) in two


def test_introduce_forces_terminals() -> None:
    terminals = [frozenset({5, 6})]
    started = DpTuple.build((), (), {0: []})
    unused = DpTuple.build((), (0,), {})
    out = dp_introduce({started, unused}, 5, [5], terminals)
    assert out == {DpTuple.build((), (), {0: [[5]]})}

    free = dp_introduce({unused}, 7, [7], terminals)
    assert unused in free
    assert DpTuple.build((), (), {0: [[7]]}) in free

    with pytest.raises(ValueError, match="not in the bag"):
        dp_introduce({unused}, 7, [5], terminals)


def test_introduce_extends_every_open_index() -> None:
    entry = DpTuple.build((), (1,), {0: [[2]]})
    out = dp_introduce({entry}, 3, [2, 3], [frozenset({2, 9}), frozenset({8, 9})])
    assert DpTuple.build((), (), {0: [[2], [3]], 1: [[3]]}) in out
    assert len(out) == 4


def test_join() -> None:
    alpha = DpTuple.build((), (0,), {1: [[1], [2]]})
    beta = DpTuple.build((), (0,), {1: [[1, 2]]})
    assert dp_join({alpha}, {beta}) == {DpTuple.build((), (0,), {1: [[1, 2]]})}
    assert dp_join({alpha}, {alpha}) == {alpha}

    done = DpTuple.build((0,), (), {})
    waiting = DpTuple.build((), (0,), {})
    (merged,) = dp_join({done}, {waiting})
    assert merged.bottom == {0}
    assert merged.top == frozenset()
    assert dp_join({done}, {DpTuple.build((), (), {0: []})}) == set()


def test_join_is_commutative() -> None:
    rng = np.random.default_rng(1)
    bag = [0, 1, 2]
    for _ in range(20):
        table = set()
        for _ in range(6):
            states = rng.integers(0, 3, size=2)
            partitions = {}
            for i, state in enumerate(states):
                if state == 2:
                    chosen = [v for v in bag if rng.random() < 0.5]
                    partitions[i] = [[v] for v in chosen]
            bottom = [i for i, s in enumerate(states) if s == 0]
            top = [i for i, s in enumerate(states) if s == 1]
            table.add(DpTuple.build(bottom, top, partitions))
        first, second = set(list(table)[:3]), set(list(table)[3:])
        assert dp_join(first, second) == dp_join(second, first)


def test_forget() -> None:
    terminals = [frozenset({4, 5})]
    untouched = DpTuple.build((), (), {0: [[1]]})
    assert dp_forget({untouched}, 4, [1, 4], [], [1, 4, 5], terminals) == {untouched}

    alone = DpTuple.build((), (), {0: [[4]]})
    assert dp_forget({alone}, 4, [4], [], [4, 5], terminals) == {DpTuple.build((0,), (), {})}
    assert dp_forget({alone}, 4, [4], [], [4], terminals) == set()

    # Using the edge keeps v's block attached to the bag.
    out = dp_forget({alone}, 4, [1, 4], [(1, 4)], [1, 4], terminals)
    assert out == {DpTuple.build((), (), {0: [[1]]})}

    split = DpTuple.build((), (), {0: [[4], [1]]})
    assert dp_forget({split}, 4, [1, 4], [], [1, 4, 5], terminals) == set()
    with pytest.raises(ValueError, match="forgotten vertex"):
        dp_forget({split}, 4, [1, 4], [(1, 2)], [1, 4], terminals)


def test_decide_fixtures() -> None:
    assert decide_tw(GstpInstance(families.path(3), [], [])).feasible
    k4 = families.complete(4)
    assert decide_tw(from_stp(k4, range(4), 2)).status is Status.FEASIBLE
    assert decide_tw(from_stp(k4, range(4), 3)).status is Status.INFEASIBLE
    assert not decide_tw(from_edp(families.cycle(4), [(0, 2), (1, 3)])).feasible
    assert decide_tw(from_edp(families.cycle(4), [(0, 2)])).feasible


def test_caps() -> None:
    with pytest.raises(CapExceededError, match="twdp_demand"):
        decide_tw(from_stp(families.complete(5), range(5), 2), caps=SolverCaps(twdp_demand=1))
    with pytest.raises(CapExceededError, match="twdp_width"):
        decide_tw(from_stp(families.complete(6), [0, 1], 1))


def test_supplied_decomposition_is_validated() -> None:
    inst = from_stp(families.path(3), [0, 2], 1)
    good = TreeDecomposition([None, 0], [[0, 1], [1, 2]])
    assert decide_tw(inst, td=good).feasible
    with pytest.raises(ValueError, match="in no bag"):
        decide_tw(inst, td=TreeDecomposition([None], [[0, 1]]))


def test_witness() -> None:
    inst = GstpInstance(families.complete(4), [[0, 1, 2, 3], [2]], [2, 1])
    result = TreewidthSolver(witness=True).solve(inst)
    assert result.feasible
    assert result.solver == "twdp"
    assert result.solution is not None
    assert verify(inst, result.solution).ok


def test_agrees_with_oracle() -> None:
    checked = 0
    for seed in range(1000):
        if checked == 500:
            break
        inst = families.random_instance(6, 7, 3, seed=seed)
        try:
            result = decide_tw(inst, witness=True)
        except CapExceededError:
            continue
        expected = solve_exact(inst)
        assert result.status is expected.status
        if result.solution is not None:
            assert verify(inst, result.solution).ok
        checked += 1
    assert checked == 500


def test_order_of_equal_indices_does_not_matter() -> None:
    rng = np.random.default_rng(6)
    for seed in range(10):
        inst = families.random_instance(5, 6, 3, seed=seed)
        terminals = enumerate_terminals(inst)
        if not 0 < len(terminals) <= 4:
            continue
        nice = make_nice(tree_decomposition(inst.graph))
        expected = run_dp(inst.graph, nice, terminals).feasible
        shuffled = [terminals[k] for k in rng.permutation(len(terminals))]
        assert run_dp(inst.graph, nice, shuffled).feasible == expected


def test_tables_hold_only_valid_tuples() -> None:
    inst = from_stp(families.cycle(5), [0, 2], 2)
    nice = make_nice(tree_decomposition(inst.graph))
    terminals = enumerate_terminals(inst)
    run = run_dp(inst.graph, nice, terminals)
    assert run.feasible
    for t, table in zip(nice.postorder(), run.tables):
        bag = nice.bags[t]
        assert all(entry.is_valid(len(terminals), bag) for entry in table)
    assert run.statistics.largest_table == max(len(table) for table in run.tables)


def test_run_dp_needs_a_nice_decomposition() -> None:
    with pytest.raises(ValueError, match="not nice"):
        run_dp(Graph(1), TreeDecomposition([None], [[0]]), [])
