import pytest

from steinerpack import families
from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Graph
from steinerpack.instances import GstpInstance, from_edp, from_stp, verify
from steinerpack.solvers.dispatch import DispatchSolver, dispatch, make_solver, stp_dispatch
from steinerpack.solvers.fracture_ilp import FractureSolver
from steinerpack.solvers.oracle import OracleSolver, solve_exact
from steinerpack.solvers.solver import Status


def test_small_instances_take_the_dp() -> None:
    inst = from_stp(families.complete(4), range(4), 2)
    result = dispatch(inst, witness=True)
    assert result.feasible
    assert result.solver == "twdp"
    assert result.details["branches"] == ["twdp"]
    assert result.solution is not None
    assert verify(inst, result.solution).ok


def test_trivial_negatives() -> None:
    star = from_stp(families.star(3), range(4), 2)
    assert dispatch(star).details == {"rule": "degree negative"}
    split = from_edp(Graph(4, [(0, 1), (2, 3)]), [(0, 2)])
    result = dispatch(split)
    assert result.status is Status.INFEASIBLE
    assert result.details["rule"] == "terminal set spans components"


def test_components_are_solved_separately() -> None:
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)])
    inst = GstpInstance(g, [[0, 2], [3, 5], [1]], [2, 1, 1])
    result = dispatch(inst, witness=True)
    assert result.feasible
    assert result.details["components"] == 2
    assert result.details["branches"] == ["twdp", "twdp"]
    assert result.solution is not None
    assert verify(inst, result.solution).ok

    infeasible = GstpInstance(g, [[0, 2], [3, 5]], [2, 2])
    assert dispatch(infeasible).status is Status.INFEASIBLE


def test_falls_through_exceeded_caps() -> None:
    inst = from_stp(families.complete(4), range(4), 2)
    caps = SolverCaps(twdp_demand=1, fnilp_modulator=1)
    result = dispatch(inst, caps, witness=True)
    assert result.solver == "oracle"
    assert result.solution is not None
    assert verify(inst, result.solution).ok
    only_oracle = dispatch(inst, route=["oracle"])
    assert only_oracle.details["branches"] == ["oracle"]


def test_route_order_is_fixed() -> None:
    # The fracture pipeline accepts this path too, but the DP comes first.
    inst = from_stp(families.path(3), [0, 2], 1)
    assert dispatch(inst).details["branches"] == ["twdp"]
    assert dispatch(inst, route=["fnilp", "twdp"]).details["branches"] == ["fnilp"]
    assert DispatchSolver().solve(inst).details["branches"] == ["twdp"]


def test_beyond_every_cap() -> None:
    with pytest.raises(CapExceededError, match="oracle_edges"):
        dispatch(from_stp(families.complete(8), [0, 1], 1))
    with pytest.raises(ValueError, match="route"):
        dispatch(from_stp(families.path(2), [0, 1], 1), route=["magic"])


def test_stp_cases() -> None:
    small = stp_dispatch(from_stp(families.complete(4), [0, 1], 1))
    assert small.details["case"] == "small terminal set"
    assert small.details["width"] == 3
    large = stp_dispatch(from_stp(families.path(5), range(5), 1))
    assert large.details["case"] == "large terminal set"
    assert large.feasible
    with pytest.raises(ValueError, match="exactly one terminal set"):
        stp_dispatch(from_edp(families.cycle(4), [(0, 2), (1, 3)]))


def test_auto_solver_agrees_with_oracle() -> None:
    solver = DispatchSolver(witness=True)
    for seed in range(15):
        inst = families.random_instance(6, 8, 2, seed=seed)
        result = solver.solve(inst)
        assert result.status is solve_exact(inst).status
        if result.solution is not None:
            assert verify(inst, result.solution).ok


def test_make_solver() -> None:
    caps = SolverCaps(oracle_edges=7)
    oracle = make_solver("oracle", caps)
    assert isinstance(oracle, OracleSolver)
    assert oracle.cfg.edge_budget == 7
    fnilp = make_solver("fnilp", dump_ilp="selector.lp")
    assert isinstance(fnilp, FractureSolver)
    assert fnilp.dump_ilp == "selector.lp"
    assert make_solver("auto").name == "auto"
    assert make_solver("twdp").name == "twdp"
    with pytest.raises(ValueError, match="Unknown algorithm `magic`"):
        make_solver("magic")
