"""Routes every component of an instance along a fixed order of exact solvers.

The default order is the tree-width DP, then the fracture pipeline, then the oracle.
The first solver whose caps the component fits answers; no parameter is compared.
"""
import dataclasses
import logging
from typing import Dict, List, Optional, Sequence

from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.instances import GstpInstance, Part
from steinerpack.reductions import (
    TRIVIAL_NEGATIVE,
    apply_basic_rules,
    lift_component_solution,
    restore_singletons,
    split_components,
)
from steinerpack.solvers.fracture_ilp import FractureSolver
from steinerpack.solvers.oracle import OracleConfig, OracleSolver
from steinerpack.solvers.solver import SolveResult, Solver, Status
from steinerpack.solvers.tw_dp import TreewidthSolver
from steinerpack.tree_decomposition import tree_decomposition

logger = logging.getLogger(__name__)

ROUTE = ("twdp", "fnilp", "oracle")


def _solvers(caps: SolverCaps, witness: bool) -> Dict[str, Solver]:
    return {
        "twdp": TreewidthSolver(caps, witness),
        "fnilp": FractureSolver(caps),
        "oracle": OracleSolver(OracleConfig.from_caps(caps)),
    }


def _first_applicable(
    piece: GstpInstance, solvers: Dict[str, Solver], route: Sequence[str]
) -> SolveResult:
    error: Optional[CapExceededError] = None
    for name in route:
        try:
            result = solvers[name].solve(piece)
        except CapExceededError as exceeded:
            logger.debug("%s", exceeded)
            error = exceeded
            continue
        logger.info("dispatch: %s answered %s", name, result.status.value)
        return result
    assert error is not None
    raise error


def dispatch(
    inst: GstpInstance,
    caps: SolverCaps = SolverCaps(),
    witness: bool = False,
    route: Sequence[str] = ROUTE,
) -> SolveResult:
    """Decides ``inst`` after the basic rules, one connected component at a time.

    Every component goes to the first solver in ``route`` that accepts it, in that
    order, even when a later solver would see a smaller parameter. The
    ``branches`` detail lists the answering solver per component with terminal sets.
    A witness is attached when requested and every answering solver built one.
    Raises the last ``CapExceededError`` when no solver accepts some component.
    """
    unknown = set(route) - set(ROUTE)
    if not route or unknown:
        raise ValueError(f"A route is a nonempty sequence over {', '.join(ROUTE)}")
    reduced = apply_basic_rules(inst)
    if reduced is TRIVIAL_NEGATIVE:
        return SolveResult(Status.INFEASIBLE, solver="auto", details={"rule": "degree negative"})
    pieces = split_components(reduced)
    if pieces is TRIVIAL_NEGATIVE:
        return SolveResult(
            Status.INFEASIBLE, solver="auto", details={"rule": "terminal set spans components"}
        )

    solvers = _solvers(caps, witness)
    branches: List[str] = []
    parts: Optional[List[Part]] = []
    for piece in pieces:
        if not piece.instance.terminal_sets:
            continue
        result = _first_applicable(piece.instance, solvers, route)
        branches.append(result.solver)
        if not result.feasible:
            details = {"branches": branches, **result.details}
            return SolveResult(Status.INFEASIBLE, solver=result.solver, details=details)
        if parts is not None and result.solution is not None:
            parts += lift_component_solution(reduced, piece, result.solution)
        else:
            parts = None

    solution = None
    if witness and parts is not None:
        solution = restore_singletons(inst, reduced, parts)
    solver = branches[0] if len(set(branches)) == 1 else "auto"
    details = {"branches": branches, "components": len(pieces)}
    return SolveResult(Status.FEASIBLE, solution, solver, details)


def stp_dispatch(
    inst: GstpInstance, caps: SolverCaps = SolverCaps(), witness: bool = False
) -> SolveResult:
    """``dispatch`` for a single terminal set, recording which size case applies.

    The terminal set is small when it has at most w vertices for the width w of a
    tree decomposition of the host graph. Both cases take the same route.
    """
    if len(inst.terminal_sets) != 1:
        raise ValueError(
            f"An STP instance has exactly one terminal set, got {len(inst.terminal_sets)}"
        )
    (terminal_set,) = inst.terminal_sets
    width = tree_decomposition(inst.graph, caps.td_exact).width
    case = "small terminal set" if len(terminal_set) <= width else "large terminal set"
    logger.info("stp dispatch: |T| = %d, width %d, %s", len(terminal_set), width, case)
    result = dispatch(inst, caps, witness)
    return dataclasses.replace(result, details={**result.details, "case": case, "width": width})


class DispatchSolver(Solver):
    """The ``auto`` algorithm.

    STP instances go through ``stp_dispatch``, all others through ``dispatch``. Both
    use the fixed order in ``ROUTE``.
    """

    name = "auto"

    def __init__(self, caps: SolverCaps = SolverCaps(), witness: bool = False) -> None:
        self.caps = caps
        self.witness = witness

    def solve(self, inst: GstpInstance) -> SolveResult:
        if len(inst.terminal_sets) == 1:
            return stp_dispatch(inst, self.caps, self.witness)
        return dispatch(inst, self.caps, self.witness)


ALGORITHMS = ("oracle", "twdp", "fnilp", "auto")


def make_solver(
    algo: str,
    caps: SolverCaps = SolverCaps(),
    witness: bool = False,
    dump_ilp: Optional[str] = None,
) -> Solver:
    """The solver behind an ``--algo`` name."""
    if algo == "oracle":
        return OracleSolver(OracleConfig.from_caps(caps))
    if algo == "twdp":
        return TreewidthSolver(caps, witness)
    if algo == "fnilp":
        return FractureSolver(caps, dump_ilp)
    if algo == "auto":
        return DispatchSolver(caps, witness)
    raise ValueError(f"Unknown algorithm `{algo}`; choose from {', '.join(ALGORITHMS)}")
