from typing import Optional

from steinerpack.config import SolverCaps
from steinerpack.fn_ilp import decide_by_fracture
from steinerpack.instances import GstpInstance
from steinerpack.solvers.solver import SolveResult, Solver


class FractureSolver(Solver):
    """Decides GSTP through a nice fracture modulator of the vertex-augmented graph.

    Answers without a witness. When ``dump_ilp`` is set, the selector program of the
    last call is written there in the plain listing format of ``write_lp``.
    """

    name = "fnilp"

    def __init__(self, caps: SolverCaps = SolverCaps(), dump_ilp: Optional[str] = None) -> None:
        self.caps = caps
        self.dump_ilp = dump_ilp

    def solve(self, inst: GstpInstance) -> SolveResult:
        return decide_by_fracture(inst, self.caps, self.dump_ilp)
