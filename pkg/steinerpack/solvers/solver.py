import abc
import dataclasses
import enum
from typing import Any, Dict, Optional

from steinerpack.instances import GstpInstance, Solution


class Status(enum.Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"


@dataclasses.dataclass(frozen=True)
class SolveResult:
    """A solver verdict, with the packing when one was produced."""

    status: Status
    solution: Optional[Solution] = None
    solver: str = ""
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


class Solver:
    """Class representing an exact decision procedure for GSTP.

    Concrete subclasses set ``name`` and implement ``solve()``. Every scale limit a
    solver honors is fixed at construction, so ``solve()`` either answers exactly or
    raises ``CapExceededError``.
    """

    name: str = "solver"

    @abc.abstractmethod
    def solve(self, inst: GstpInstance) -> SolveResult:
        """Decides the instance, attaching a witness when the solver can build one."""
