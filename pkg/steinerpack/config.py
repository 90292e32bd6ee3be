import dataclasses
from typing import Any, Dict, Optional

from steinerpack.errors import FormatError


@dataclasses.dataclass(frozen=True)
class SolverCaps:
    """Scale limits for every solver. Keys double as the keys of a caps file.

    - oracle_edges / oracle_demand / oracle_seconds: brute-force search budgets
    - twdp_demand / twdp_width: total demand and width accepted by the treewidth DP
    - td_exact: largest vertex count for which tree decompositions are exact
    - fnilp_modulator / fnilp_modulator_terminals: fracture pipeline limits on |S| and |T_S|
    - parameter_vertices: largest graph handed to the exact vc / fvs solvers
    """

    oracle_edges: int = 16
    oracle_demand: int = 4
    oracle_seconds: Optional[float] = None
    twdp_demand: int = 4
    twdp_width: int = 4
    td_exact: int = 15
    fnilp_modulator: int = 3
    fnilp_modulator_terminals: int = 1
    parameter_vertices: int = 20

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is not None and value <= 0:
                raise ValueError(f"Cap `{field.name}` must be positive")

    def override(self, **kwargs: Any) -> "SolverCaps":
        """Returns a copy with every non-None keyword applied."""
        changes = {key: value for key, value in kwargs.items() if value is not None}
        unknown = set(changes) - {field.name for field in dataclasses.fields(self)}
        if unknown:
            raise ValueError(f"Unknown caps: {', '.join(sorted(unknown))}")
        return dataclasses.replace(self, **changes)


def parse_caps(text: str) -> SolverCaps:
    """Parses `key value` lines; blank lines and lines starting with `#` or `c` are ignored."""
    known = {field.name for field in dataclasses.fields(SolverCaps)}
    values: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.split()[0] == "c":
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError("expected `key value`", number)
        key, value = tokens
        if key not in known:
            raise FormatError(f"unknown cap `{key}`", number)
        try:
            values[key] = float(value) if key == "oracle_seconds" else int(value)
        except ValueError:
            raise FormatError(f"cap `{key}` needs a number, got `{value}`", number) from None
    try:
        return SolverCaps(**values)
    except ValueError as error:
        raise FormatError(str(error)) from None


def load_caps(path: str) -> SolverCaps:
    with open(path) as handle:
        return parse_caps(handle.read())
