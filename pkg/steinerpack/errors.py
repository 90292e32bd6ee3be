from typing import Optional


class CapExceededError(ValueError):
    """Raised when an instance is beyond the configured scale of a solver.

    Args:
    - solver: Name of the solver (or pipeline stage) that refused the input
    - cap: Name of the cap, matching the key used in caps files
    - limit: The configured limit
    - value: The observed value that exceeded the limit
    """

    def __init__(self, solver: str, cap: str, limit: object, value: object) -> None:
        super().__init__(f"{solver}: {cap} is {value}, exceeding the cap of {limit}")
        self.solver = solver
        self.cap = cap
        self.limit = limit
        self.value = value


class FormatError(ValueError):
    """Raised when instance, decomposition, solution or caps text is malformed."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
