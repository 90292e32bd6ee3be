"""Bounded integer linear feasibility.

Models hold integer variables with finite bounds and linear constraints. Feasibility
is decided by a complete depth-first branch and bound: bounds are tightened by
constraint propagation at every node, the linear relaxation (HiGHS through
``scipy.optimize.linprog``) prunes nodes whose relaxation is empty, and integral
relaxation optima are accepted once they pass a re-check against the raw
constraints.
"""
import dataclasses
import logging
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

logger = logging.getLogger(__name__)

RELATIONS = ("=", "<=", ">=")


@dataclasses.dataclass(frozen=True)
class Constraint:
    name: str
    coefs: Dict[str, int]
    relation: str
    rhs: int

    def holds(self, assignment: Dict[str, int]) -> bool:
        value = sum(c * assignment[v] for v, c in self.coefs.items())
        if self.relation == "=":
            return value == self.rhs
        if self.relation == "<=":
            return value <= self.rhs
        return value >= self.rhs


class IlpModel:
    """Integer variables with finite bounds plus linear constraints over them."""

    def __init__(self) -> None:
        self.bounds: Dict[str, Tuple[int, int]] = {}
        self.constraints: List[Constraint] = []

    def add_variable(self, name: str, lo: int, hi: int) -> str:
        if name in self.bounds:
            raise ValueError(f"Variable `{name}` is already declared")
        if lo > hi:
            raise ValueError(f"Variable `{name}` has an empty domain [{lo}, {hi}]")
        self.bounds[name] = (int(lo), int(hi))
        return name

    def add_constraint(
        self, coefs: Dict[str, int], relation: str, rhs: int, name: Optional[str] = None
    ) -> Constraint:
        if relation not in RELATIONS:
            raise ValueError(f"Unknown relation `{relation}`")
        unknown = sorted(v for v in coefs if v not in self.bounds)
        if unknown:
            raise ValueError(f"Constraint uses undeclared variables: {', '.join(unknown)}")
        constraint = Constraint(
            name or f"c{len(self.constraints)}",
            {v: int(c) for v, c in sorted(coefs.items()) if c},
            relation,
            int(rhs),
        )
        self.constraints.append(constraint)
        return constraint

    def violated(self, assignment: Dict[str, int]) -> Optional[str]:
        """Name of the first bound or constraint the assignment breaks, if any."""
        for v, (lo, hi) in self.bounds.items():
            if not lo <= assignment[v] <= hi:
                return f"bounds of {v}"
        for constraint in self.constraints:
            if not constraint.holds(assignment):
                return constraint.name
        return None

    def __len__(self) -> int:
        return len(self.bounds)


class IlpResult(NamedTuple):
    feasible: bool
    assignment: Optional[Dict[str, int]]
    nodes: int


class _Rows:
    """The constraints as ``sum(c * x) <= rhs`` rows over variable indices."""

    def __init__(self, model: IlpModel, names: List[str]) -> None:
        index = {name: i for i, name in enumerate(names)}
        self.rows: List[Tuple[List[Tuple[int, int]], int]] = []
        eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
        for constraint in model.constraints:
            terms = [(index[v], c) for v, c in constraint.coefs.items()]
            dense = np.zeros(len(names))
            for i, c in terms:
                dense[i] = c
            if constraint.relation in ("=", "<="):
                self.rows.append((terms, constraint.rhs))
            if constraint.relation in ("=", ">="):
                self.rows.append(([(i, -c) for i, c in terms], -constraint.rhs))
            if constraint.relation == "=":
                eq_rows.append(dense)
                eq_rhs.append(constraint.rhs)
            elif constraint.relation == "<=":
                ub_rows.append(dense)
                ub_rhs.append(constraint.rhs)
            else:
                ub_rows.append(-dense)
                ub_rhs.append(-constraint.rhs)
        self.a_eq = np.array(eq_rows) if eq_rows else None
        self.b_eq = np.array(eq_rhs) if eq_rows else None
        self.a_ub = np.array(ub_rows) if ub_rows else None
        self.b_ub = np.array(ub_rhs) if ub_rows else None
        self.occurrences = [0] * len(names)
        for terms, _ in self.rows:
            for i, _ in terms:
                self.occurrences[i] += 1

    def propagate(self, lo: List[int], hi: List[int], max_rounds: int = 50) -> bool:
        """Tightens bounds in place; False once some row cannot be satisfied."""
        for _ in range(max_rounds):
            changed = False
            for terms, rhs in self.rows:
                least = sum(c * lo[i] if c > 0 else c * hi[i] for i, c in terms)
                if least > rhs:
                    return False
                for i, c in terms:
                    slack = rhs - least + (c * lo[i] if c > 0 else c * hi[i])
                    if c > 0:
                        bound = slack // c
                        if bound < hi[i]:
                            hi[i] = bound
                            changed = True
                    else:
                        bound = -(slack // -c)
                        if bound > lo[i]:
                            lo[i] = bound
                            changed = True
                    if lo[i] > hi[i]:
                        return False
            if not changed:
                return True
        return True

    def relax(self, lo: List[int], hi: List[int]) -> Optional[np.ndarray]:
        """A point of the linear relaxation within the bounds, or None if it is empty."""
        result = linprog(
            np.zeros(len(lo)),
            A_ub=self.a_ub,
            b_ub=self.b_ub,
            A_eq=self.a_eq,
            b_eq=self.b_eq,
            bounds=list(zip(lo, hi)),
            method="highs",
        )
        if result.status == 2:
            return None
        return result.x if result.status == 0 else np.array([(a + b) / 2 for a, b in zip(lo, hi)])


def ilp_feasible(m: IlpModel, use_relaxation: bool = True) -> IlpResult:
    """Decides whether ``m`` has an integral solution and returns one if so."""
    names = sorted(m.bounds)
    if not names:
        feasible = all(c.holds({}) for c in m.constraints)
        return IlpResult(feasible, {} if feasible else None, 1)
    rows = _Rows(m, names)
    stack = [([m.bounds[v][0] for v in names], [m.bounds[v][1] for v in names])]
    nodes = 0
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        if not rows.propagate(lo, hi):
            continue
        point = None
        if use_relaxation and any(a < b for a, b in zip(lo, hi)):
            point = rows.relax(lo, hi)
            if point is None:
                continue
            rounded = {v: int(round(x)) for v, x in zip(names, point)}
            integral = np.allclose(point, [rounded[v] for v in names], atol=1e-7)
            if integral and m.violated(rounded) is None:
                logger.debug(
                    "ilp with %d variables: integral relaxation after %d nodes", len(names), nodes
                )
                return IlpResult(True, rounded, nodes)
        free = [i for i in range(len(names)) if lo[i] < hi[i]]
        if not free:
            assignment = {v: lo[i] for i, v in enumerate(names)}
            if m.violated(assignment) is None:
                logger.debug("ilp with %d variables: feasible after %d nodes", len(names), nodes)
                return IlpResult(True, assignment, nodes)
            continue
        i = min(free, key=lambda j: (hi[j] - lo[j], -rows.occurrences[j], names[j]))
        if point is not None:
            split = min(max(int(np.floor(point[i] + 1e-9)), lo[i]), hi[i] - 1)
        else:
            split = (lo[i] + hi[i]) // 2
        low_lo, low_hi = list(lo), list(hi)
        low_hi[i] = split
        high_lo, high_hi = list(lo), list(hi)
        high_lo[i] = split + 1
        # The lower half is explored first.
        stack.append((high_lo, high_hi))
        stack.append((low_lo, low_hi))
    logger.debug("ilp with %d variables: infeasible after %d nodes", len(names), nodes)
    return IlpResult(False, None, nodes)


def write_lp(m: IlpModel) -> str:
    """Plain-text listing: one ``var`` line per variable, then one ``con`` line per constraint."""
    lines = [f"var {v} {lo} {hi}" for v, (lo, hi) in sorted(m.bounds.items())]
    for constraint in m.constraints:
        terms = " ".join(f"{c}*{v}" for v, c in constraint.coefs.items())
        line = f"con {constraint.name} {terms} {constraint.relation} {constraint.rhs}"
        lines.append(line.replace("  ", " "))
    return "\n".join(lines) + "\n"
