"""Brute-force exact decision for GSTP.

Each demanded copy of a terminal set becomes one required tree. Trees are placed one
after another, each chosen among the inclusion-minimal trees (every leaf a terminal)
in the edges left over by the previous ones. Copies of the same terminal set are
placed in increasing order of their edge bitmask, so no packing is visited twice.
"""
import dataclasses
import logging
import time
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Edge
from steinerpack.instances import GstpInstance, Part, TerminalSet
from steinerpack.reductions import remove_small_terminal_sets, restore_singletons
from steinerpack.solvers.solver import SolveResult, Solver, Status

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    edge_budget: int = 16
    demand_budget: int = 4
    time_budget: Optional[float] = None

    def __post_init__(self) -> None:
        if self.edge_budget <= 0 or self.demand_budget <= 0:
            raise ValueError("Oracle budgets must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("Oracle budgets must be positive")

    @classmethod
    def from_caps(cls, caps: SolverCaps) -> "OracleConfig":
        return cls(caps.oracle_edges, caps.oracle_demand, caps.oracle_seconds)


class _Search:
    def __init__(self, inst: GstpInstance, cfg: OracleConfig) -> None:
        self.edges: List[Edge] = inst.graph.edge_list()
        self.incident: Dict[int, List[Tuple[int, int]]] = {v: [] for v in inst.graph.vertices}
        for index, (u, v) in enumerate(self.edges):
            self.incident[u].append((index, v))
            self.incident[v].append((index, u))
        self.required: List[Tuple[int, TerminalSet]] = [
            (index, t) for index, (t, d) in enumerate(inst.items()) for _ in range(d)
        ]
        self.failed: Set[Tuple[int, int, int]] = set()
        self.nodes = 0
        self.started = time.monotonic()
        self.deadline = None if cfg.time_budget is None else self.started + cfg.time_budget
        self.time_budget = cfg.time_budget

    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is None or self.nodes % 1024:
            return
        if time.monotonic() > self.deadline:
            elapsed = round(time.monotonic() - self.started, 3)
            raise CapExceededError("oracle", "oracle_seconds", self.time_budget, elapsed)

    def _reaches(self, start: FrozenSet[int], targets: TerminalSet, pool: int) -> bool:
        seen = set(start)
        stack = list(start)
        while stack:
            v = stack.pop()
            for index, w in self.incident[v]:
                if pool >> index & 1 and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return targets <= seen

    def trees(self, terminal_set: TerminalSet, pool: int) -> Iterator[int]:
        """Yields the trees in ``pool`` spanning ``terminal_set``, as edge bitmasks.

        Every leaf of a yielded tree is a terminal.
        """
        root = min(terminal_set)

        def grow(vertices: FrozenSet[int], tree: int, excluded: int) -> Iterator[int]:
            self._tick()
            if terminal_set <= vertices:
                degree = {v: 0 for v in vertices}
                for index in range(len(self.edges)):
                    if tree >> index & 1:
                        u, v = self.edges[index]
                        degree[u] += 1
                        degree[v] += 1
                if all(d != 1 or v in terminal_set for v, d in degree.items()):
                    yield tree
                return
            available = pool & ~excluded
            if not self._reaches(vertices, terminal_set, available):
                return
            frontier = None
            for v in sorted(vertices):
                for index, w in self.incident[v]:
                    if available >> index & 1 and w not in vertices:
                        if frontier is None or index < frontier[0]:
                            frontier = (index, w)
            if frontier is None:
                return
            index, w = frontier
            yield from grow(vertices | {w}, tree | 1 << index, excluded)
            yield from grow(vertices, tree, excluded | 1 << index)

        yield from grow(frozenset([root]), 0, 0)

    def place(self, k: int, pool: int, lower: int) -> Optional[List[int]]:
        if k == len(self.required):
            return []
        key = (k, pool, lower)
        if key in self.failed:
            return None
        needed = sum(len(t) - 1 for _, t in self.required[k:])
        if bin(pool).count("1") < needed:
            self.failed.add(key)
            return None
        index, terminal_set = self.required[k]
        follows_same = k + 1 < len(self.required) and self.required[k + 1][0] == index
        for tree in self.trees(terminal_set, pool):
            if tree <= lower:
                continue
            rest = self.place(k + 1, pool & ~tree, tree if follows_same else 0)
            if rest is not None:
                return [tree] + rest
        self.failed.add(key)
        return None

    def to_part(self, k: int, tree: int) -> Part:
        edges = frozenset(e for i, e in enumerate(self.edges) if tree >> i & 1)
        return Part(edges, self.required[k][0])


def solve_exact(inst: GstpInstance, cfg: OracleConfig = OracleConfig()) -> SolveResult:
    """Decides ``inst`` by exhaustive search, returning a packing when it is feasible.

    Raises ``CapExceededError`` when the edge, demand or time budget is exceeded.
    """
    if inst.graph.edge_count > cfg.edge_budget:
        raise CapExceededError("oracle", "oracle_edges", cfg.edge_budget, inst.graph.edge_count)
    reduced = remove_small_terminal_sets(inst)
    if reduced.total_demand > cfg.demand_budget:
        raise CapExceededError("oracle", "oracle_demand", cfg.demand_budget, reduced.total_demand)
    search = _Search(reduced, cfg)
    trees = search.place(0, (1 << len(search.edges)) - 1, 0)
    logger.debug("oracle explored %d search nodes", search.nodes)
    if trees is None:
        return SolveResult(Status.INFEASIBLE, solver="oracle", details={"nodes": search.nodes})
    parts = [search.to_part(k, tree) for k, tree in enumerate(trees)]
    solution = restore_singletons(inst, reduced, parts)
    return SolveResult(Status.FEASIBLE, solution, "oracle", {"nodes": search.nodes})


class OracleSolver(Solver):
    name = "oracle"

    def __init__(self, cfg: OracleConfig = OracleConfig()) -> None:
        self.cfg = cfg

    def solve(self, inst: GstpInstance) -> SolveResult:
        return solve_exact(inst, self.cfg)
