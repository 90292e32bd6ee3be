"""Cross-validation of the exact solvers and the DP scaling sweep."""
import itertools
import logging
import multiprocessing
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from steinerpack import families
from steinerpack.config import SolverCaps
from steinerpack.errors import CapExceededError
from steinerpack.graph import Edge, Graph
from steinerpack.instances import GstpInstance
from steinerpack.solvers.dispatch import make_solver
from steinerpack.solvers.tw_dp import enumerate_terminals, run_dp
from steinerpack.tree_decomposition import make_nice, tree_decomposition

logger = logging.getLogger(__name__)

DEFAULT_ALGOS = ("oracle", "twdp")
DEFAULT_SWEEP = ((1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (2, 3), (3, 2))


class Verdict(NamedTuple):
    """One solver answer; ``status`` is None when the solver refused the instance."""

    instance: int
    algo: str
    status: Optional[str]


class Agreement(NamedTuple):
    first: str
    second: str
    instances: int
    agreements: int
    disagreements: int


class ScalingRow(NamedTuple):
    width: int
    total_demand: int
    largest_table: int
    total_tuples: int


def bench_instances(count: int, seed: int) -> List[GstpInstance]:
    """Random instances on at most 8 vertices and 12 edges.

    Each has one or two terminal sets and a total demand of at most 3.
    """
    rng = np.random.default_rng(seed)
    instances = []
    for _ in range(count):
        n = int(rng.integers(3, 9))
        m = int(rng.integers(0, min(12, n * (n - 1) // 2) + 1))
        t = int(rng.integers(1, 3))
        max_demand = 3 if t == 1 else 1
        instances.append(
            families.random_instance(n, m, t, max_demand=max_demand, seed=int(rng.integers(2**31)))
        )
    return instances


def _verdict(job: Tuple[int, str, GstpInstance, SolverCaps]) -> Verdict:
    index, algo, inst, caps = job
    try:
        result = make_solver(algo, caps).solve(inst)
    except CapExceededError as exceeded:
        logger.debug("instance %d: %s", index, exceeded)
        return Verdict(index, algo, None)
    return Verdict(index, algo, result.status.value)


def run_verdicts(
    instances: Sequence[GstpInstance],
    algos: Sequence[str] = DEFAULT_ALGOS,
    caps: SolverCaps = SolverCaps(),
    jobs: int = 1,
) -> List[Verdict]:
    """Solves every instance with every algorithm, in a process pool when ``jobs > 1``.

    The verdicts come back sorted by instance and algorithm, whatever the pool order.
    """
    if jobs < 1:
        raise ValueError("`jobs` must be at least 1")
    work = [(index, algo, inst, caps) for index, inst in enumerate(instances) for algo in algos]
    if jobs > 1 and len(work) > 1:
        with multiprocessing.Pool(processes=min(jobs, len(work))) as pool:
            verdicts = pool.map(_verdict, work)
    else:
        verdicts = [_verdict(job) for job in work]
    return sorted(verdicts)


def agreement_table(verdicts: Sequence[Verdict], algos: Sequence[str]) -> List[Agreement]:
    """Pairwise agreement over the instances both algorithms answered."""
    answers: Dict[str, Dict[int, str]] = {algo: {} for algo in algos}
    for verdict in verdicts:
        if verdict.status is not None and verdict.algo in answers:
            answers[verdict.algo][verdict.instance] = verdict.status
    rows = []
    for first, second in itertools.combinations(algos, 2):
        shared = sorted(set(answers[first]) & set(answers[second]))
        agreements = sum(answers[first][i] == answers[second][i] for i in shared)
        rows.append(Agreement(first, second, len(shared), agreements, len(shared) - agreements))
        for i in shared:
            if answers[first][i] != answers[second][i]:
                logger.warning(
                    "instance %d: %s says %s, %s says %s",
                    i,
                    first,
                    answers[first][i],
                    second,
                    answers[second][i],
                )
    return rows


def format_table(rows: Sequence[Agreement]) -> str:
    lines = [f"{'pair':<16}{'instances':>10}{'agreements':>12}{'disagreements':>15}"]
    for row in rows:
        pair = f"{row.first}/{row.second}"
        lines.append(f"{pair:<16}{row.instances:>10}{row.agreements:>12}{row.disagreements:>15}")
    return "\n".join(lines)


def cross_validate(
    count: int,
    seed: int,
    algos: Sequence[str] = DEFAULT_ALGOS,
    caps: SolverCaps = SolverCaps(),
    jobs: int = 1,
) -> List[Agreement]:
    if len(algos) < 2:
        raise ValueError("Cross-validation needs at least two algorithms")
    instances = bench_instances(count, seed)
    rows = agreement_table(run_verdicts(instances, algos, caps, jobs), algos)
    disagreements = sum(row.disagreements for row in rows)
    logger.info("bench: %d instances, %d disagreements", count, disagreements)
    return rows


def random_ktree(width: int, n: int, rng: np.random.Generator) -> Graph:
    """A random k-tree on ``n`` vertices.

    It starts from a (width+1)-clique and joins every new vertex to a random width-clique.
    """
    if width < 1 or n < width + 1:
        raise ValueError("A k-tree needs `width` >= 1 and at least `width` + 1 vertices")
    edges: List[Edge] = list(itertools.combinations(range(width + 1), 2))
    cliques = list(itertools.combinations(range(width + 1), width))
    for v in range(width + 1, n):
        base = cliques[int(rng.integers(len(cliques)))]
        edges += [(u, v) for u in base]
        cliques += [tuple(u for u in base if u != dropped) + (v,) for dropped in base]
    return Graph(n, edges)


def scaling_sweep(
    pairs: Sequence[Tuple[int, int]] = DEFAULT_SWEEP, seed: int = 0
) -> List[ScalingRow]:
    """Runs the DP tables on a random k-tree for every (width, total demand) pair.

    Each pair gets ``total_demand`` random vertex pairs of demand one on a k-tree with
    three vertices beyond the base clique. The DP runs in full regardless of the
    basic reduction rules, so every row measures the tables.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for width, total in pairs:
        g = random_ktree(width, width + 4, rng)
        sets = [rng.choice(g.vertex_count, size=2, replace=False).tolist() for _ in range(total)]
        inst = GstpInstance(g, sets, [1] * total)
        nice = make_nice(tree_decomposition(g))
        run = run_dp(g, nice, enumerate_terminals(inst))
        row = ScalingRow(width, total, run.statistics.largest_table, run.statistics.total_tuples)
        logger.debug("sweep: %s", row)
        rows.append(row)
    return rows


def fit_scaling_constant(rows: Sequence[ScalingRow]) -> float:
    """Least-squares c in log2(largest table) ~ c * total_demand * width * log2(width + 2)."""
    x = np.array(
        [row.total_demand * row.width * np.log2(row.width + 2) for row in rows], dtype=float
    )
    y = np.array([np.log2(max(row.largest_table, 1)) for row in rows], dtype=float)
    if not len(rows) or not np.any(x > 0):
        raise ValueError(
            "Fitting the scaling constant needs a row with positive width and demand"
        )
    (c,), *_ = np.linalg.lstsq(x.reshape(-1, 1), y, rcond=None)
    logger.info(
        "DP tables grow like 2^(%.4f * sum(D) * w * log2(w + 2)) over %d rows", c, len(rows)
    )
    return float(c)
