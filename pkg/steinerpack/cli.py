"""The ``steinerpack`` command line.

Exit codes: 0 when the command ran (whatever the verdict), 1 for usage and parse
errors, 2 when a solver cap is exceeded and 3 when ``bench`` finds a disagreement.
"""
import argparse
import logging
import sys
from typing import List, NoReturn, Optional, Sequence

from steinerpack import bench, families
from steinerpack.config import SolverCaps, load_caps
from steinerpack.errors import CapExceededError
from steinerpack.formats import (
    format_graph,
    format_instance,
    format_parts,
    load_decomposition,
    load_instance,
    load_solution,
    parse_host_graph,
)
from steinerpack.graph import Graph
from steinerpack.instances import AugmentationMode, GstpInstance, augment, verify
from steinerpack.parameters import PARAMETERS, parameter
from steinerpack.solvers.dispatch import ALGORITHMS, make_solver
from steinerpack.solvers.tw_dp import decide_tw
from steinerpack.tree_decomposition import TreeDecomposition

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _caps(args: argparse.Namespace) -> SolverCaps:
    caps = load_caps(args.caps) if args.caps else SolverCaps()
    return caps.override(
        oracle_edges=getattr(args, "oracle_edges", None),
        oracle_demand=getattr(args, "max_demand", None),
        twdp_demand=getattr(args, "max_demand", None),
        twdp_width=getattr(args, "max_width", None),
    )


def _algos(text: str) -> List[str]:
    algos = [algo for algo in text.split(",") if algo]
    unknown = [algo for algo in algos if algo not in ALGORITHMS]
    if unknown:
        choices = ", ".join(ALGORITHMS)
        raise argparse.ArgumentTypeError(
            f"unknown algorithms {', '.join(unknown)}; choose from {choices}"
        )
    return algos


def _write(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w") as handle:
        handle.write(text)
    logger.info("wrote %s", path)


def _solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    caps = _caps(args)
    if args.dump_ilp and args.algo != "fnilp":
        raise ValueError("--dump-ilp only applies to --algo fnilp")
    if args.td:
        if args.algo != "twdp":
            raise ValueError("--td only applies to --algo twdp")
        td = load_decomposition(args.td, inst.graph)
        if not isinstance(td, TreeDecomposition):
            raise ValueError("--td needs a `p td` decomposition")
        result = decide_tw(inst, td, caps, args.witness)
    else:
        result = make_solver(args.algo, caps, args.witness, args.dump_ilp).solve(inst)
    logger.info("%s answered %s: %s", result.solver, result.status.value, result.details)
    if args.witness and result.feasible:
        if result.solution is None:
            logger.warning("%s builds no witness", result.solver)
        else:
            for line in [f"p sol {len(result.solution)}"] + format_parts(result.solution):
                print(line)
    print(result.status.value)
    return 0


def _verify(args: argparse.Namespace) -> int:
    outcome = verify(load_instance(args.instance), load_solution(args.solution))
    print("VALID" if outcome.ok else f"INVALID: {outcome.violation}")
    return 0


def _gen(args: argparse.Namespace) -> int:
    built = families.family(args.family, args.params, seed=args.seed)
    if isinstance(built, Graph):
        if not built.is_simple():
            raise ValueError(
                f"Family `{args.family}` builds a multigraph, which an instance file cannot hold"
            )
        built = GstpInstance(built, [], [])
    described = " ".join([args.family] + [str(p) for p in args.params])
    if args.seed is not None:
        described += f" seed {args.seed}"
    _write(format_instance(built, comment=described), args.out)
    return 0


def _params(args: argparse.Namespace) -> int:
    with open(args.instance) as handle:
        g = parse_host_graph(handle.read())
    print(parameter(g, args.which, _caps(args)))
    return 0


def _augment(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    augmented = augment(inst, AugmentationMode(args.mode))
    comments = [f"{args.mode}-augmented graph"]
    comments += [f"aug {index} {v}" for index, v in sorted(augmented.aug_vertex_of.items())]
    _write(format_graph(augmented.graph, comments), args.out)
    return 0


def _bench(args: argparse.Namespace) -> int:
    rows = bench.cross_validate(args.count, args.seed, args.algos, _caps(args), args.jobs)
    print(bench.format_table(rows))
    if args.sweep:
        sweep = bench.scaling_sweep(seed=args.seed)
        for row in sweep:
            print(
                f"c sweep width {row.width} demand {row.total_demand} largest {row.largest_table}"
            )
        print(f"c fitted constant {bench.fit_scaling_constant(sweep):.4f}")
    return 3 if any(row.disagreements for row in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="steinerpack", description="Exact solvers for generalized Steiner tree packing."
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="decide an instance")
    solve.add_argument("instance")
    solve.add_argument("--algo", choices=ALGORITHMS, default="auto")
    solve.add_argument("--witness", action="store_true", help="print a packing above the verdict")
    solve.add_argument("--td", metavar="FILE", help="tree decomposition for --algo twdp")
    solve.add_argument("--caps", metavar="FILE", help="caps file of `key value` lines")
    solve.add_argument("--max-demand", type=int, help="total demand cap of the oracle and the DP")
    solve.add_argument("--max-width", type=int, help="width cap of the DP")
    solve.add_argument("--oracle-edges", type=int, help="edge cap of the oracle")
    solve.add_argument(
        "--dump-ilp", metavar="FILE", help="write the selector program of --algo fnilp"
    )
    solve.set_defaults(handler=_solve)

    check = commands.add_parser("verify", help="check a solution against an instance")
    check.add_argument("instance")
    check.add_argument("solution")
    check.set_defaults(handler=_verify)

    gen = commands.add_parser("gen", help="write an instance of a named family")
    gen.add_argument("family", choices=sorted(families.FAMILIES))
    gen.add_argument("params", type=int, nargs="*")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out", metavar="FILE")
    gen.set_defaults(handler=_gen)

    params = commands.add_parser("params", help="compute a structural parameter of the host graph")
    params.add_argument("instance", help="instance file or graph listing")
    params.add_argument("which", choices=PARAMETERS)
    params.add_argument("--caps", metavar="FILE")
    params.set_defaults(handler=_params)

    aug = commands.add_parser("augment", help="write the vertex- or clique-augmented graph")
    aug.add_argument("instance")
    aug.add_argument("mode", choices=[mode.value for mode in AugmentationMode])
    aug.add_argument("--out", metavar="FILE")
    aug.set_defaults(handler=_augment)

    cross = commands.add_parser("bench", help="cross-validate solvers on random instances")
    cross.add_argument("--count", type=int, default=100)
    cross.add_argument("--seed", type=int, default=0)
    cross.add_argument(
        "--algos", type=_algos, default=list(bench.DEFAULT_ALGOS), help="comma-separated"
    )
    cross.add_argument("--jobs", type=int, default=1)
    cross.add_argument("--caps", metavar="FILE")
    cross.add_argument("--sweep", action="store_true", help="also fit the DP table growth")
    cross.set_defaults(handler=_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except CapExceededError as error:
        print(f"error: {error}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
