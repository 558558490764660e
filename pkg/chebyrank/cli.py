"""
Command-line front end: graph generation, solver runs, comparison sweeps and
coefficient tables, all written as CSV.

Example:
chebyrank gen --model gnp --n 100000 --avg-degree 6 --seed 7 --output g.txt
chebyrank run --input g.txt --algo cpaa --eps 1e-3 --parallelism 4 \
    --output ranks.csv --trace trace.csv
chebyrank compare --input g.txt --eps 1e-3 --parallelism 1 2 8 --output cmp.csv
chebyrank coeffs --c 0.85 --max-k 20 --quadrature-check
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np
from hyperpyyaml import load_hyperpyyaml
from speechbrain.utils.logger import setup_logging

from chebyrank.errors import (
    CapacityError,
    DomainError,
    GraphFormatError,
    GraphValidationError,
    NumericError,
)
from chebyrank.graph.generators import MODELS, generate_edges
from chebyrank.graph.io import load_graph, write_edge_list
from chebyrank.metrics import RelativeErrorComputer
from chebyrank.solvers.chebyshev import (
    DEFAULT_MAX_ROUNDS,
    coefficients,
    coefficients_quadrature,
    err_bound,
    operation_counts,
    sigma_sweep,
)
from chebyrank.solvers.cpaa import CPAASolver
from chebyrank.solvers.power import REFERENCE_ROUNDS, PowerSolver, reference_pagerank
from chebyrank.solvers.solver import DEFAULT_DAMPING, compare_solvers
from chebyrank.utils import (
    COMPARE_COLUMNS,
    Algorithm,
    comparison_csv_rows,
    format_float,
    write_ranks_csv,
    write_rows_csv,
    write_trace_csv,
)

logger = logging.getLogger(__name__)

LOG_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), "log-config.yaml")
DEFAULT_EPS = 1e-3
SWEEP_COLUMNS = ["c", "beta", "sigma", "sigma_over_c"]
EXIT_INPUT = 1
EXIT_NUMERIC = 2


def _check_writable(path):
    if path is None:
        return
    folder = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(folder) or not os.access(folder, os.W_OK):
        raise DomainError("cannot write %s: %s is not a writable directory" % (path, folder))


@dataclass(frozen=True)
class RunSpec:
    """Everything one `run` invocation needs; eps and rounds are exclusive"""

    input: str
    fmt: str = "edgelist"
    algo: Algorithm = Algorithm.CPAA
    c: float = DEFAULT_DAMPING
    eps: Optional[float] = None
    rounds: Optional[int] = None
    parallelism: int = 1
    output: Optional[str] = None
    trace: Optional[str] = None
    dedup: bool = True
    symmetrize: bool = False
    drop_isolated: bool = False
    max_rounds: int = DEFAULT_MAX_ROUNDS
    reference: bool = False

    def __post_init__(self):
        if self.eps is not None and self.rounds is not None:
            raise DomainError("--eps and --rounds are mutually exclusive")
        _check_writable(self.output)
        _check_writable(self.trace)

    @classmethod
    def from_args(cls, args):
        eps = args.eps
        if eps is None and args.rounds is None:
            eps = DEFAULT_EPS
        return cls(
            input=args.input,
            fmt=args.format,
            algo=Algorithm(args.algo),
            c=args.c,
            eps=eps,
            rounds=args.rounds,
            parallelism=args.parallelism,
            output=args.output,
            trace=args.trace,
            dedup=args.dedup,
            symmetrize=args.symmetrize,
            drop_isolated=args.drop_isolated,
            max_rounds=args.max_rounds,
            reference=args.reference,
        )

    def solver(self):
        """The configured solver; for Power, eps is the L1 change tolerance"""
        if self.algo is Algorithm.CPAA:
            return CPAASolver(
                c=self.c,
                rounds=self.rounds,
                eps=self.eps,
                parallelism=self.parallelism,
                max_rounds=self.max_rounds,
            )
        return PowerSolver(
            c=self.c,
            rounds=self.rounds,
            tol=self.eps,
            parallelism=self.parallelism,
            max_rounds=self.max_rounds,
        )


def _load(args):
    return load_graph(
        args.input,
        fmt=args.format,
        dedup=args.dedup,
        symmetrize=args.symmetrize,
        drop_isolated=args.drop_isolated,
    )


def cmd_gen(args):
    """Write a seeded synthetic graph as an edge list"""
    _check_writable(args.output)
    edges = generate_edges(
        args.model,
        args.n,
        seed=args.seed,
        k=args.k,
        p=args.p,
        avg_degree=args.avg_degree,
    )
    header = ["model=%s n=%d seed=%d" % (args.model, args.n, args.seed)]
    if args.k is not None:
        header.append("k=%d" % args.k)
    if args.p is not None:
        header.append("p=%r" % args.p)
    if args.avg_degree is not None:
        header.append("avg_degree=%r" % args.avg_degree)
    write_edge_list(args.output, edges, header=header)
    return 0


def cmd_run(args):
    """Run one solver and write ranks and trace"""
    spec = RunSpec.from_args(args)
    g = _load(args)
    stats = g.stats
    logger.info(
        "graph: n=%d, m=%d, avg degree %.4g, degrees %d..%d, %d self-loops",
        stats.n,
        stats.m,
        stats.avg_degree,
        stats.min_degree,
        stats.max_degree,
        stats.self_loops,
    )
    solver = spec.solver()
    reference = reference_pagerank(g, spec.c) if spec.reference else None
    result = solver.run(g, reference=reference)
    if spec.algo is Algorithm.CPAA:
        mults, adds = operation_counts(g, result.rounds)
        logger.info("%d rounds: %d multiplications, %d additions", result.rounds, mults, adds)
    if spec.output:
        write_ranks_csv(spec.output, g, result.ranks)
    if spec.trace:
        write_trace_csv(spec.trace, result)
    print(
        "n=%d m=%d algo=%s rounds=%d elapsed_ms=%.3f"
        % (g.n, g.m, spec.algo, result.rounds, result.elapsed_ms)
    )
    return 0


def cmd_compare(args):
    """Rounds and CPU time each algorithm needs to reach ERR < eps, per K"""
    _check_writable(args.output)
    g = _load(args)
    reference = reference_pagerank(g, args.c)
    solvers = [
        CPAASolver(c=args.c, rounds=args.max_rounds, parallelism=K, max_rounds=args.max_rounds)
        for K in args.parallelism
    ] + [PowerSolver(c=args.c, rounds=REFERENCE_ROUNDS, parallelism=K) for K in args.parallelism]
    err_stats = RelativeErrorComputer()
    rows = compare_solvers(g, solvers, reference, args.eps, err_stats=err_stats)
    logger.info("final ERR: %s", err_stats.summarize())
    if args.output:
        write_rows_csv(args.output, COMPARE_COLUMNS, comparison_csv_rows(rows))
    else:
        _print_rows(COMPARE_COLUMNS, comparison_csv_rows(rows))
    return 0


def cmd_coeffs(args):
    """Coefficient and error-bound table, or the convergence-rate sweep"""
    _check_writable(args.output)
    if args.sweep:
        grid = np.round(np.linspace(0.05, 0.95, 19), 10).tolist()
        rows = [[format_float(v) for v in row] for row in sigma_sweep(grid)]
        header = SWEEP_COLUMNS
        footer = ()
    else:
        if args.max_k < 0:
            raise DomainError("--max-k must be non-negative, got %d" % args.max_k)
        table = coefficients(args.c, args.max_k)
        footer = ()
        header = ["k", "c_k", "err_bound_k"]
        rows = [
            [k, format_float(c_k), format_float(err_bound(args.c, k))]
            for k, c_k in enumerate(table.coeffs)
        ]
        if args.quadrature_check:
            quad = coefficients_quadrature(args.c, args.max_k)
            header = header + ["c_k_quadrature"]
            for row, value in zip(rows, quad.coeffs):
                row.append(format_float(value))
            deviation = float(np.abs(quad.coeffs - table.coeffs).max())
            logger.info("max deviation between closed form and quadrature: %.3e", deviation)
            footer = ["max_deviation=%s" % format_float(deviation)]
    if args.output:
        write_rows_csv(args.output, header, rows, footer=footer)
    else:
        _print_rows(header, rows, footer=footer)
    return 0


def _print_rows(header, rows, footer=()):
    print(",".join(header))
    for row in rows:
        print(",".join(str(v) for v in row))
    for line in footer:
        print("# %s" % line)


def _add_graph_input(parser):
    parser.add_argument("--input", required=True, help="graph file")
    parser.add_argument("--format", choices=["edgelist", "mtx"], default="edgelist")
    parser.add_argument("--drop-isolated", action="store_true",
                        help="remove isolated vertices instead of failing")
    parser.add_argument("--symmetrize", action="store_true",
                        help="mirror the entries of a general Matrix Market file")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--dedup", dest="dedup", action="store_true", default=True,
                       help="collapse duplicate edges (default)")
    group.add_argument("--keep-multi", dest="dedup", action="store_false",
                       help="keep duplicate edges as integer weights")
    parser.add_argument("--c", type=float, default=DEFAULT_DAMPING, help="damping factor")
    parser.add_argument("--max-rounds", type=int, default=DEFAULT_MAX_ROUNDS)


def build_parser():
    """Argument parser with one subparser per command"""
    parser = argparse.ArgumentParser(prog="chebyrank", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="YAML file of default flag values")
    parser.add_argument("--log-file", help="also write DEBUG logs to this file")
    parser.add_argument("--verbose", action="store_true", help="DEBUG logs on the console")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="generate a synthetic graph")
    gen.add_argument("--model", choices=MODELS, required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, help="degree of the regular model")
    edge_rule = gen.add_mutually_exclusive_group()
    edge_rule.add_argument("--p", type=float, help="gnp edge probability")
    edge_rule.add_argument("--avg-degree", type=float, help="gnp mean vertex degree")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True)
    gen.set_defaults(handler=cmd_gen)

    run = commands.add_parser("run", help="compute PageRank")
    _add_graph_input(run)
    run.add_argument("--algo", choices=[a.value for a in Algorithm], default="cpaa")
    run.add_argument("--eps", type=float,
                   help="CPAA target error, Power L1 change tolerance (default 1e-3)")
    run.add_argument("--rounds", type=int, help="fixed number of rounds (excludes --eps)")
    run.add_argument("--parallelism", type=int, default=1)
    run.add_argument("--output", help="ranks CSV")
    run.add_argument("--trace", help="per-round trace CSV")
    run.add_argument("--reference", action="store_true",
                     help="add per-round ERR against the %d-round Power reference" % REFERENCE_ROUNDS)
    run.set_defaults(handler=cmd_run)

    compare = commands.add_parser("compare", help="rounds to reach ERR < eps")
    _add_graph_input(compare)
    compare.add_argument("--eps", type=float, default=DEFAULT_EPS)
    compare.add_argument("--parallelism", type=int, nargs="+", default=[1])
    compare.add_argument("--output", help="comparison CSV (default: stdout)")
    compare.set_defaults(handler=cmd_compare)

    coeffs = commands.add_parser("coeffs", help="Chebyshev coefficient table")
    coeffs.add_argument("--c", type=float, default=DEFAULT_DAMPING)
    coeffs.add_argument("--max-k", type=int, default=20)
    coeffs.add_argument("--quadrature-check", action="store_true")
    coeffs.add_argument("--sweep", action="store_true",
                        help="sigma and sigma/c over c = 0.05..0.95 instead")
    coeffs.add_argument("--output", help="CSV file (default: stdout)")
    coeffs.set_defaults(handler=cmd_coeffs)

    parser.subcommands = commands.choices
    return parser


def parse_arguments(argv):
    """
    Parse argv. Values from --config become defaults of every subcommand,
    so explicit flags still win.
    """
    parser = build_parser()
    config_parser = argparse.ArgumentParser(add_help=False)
    config_parser.add_argument("--config")
    pre, _ = config_parser.parse_known_args(argv)
    if pre.config:
        try:
            with open(pre.config) as fin:
                defaults = load_hyperpyyaml(fin) or {}
        except OSError as err:
            parser.exit(EXIT_INPUT, "chebyrank: cannot read config: %s\n" % err)
        for sub in parser.subcommands.values():
            sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def configure_logging(log_file=None, verbose=False):
    """Install log-config.yaml with the console level and optional file"""
    overrides = {"handlers": {"console": {"level": "DEBUG" if verbose else "INFO"}}}
    if log_file:
        overrides["handlers"]["file_handler"] = {"filename": log_file}
        overrides["root"] = {"handlers": ["console", "file_handler"]}
    setup_logging(config_path=LOG_CONFIG, overrides=overrides)


def main(argv=None):
    """Entry point; returns the process exit status"""
    args = parse_arguments(sys.argv[1:] if argv is None else argv)
    configure_logging(args.log_file, args.verbose)
    try:
        return args.handler(args)
    except NumericError as err:
        logger.error("numeric failure: %s", err)
        return EXIT_NUMERIC
    except (GraphFormatError, GraphValidationError, DomainError, CapacityError, OSError) as err:
        logger.error("%s", err)
        return EXIT_INPUT
