"""
Benchmark script comparing CPAA with the Power method on generated graphs.

For one hparams file it generates the graph, builds the REFERENCE_ROUNDS
Power reference once, then runs every solver for every parallelism degree
until ERR < eps. Rounds, final ERR and CPU time are written to
<output_folder>/compare.csv and logged through the FileTrainLogger.
With save_ranks, every rank vector is also written, which makes the
parallel determinism of both solvers checkable with cmp.

Example:
python bench.py bench_configs/gnp_1e5.yaml --root=/path/to/results
"""
import os
import sys

import speechbrain as sb
from hyperpyyaml import load_hyperpyyaml

from chebyrank.metrics import RelativeErrorComputer
from chebyrank.solvers.power import reference_pagerank
from chebyrank.solvers.solver import compare_solvers
from chebyrank.utils import (
    COMPARE_COLUMNS,
    comparison_csv_rows,
    write_ranks_csv,
    write_rows_csv,
)


def bench(hparams_file, run_opts, overrides):
    with open(hparams_file) as fin:
        hparams = load_hyperpyyaml(fin, overrides)

    # Create experiment directory
    sb.create_experiment_directory(
        experiment_directory=hparams["output_folder"],
        hyperparams_to_save=hparams_file,
        overrides=overrides,
    )

    g = hparams["graph_fct"]()
    reference = reference_pagerank(g, hparams["c"])

    # one solver per (class, parallelism), CPAA first
    solvers = [
        solver_class(parallelism=K)
        for solver_class in hparams["solver_classes"]
        for K in hparams["parallelism"]
    ]
    err_stats = RelativeErrorComputer()
    rows = compare_solvers(g, solvers, reference, hparams["eps"], err_stats=err_stats)

    write_rows_csv(
        os.path.join(hparams["output_folder"], "compare.csv"),
        COMPARE_COLUMNS,
        comparison_csv_rows(rows),
    )
    for row in rows:
        hparams["logger"].log_stats(
            stats_meta={"algo": str(row.algorithm), "K": row.parallelism},
            test_stats={
                "rounds": row.rounds if row.rounds is not None else -1,
                "ERR": row.err,
                "cpu ms": row.elapsed_ms,
            },
        )
        if hparams["save_ranks"]:
            write_ranks_csv(
                os.path.join(
                    hparams["output_folder"],
                    "ranks_{}_K{}.csv".format(row.algorithm, row.parallelism),
                ),
                g,
                row.ranks,
            )
    hparams["logger"].log_stats(
        stats_meta={"graph": hparams["graph_name"], "n": g.n, "m": g.m},
        test_stats={"max ERR": err_stats.summarize("max_score")},
    )


if __name__ == "__main__":

    # CLI:
    hparams_file, run_opts, overrides = sb.parse_arguments(sys.argv[1:])

    bench(hparams_file, run_opts, overrides)
