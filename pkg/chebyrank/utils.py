"""
Various auxiliary functions and classes.
"""

import csv
import time
from enum import Enum


class Algorithm(Enum):
    """PageRank algorithms available to the command line and the recipes"""

    CPAA = "cpaa"  # Chebyshev polynomial approximation
    POWER = "power"  # damped power iteration

    def __str__(self):
        return self.value


class CpuClock:
    """
    Accumulates process CPU time over the blocks it is entered for.
    Time spent outside ``with clock:`` blocks (diagnostics, logging) is not
    counted.
    """

    def __init__(self):
        self._total_ns = 0
        self._start = None

    def __enter__(self):
        self._start = time.process_time_ns()
        return self

    def __exit__(self, *exc):
        self._total_ns += time.process_time_ns() - self._start
        self._start = None
        return False

    @property
    def elapsed_ms(self):
        return self._total_ns / 1e6


def format_float(value, digits=17):
    """Decimal representation with the given number of significant digits"""
    if value is None:
        return ""
    return "%.*g" % (digits, value)


def write_rows_csv(path, header, rows, footer=()):
    """Write a header row and data rows as comma separated values, then "# " comment lines"""
    with open(path, "w", newline="", encoding="utf-8") as fout:
        writer = csv.writer(fout)
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        for line in footer:
            fout.write("# %s%s" % (line, writer.dialect.lineterminator))


def write_ranks_csv(path, g, ranks):
    """One (vertex_id, rank) row per vertex, sorted by vertex id"""
    ids = g.vertex_ids().tolist()
    values = ranks.tolist()
    write_rows_csv(
        path,
        ["vertex_id", "rank"],
        ((vid, format_float(v)) for vid, v in zip(ids, values)),
    )


CPAA_TRACE_COLUMNS = ["k", "c_k", "S_k", "residual_mass", "elapsed_ms"]
POWER_TRACE_COLUMNS = ["k", "l1_change", "mass", "elapsed_ms"]


def write_trace_csv(path, result):
    """
    Write the per-round trace of a solver run.
    CPAA rows hold (k, c_k, S_k, residual_mass, elapsed_ms), Power rows hold
    (k, l1_change, mass, elapsed_ms); an err column is appended when the run
    was compared against a reference.
    """
    with_err = any(record.err is not None for record in result.trace)
    if result.algorithm is Algorithm.CPAA:
        header = list(CPAA_TRACE_COLUMNS)

        def fields(r):
            return [r.k, format_float(r.c_k), format_float(r.accumulated_mass),
                    format_float(r.residual_mass), format_float(r.elapsed_ms, 6)]

    else:
        header = list(POWER_TRACE_COLUMNS)

        def fields(r):
            return [r.k, format_float(r.l1_change), format_float(r.generated_mass),
                    format_float(r.elapsed_ms, 6)]

    if with_err:
        header.append("err")
    rows = []
    for record in result.trace:
        row = fields(record)
        if with_err:
            row.append(format_float(record.err))
        rows.append(row)
    write_rows_csv(path, header, rows)


COMPARE_COLUMNS = ["algo", "parallelism", "rounds", "err", "l1", "elapsed_ms"]


def comparison_csv_rows(rows):
    """CSV fields of ComparisonRow objects; rounds never reached stay empty"""
    return [
        [
            str(row.algorithm),
            row.parallelism,
            "" if row.rounds is None else row.rounds,
            format_float(row.err),
            format_float(row.l1),
            format_float(row.elapsed_ms, 6),
        ]
        for row in rows
    ]


def read_rows_csv(path):
    """All rows of a CSV file, header included, as lists of strings; "#" lines are skipped"""
    with open(path, newline="", encoding="utf-8") as fin:
        return [row for row in csv.reader(fin) if not (row and row[0].startswith("#"))]
