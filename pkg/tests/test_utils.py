import pytest
import torch

from chebyrank.solvers.cpaa import CPAASolver
from chebyrank.solvers.power import PowerSolver, reference_pagerank
from chebyrank.utils import (
    Algorithm,
    CpuClock,
    format_float,
    read_rows_csv,
    write_ranks_csv,
    write_trace_csv,
)


def test_format_float():
    assert format_float(None) == ""
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(12.3456789, 6) == "12.3457"


def test_algorithm_names():
    assert str(Algorithm.CPAA) == "cpaa"
    assert Algorithm("power") is Algorithm.POWER


def test_cpu_clock_accumulates():
    clock = CpuClock()
    with clock:
        sum(i * i for i in range(20000))
    first = clock.elapsed_ms
    with clock:
        sum(i * i for i in range(20000))
    assert clock.elapsed_ms >= first >= 0.0


def test_trace_columns(tmp_path, lollipop):
    path = str(tmp_path / "cpaa.csv")
    write_trace_csv(path, CPAASolver(rounds=4).run(lollipop))
    rows = read_rows_csv(path)
    assert rows[0] == ["k", "c_k", "S_k", "residual_mass", "elapsed_ms"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3", "4"]

    path = str(tmp_path / "power.csv")
    reference = reference_pagerank(lollipop)
    write_trace_csv(path, PowerSolver(rounds=3).run(lollipop, reference=reference))
    rows = read_rows_csv(path)
    assert rows[0] == ["k", "l1_change", "mass", "elapsed_ms", "err"]
    assert all(r[-1] != "" for r in rows[1:])


def test_ranks_csv_uses_input_ids(tmp_path):
    from conftest import edges_graph

    g = edges_graph(6, [(0, 2), (2, 5)], drop_isolated=True)
    path = str(tmp_path / "ranks.csv")
    write_ranks_csv(path, g, torch.tensor([0.25, 0.5, 0.25], dtype=torch.float64))
    assert read_rows_csv(path) == [["vertex_id", "rank"], ["0", "0.25"], ["2", "0.5"], ["5", "0.25"]]
