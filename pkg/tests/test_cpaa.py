import pytest
import torch

from chebyrank.errors import DomainError, GraphValidationError, NumericError
from chebyrank.metrics import dense_direct_solve, max_relative_error
from chebyrank.solvers.chebyshev import (
    beta,
    coefficients,
    err_bound,
    plan_iterations,
    total_mass,
)
from chebyrank.solvers.cpaa import (
    CPAASolver,
    IterationState,
    SolverConfig,
    accumulate_stage,
    generate_stage,
    run_cpaa,
)
from chebyrank.solvers.power import reference_pagerank
from chebyrank.utils import Algorithm
from conftest import edges_graph, random_connected_graph


def test_ring_is_uniform():
    g = edges_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    result = run_cpaa(g, SolverConfig(eps=1e-3))
    assert result.ranks.tolist() == pytest.approx([0.25] * 4, abs=1e-15)
    assert result.algorithm is Algorithm.CPAA


def test_eps_plans_twelve_rounds(lollipop):
    result = run_cpaa(lollipop, SolverConfig(c=0.85, eps=1e-3))
    assert result.rounds == 12
    assert [r.k for r in result.trace] == list(range(1, 13))


def test_zero_rounds_is_uniform(lollipop):
    result = run_cpaa(lollipop, SolverConfig(rounds=0))
    assert result.rounds == 0
    assert result.ranks.tolist() == pytest.approx([1 / 6] * 6)


def test_first_round_on_path(path3):
    # acc = c0/2 + c1 P e = c0/2 + c1 (0.5, 2, 0.5)
    table = coefficients(0.85, 1)
    acc = torch.tensor([0.5, 2.0, 0.5], dtype=torch.float64) * float(table.coeffs[1]) + table.c0 / 2
    result = run_cpaa(path3, SolverConfig(rounds=1))
    assert result.ranks.tolist() == pytest.approx((acc / acc.sum()).tolist(), rel=1e-14)


def test_stages_follow_chebyshev_recurrence(path3):
    table = coefficients(0.85, 3)
    state = IterationState(3, table.c0)
    P = path3.to_dense() / path3.degrees.to(torch.float64)
    T0 = torch.ones(3, dtype=torch.float64)
    T1 = P @ T0
    T2 = 2 * P @ T1 - T0
    generate_stage(path3, state, 1)
    assert state.T_next.tolist() == pytest.approx(T1.tolist())
    accumulate_stage(state, float(table.coeffs[1]))
    state.rotate()
    generate_stage(path3, state, 2)
    assert state.T_next.tolist() == pytest.approx(T2.tolist())
    accumulate_stage(state, float(table.coeffs[2]))
    c1, c2 = float(table.coeffs[1]), float(table.coeffs[2])
    expected = table.c0 / 2 * T0 + c1 * T1 + c2 * T2
    assert state.acc.tolist() == pytest.approx(expected.tolist())


def test_matches_dense_solve(random_graphs):
    for g in random_graphs:
        ranks = run_cpaa(g, SolverConfig(eps=1e-10)).ranks
        assert max_relative_error(ranks, dense_direct_solve(g, 0.85)).max_rel_err <= 1e-8


@pytest.mark.parametrize("c", [0.5, 0.85, 0.95])
def test_error_shrinks_with_rounds(lollipop, c):
    exact = dense_direct_solve(lollipop, c)
    errs = [
        max_relative_error(run_cpaa(lollipop, SolverConfig(c=c, rounds=M)).ranks, exact).max_rel_err
        for M in (2, 10, plan_iterations(c, 1e-8).M)
    ]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] <= 1e-6


def test_mass_conservation(random_graphs):
    for g in random_graphs[:20]:
        result = run_cpaa(g, SolverConfig(eps=1e-10))
        table = coefficients(0.85, result.rounds)
        partial = table.c0 / 2
        for record in result.trace:
            partial += table.coeffs[record.k]
            assert abs(record.generated_mass - g.n) <= g.n * 1e-12
            assert abs(record.measured_acc - g.n * partial) <= g.n * 1e-12
            assert record.accumulated_mass == pytest.approx(g.n * partial, rel=1e-15)


def test_residual_ratio_is_beta(lollipop):
    result = run_cpaa(lollipop, SolverConfig(rounds=30))
    b = beta(0.85)
    for prev, cur in zip(result.trace[:-1], result.trace[1:]):
        assert cur.residual_mass / prev.residual_mass == pytest.approx(b, abs=1e-9)


def test_ledger_matches_total_mass(lollipop):
    result = run_cpaa(lollipop, SolverConfig(rounds=20))
    S = lollipop.n * total_mass(0.85)
    for record in result.trace:
        assert record.accumulated_mass + record.residual_mass == pytest.approx(S, rel=1e-12)
        assert 1 - record.accumulated_mass / S == pytest.approx(err_bound(0.85, record.k), rel=1e-6)


@pytest.mark.parametrize("K", [2, 3, 8])
def test_bit_identical_across_parallelism(rng, K):
    g = random_connected_graph(500, 1500, rng)
    serial = run_cpaa(g, SolverConfig(eps=1e-6, parallelism=1)).ranks
    parallel = run_cpaa(g, SolverConfig(eps=1e-6, parallelism=K)).ranks
    assert torch.equal(serial, parallel)


def test_reference_adds_err_to_trace(lollipop):
    reference = reference_pagerank(lollipop)
    result = CPAASolver(rounds=15).run(lollipop, reference=reference)
    errs = [r.err for r in result.trace]
    assert all(e is not None for e in errs)
    assert errs[-1] < errs[0]
    assert result.trace[-1].err == pytest.approx(
        max_relative_error(result.ranks, reference).max_rel_err
    )


def test_stop_below_ends_early(lollipop):
    reference = reference_pagerank(lollipop)
    result = CPAASolver(rounds=60).run(lollipop, reference=reference, stop_below=1e-3)
    assert result.rounds < 60
    assert result.trace[-1].err < 1e-3
    assert all(r.err >= 1e-3 for r in result.trace[:-1])


def test_elapsed_is_cumulative(lollipop):
    result = run_cpaa(lollipop, SolverConfig(rounds=10))
    times = [r.elapsed_ms for r in result.trace]
    assert times == sorted(times)
    assert result.elapsed_ms == times[-1]


def test_k2_is_exact_after_one_round(k2):
    reference = reference_pagerank(k2)
    result = CPAASolver(rounds=60).run(k2, reference=reference, stop_below=1e-3)
    assert result.rounds == 1
    assert result.ranks.tolist() == [0.5, 0.5]


@pytest.mark.parametrize(
    "kwargs",
    [
        {},
        {"rounds": 3, "eps": 1e-3},
        {"rounds": -1},
        {"rounds": 61},
        {"eps": 0.0},
        {"eps": 1e-3, "c": 1.0},
        {"eps": 1e-3, "parallelism": 0},
        {"eps": 1e-3, "partition": "random"},
        {"eps": 1e-14, "c": 0.99},
    ],
)
def test_invalid_configuration(kwargs):
    with pytest.raises(DomainError):
        CPAASolver(**kwargs)


def test_rejects_non_graph():
    with pytest.raises(GraphValidationError):
        CPAASolver(eps=1e-3).run([[0, 1]])


def test_non_finite_mass_is_reported(path3, monkeypatch):
    import chebyrank.solvers.cpaa as cpaa

    def broken(g, x, lo, hi):
        return torch.full((hi - lo,), float("nan"), dtype=torch.float64)

    monkeypatch.setattr(cpaa, "spmv_range", broken)
    with pytest.raises(NumericError, match="round 1"):
        run_cpaa(path3, SolverConfig(rounds=3))
