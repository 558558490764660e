import pytest
import torch

from chebyrank.errors import DomainError
from chebyrank.metrics import dense_direct_solve, max_relative_error
from chebyrank.solvers.power import (
    REFERENCE_ROUNDS,
    PowerConfig,
    PowerSolver,
    reference_pagerank,
    run_power,
)
from chebyrank.utils import Algorithm
from conftest import random_connected_graph


def test_ring_is_uniform(cycle4):
    result = run_power(cycle4, PowerConfig(rounds=10))
    assert result.ranks.tolist() == pytest.approx([0.25] * 4, abs=1e-15)
    assert result.algorithm is Algorithm.POWER


def test_fixed_rounds_trace(lollipop):
    result = run_power(lollipop, PowerConfig(rounds=REFERENCE_ROUNDS))
    assert result.rounds == 210
    assert [r.k for r in result.trace] == list(range(1, 211))


def test_one_round_on_star(star4):
    # x1 = c P e/n + (1 - c)/n
    result = run_power(star4, PowerConfig(c=0.85, rounds=1))
    center = 0.85 * 0.75 + 0.15 / 4
    leaf = 0.85 * 0.25 / 3 + 0.15 / 4
    expected = torch.tensor([center, leaf, leaf, leaf], dtype=torch.float64)
    assert result.ranks.tolist() == pytest.approx((expected / expected.sum()).tolist())


def test_reference_matches_dense_solve(random_graphs):
    for g in random_graphs:
        exact = dense_direct_solve(g, 0.85)
        assert max_relative_error(reference_pagerank(g), exact).max_rel_err <= 1e-9


def test_mass_stays_one(lollipop):
    result = run_power(lollipop, PowerConfig(rounds=50))
    for record in result.trace:
        assert record.generated_mass == pytest.approx(1.0, abs=1e-14)


def test_l1_change_contracts_by_c(star4):
    # bipartite with unequal sides: only the eigenvalue -1 survives, so the
    # change shrinks by exactly c per round
    result = run_power(star4, PowerConfig(c=0.85, rounds=30))
    changes = [r.l1_change for r in result.trace]
    for a, b in zip(changes[2:], changes[3:]):
        assert b / a == pytest.approx(0.85, rel=1e-6)


def test_l1_change_never_grows(lollipop):
    changes = [r.l1_change for r in run_power(lollipop, PowerConfig(rounds=60)).trace]
    assert all(b <= a * (0.85 + 1e-9) for a, b in zip(changes, changes[1:]))


def test_tol_stops_when_change_is_small(lollipop):
    result = run_power(lollipop, PowerConfig(tol=1e-8))
    assert result.trace[-1].l1_change < 1e-8
    assert all(r.l1_change >= 1e-8 for r in result.trace[:-1])


def test_tol_cap_warns(lollipop, caplog):
    result = run_power(lollipop, PowerConfig(tol=1e-15, max_rounds=5))
    assert result.rounds == 5
    assert "cap of 5 rounds" in caplog.text


@pytest.mark.parametrize("K", [2, 3, 8])
def test_bit_identical_across_parallelism(rng, K):
    g = random_connected_graph(500, 1500, rng)
    serial = run_power(g, PowerConfig(rounds=40, parallelism=1)).ranks
    parallel = run_power(g, PowerConfig(rounds=40, parallelism=K)).ranks
    assert torch.equal(serial, parallel)


def test_k2_reaches_reference_in_one_round(k2):
    reference = reference_pagerank(k2)
    result = PowerSolver(rounds=REFERENCE_ROUNDS).run(k2, reference=reference, stop_below=1e-3)
    assert result.rounds == 1
    assert result.trace[0].err == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {},
        {"rounds": 3, "tol": 1e-3},
        {"rounds": -2},
        {"tol": 0.0},
        {"rounds": 3, "c": 0.0},
        {"rounds": 3, "parallelism": 0},
    ],
)
def test_invalid_configuration(kwargs):
    with pytest.raises(DomainError):
        PowerSolver(**kwargs)
