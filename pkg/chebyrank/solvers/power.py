"""
Power-method baselines: serial (K = 1) and parallel (K > 1) damped
iteration x <- c P x + (1 - c) e / n from x = e / n, and the fixed-round
reference vector all ERR figures are measured against.
Undirected graphs have no dangling vertices, so no mass needs to be
redistributed.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import torch

from chebyrank.errors import DomainError
from chebyrank.graph.core import spmv_range
from chebyrank.solvers.parallel import PARTITION_STRATEGIES
from chebyrank.solvers.solver import (
    DEFAULT_DAMPING,
    PageRankSolver,
    RoundRecord,
    normalize,
)
from chebyrank.utils import Algorithm

logger = logging.getLogger(__name__)

REFERENCE_ROUNDS = 210
DEFAULT_POWER_MAX_ROUNDS = 10000


@dataclass(frozen=True)
class PowerConfig:
    """
    Settings of a Power run. Exactly one of rounds (fixed count) and tol
    (stop once the L1 change of a round falls below it) must be given.
    """

    c: float = DEFAULT_DAMPING
    rounds: Optional[int] = None
    tol: Optional[float] = None
    parallelism: int = 1
    partition: str = "degree"
    max_rounds: int = DEFAULT_POWER_MAX_ROUNDS

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise DomainError("damping factor must lie in (0, 1), got %r" % (self.c,))
        if (self.rounds is None) == (self.tol is None):
            raise DomainError("give exactly one of rounds and tol")
        if self.rounds is not None and (
            isinstance(self.rounds, bool) or not isinstance(self.rounds, int) or self.rounds < 0
        ):
            raise DomainError("rounds must be a non-negative integer, got %r" % (self.rounds,))
        if self.tol is not None and not self.tol > 0:
            raise DomainError("tol must be positive, got %r" % (self.tol,))
        if isinstance(self.parallelism, bool) or not isinstance(self.parallelism, int) or self.parallelism < 1:
            raise DomainError("parallelism must be at least 1, got %r" % (self.parallelism,))
        if self.partition not in PARTITION_STRATEGIES:
            raise DomainError("unknown partition strategy %r" % (self.partition,))


class PowerSolver(PageRankSolver):
    """
    Damped power iteration with K-way parallelism over the same vertex
    partition as CPAA.

    Arguments
    ---------
    c : float
        damping factor in (0, 1).
    rounds : optional int
        fixed number of rounds.
    tol : optional float
        L1 change threshold.
    parallelism : int
        number of workers K; the result is bit-identical for every K.
    partition : str
        vertex assignment strategy.
    max_rounds : int
        cap on the number of rounds when stopping on tol.
    """

    algorithm = Algorithm.POWER

    def __init__(
        self,
        c=DEFAULT_DAMPING,
        rounds=None,
        tol=None,
        parallelism=1,
        partition="degree",
        max_rounds=DEFAULT_POWER_MAX_ROUNDS,
    ):
        self.config = PowerConfig(
            c=c,
            rounds=rounds,
            tol=tol,
            parallelism=parallelism,
            partition=partition,
            max_rounds=max_rounds,
        )
        super().__init__(c=c, parallelism=parallelism)
        self.x = None

    @classmethod
    def from_config(cls, cfg):
        return cls(
            c=cfg.c,
            rounds=cfg.rounds,
            tol=cfg.tol,
            parallelism=cfg.parallelism,
            partition=cfg.partition,
            max_rounds=cfg.max_rounds,
        )

    def start(self, g):
        self.x = torch.full((g.n,), 1.0 / g.n, dtype=torch.float64)
        self.x_next = torch.empty(g.n, dtype=torch.float64)
        self.teleport = (1.0 - self.c) / g.n

    def finished(self, k, trace):
        if self.config.rounds is not None:
            return k >= self.config.rounds
        if k >= self.config.max_rounds:
            logger.warning(
                "power iteration stopped at the cap of %d rounds before reaching tol=%g",
                self.config.max_rounds,
                self.config.tol,
            )
            return True
        return bool(trace) and trace[-1].l1_change < self.config.tol

    def step(self, g, pool, k):
        x, x_next = self.x, self.x_next

        def task(vertex_range):
            lo, hi = vertex_range
            pushed = spmv_range(g, x, lo, hi)
            pushed *= self.c
            pushed += self.teleport
            x_next[lo:hi] = pushed

        pool.run(task)
        self.check_finite(k, x_next)
        change = float((x_next - x).abs().sum())
        self.x, self.x_next = x_next, x
        return RoundRecord(k=k, l1_change=change, generated_mass=float(self.x.sum()))

    def estimate(self):
        return normalize(self.x)


def run_power(g, cfg):
    """
    Run the Power method on g with the given PowerConfig.

    Returns
    -------
    PageRankResult
    """
    return PowerSolver.from_config(cfg).run(g)


def reference_pagerank(g, c=DEFAULT_DAMPING):
    """Serial Power method at exactly REFERENCE_ROUNDS rounds: the ERR ground truth"""
    result = run_power(g, PowerConfig(c=c, rounds=REFERENCE_ROUNDS, parallelism=1))
    return result.ranks
