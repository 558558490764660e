"""
Chebyshev Polynomial Approximation Algorithm (CPAA) for undirected graphs.

Every vertex starts with mass T = 1. Round 1 generates T' = P T, round
k >= 2 generates T'' = 2 P T' - T (the Chebyshev recurrence applied to the
transition matrix), and each round accumulates c_k times the new mass into
the running sum acc, which starts at (c_0 / 2) T. The normalized
accumulator approximates the PageRank vector (1 - c)(I - cP)^-1 e / n.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import torch

from chebyrank.errors import DomainError
from chebyrank.graph.core import spmv_range
from chebyrank.solvers.chebyshev import (
    DEFAULT_MAX_ROUNDS,
    coefficients,
    plan_iterations,
)
from chebyrank.solvers.parallel import PARTITION_STRATEGIES
from chebyrank.solvers.solver import (
    DEFAULT_DAMPING,
    PageRankSolver,
    RoundRecord,
    normalize,
)
from chebyrank.utils import Algorithm

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    """
    Settings of a CPAA run. Exactly one of rounds (fixed M) and eps (target
    whole-graph error, turned into M by plan_iterations) must be given.
    """

    c: float = DEFAULT_DAMPING
    rounds: Optional[int] = None
    eps: Optional[float] = None
    parallelism: int = 1
    partition: str = "degree"
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise DomainError("damping factor must lie in (0, 1), got %r" % (self.c,))
        if (self.rounds is None) == (self.eps is None):
            raise DomainError("give exactly one of rounds and eps")
        if self.rounds is not None and (
            isinstance(self.rounds, bool) or not isinstance(self.rounds, int) or self.rounds < 0
        ):
            raise DomainError("rounds must be a non-negative integer, got %r" % (self.rounds,))
        if self.eps is not None and not 0.0 < self.eps < 1.0:
            raise DomainError("eps must lie in (0, 1), got %r" % (self.eps,))
        if isinstance(self.parallelism, bool) or not isinstance(self.parallelism, int) or self.parallelism < 1:
            raise DomainError("parallelism must be at least 1, got %r" % (self.parallelism,))
        if self.partition not in PARTITION_STRATEGIES:
            raise DomainError("unknown partition strategy %r" % (self.partition,))
        if self.max_rounds < 0:
            raise DomainError("max_rounds must be non-negative")

    def resolve_rounds(self):
        """Number of rounds M to execute, never above max_rounds"""
        if self.rounds is not None:
            if self.rounds > self.max_rounds:
                raise DomainError(
                    "%d rounds exceed the cap of %d; raise max_rounds to allow it"
                    % (self.rounds, self.max_rounds)
                )
            return self.rounds
        return plan_iterations(self.c, self.eps, max_rounds=self.max_rounds).M


class IterationState:
    """
    Per-vertex buffers of a CPAA run: T_prev, T_curr, T_next hold T_{k-1},
    T_k, T_{k+1} applied to the all-ones mass, acc the running weighted sum.

    Arguments
    ---------
    n : int
        number of vertices.
    c0 : float
        leading coefficient; acc starts at (c0 / 2) * ones.
    """

    def __init__(self, n, c0):
        self.T_prev = torch.zeros(n, dtype=torch.float64)
        self.T_curr = torch.ones(n, dtype=torch.float64)
        self.T_next = torch.zeros(n, dtype=torch.float64)
        self.acc = torch.full((n,), c0 / 2.0, dtype=torch.float64)
        self.k = 0

    def rotate(self):
        """Shift buffer roles after a round: T <- T', T' <- T''"""
        self.T_prev, self.T_curr, self.T_next = self.T_curr, self.T_next, self.T_prev
        self.k += 1


def generate_stage(g, state, k, vertex_range=None):
    """
    Mass generating stage of round k on rows lo..hi-1:
    T_next = P T_curr for k = 1, T_next = 2 P T_curr - T_prev for k >= 2.
    Only reads T_curr and T_prev, only writes the rows of T_next in range.
    """
    lo, hi = vertex_range if vertex_range is not None else (0, g.n)
    pushed = spmv_range(g, state.T_curr, lo, hi)
    if k == 1:
        state.T_next[lo:hi] = pushed
    else:
        state.T_next[lo:hi] = 2.0 * pushed - state.T_prev[lo:hi]
    return state.T_next[lo:hi]


def accumulate_stage(state, c_k, vertex_range=None):
    """Mass accumulating stage: acc += c_k * T_next on rows lo..hi-1"""
    lo, hi = vertex_range if vertex_range is not None else (0, state.acc.numel())
    state.acc[lo:hi] += c_k * state.T_next[lo:hi]
    return state.acc[lo:hi]


class CPAASolver(PageRankSolver):
    """
    Chebyshev polynomial approximation of PageRank with K-way parallelism.

    Arguments
    ---------
    c : float
        damping factor in (0, 1).
    rounds : optional int
        fixed number of rounds M.
    eps : optional float
        target whole-graph relative error, converted to M.
    parallelism : int
        number of workers K; the result is bit-identical for every K.
    partition : str
        vertex assignment strategy ("degree": balanced contiguous ranges).
    max_rounds : int
        cap on M.
    """

    algorithm = Algorithm.CPAA

    def __init__(
        self,
        c=DEFAULT_DAMPING,
        rounds=None,
        eps=None,
        parallelism=1,
        partition="degree",
        max_rounds=DEFAULT_MAX_ROUNDS,
    ):
        self.config = SolverConfig(
            c=c,
            rounds=rounds,
            eps=eps,
            parallelism=parallelism,
            partition=partition,
            max_rounds=max_rounds,
        )
        super().__init__(c=c, parallelism=parallelism)
        self.M = self.config.resolve_rounds()
        self.table = coefficients(c, self.M + 1)
        self.state = None

    @classmethod
    def from_config(cls, cfg):
        return cls(
            c=cfg.c,
            rounds=cfg.rounds,
            eps=cfg.eps,
            parallelism=cfg.parallelism,
            partition=cfg.partition,
            max_rounds=cfg.max_rounds,
        )

    def start(self, g):
        self.n = g.n
        self.state = IterationState(g.n, self.table.c0)
        self._partial = self.table.c0 / 2.0

    def finished(self, k, trace):
        return k >= self.M

    def step(self, g, pool, k):
        c_k = float(self.table.coeffs[k])
        state = self.state

        def task(vertex_range):
            generated = generate_stage(g, state, k, vertex_range)
            accumulated = accumulate_stage(state, c_k, vertex_range)
            return float(generated.sum()), float(accumulated.sum())

        partials = pool.run(task)
        self.check_finite(k, state.T_next, state.acc)
        state.rotate()

        self._partial += c_k
        # unaccumulated mass S - S_k = n * sum_{i > k} c_i = n * c_{k+1} / (1 - beta)
        residual = self.n * float(self.table.coeffs[k + 1]) / (1.0 - self.table.beta)
        return RoundRecord(
            k=k,
            c_k=c_k,
            accumulated_mass=self.n * self._partial,
            residual_mass=residual,
            generated_mass=sum(p[0] for p in partials),
            measured_acc=sum(p[1] for p in partials),
        )

    def estimate(self):
        return normalize(self.state.acc)


def run_cpaa(g, cfg):
    """
    Run CPAA on g with the given SolverConfig.

    Returns
    -------
    PageRankResult
    """
    return CPAASolver.from_config(cfg).run(g)
