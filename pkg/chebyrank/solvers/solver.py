"""
An abstract PageRank solver class and the result types shared by all
solvers.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import torch
from tqdm import tqdm

from chebyrank.errors import GraphValidationError, NumericError
from chebyrank.graph.core import UndirectedGraph
from chebyrank.metrics import max_relative_error
from chebyrank.solvers.parallel import BulkSynchronousPool, partition_vertices
from chebyrank.utils import CpuClock

logger = logging.getLogger(__name__)

DEFAULT_DAMPING = 0.85


@dataclass
class RoundRecord:
    """
    What one round of a solver produced.

    k and elapsed_ms (cumulative CPU time) are always set. CPAA fills c_k, the
    accumulated mass S_k and the unaccumulated mass S - S_k from the
    coefficient ledger, plus the measured sums of the generated vector and of
    the accumulator. Power fills l1_change and generated_mass (sum of x).
    err and l1_err are set when a reference vector was given.
    """

    k: int
    elapsed_ms: float = 0.0
    c_k: Optional[float] = None
    accumulated_mass: Optional[float] = None
    residual_mass: Optional[float] = None
    generated_mass: Optional[float] = None
    measured_acc: Optional[float] = None
    l1_change: Optional[float] = None
    err: Optional[float] = None
    l1_err: Optional[float] = None


@dataclass
class PageRankResult:
    """Normalized rank vector with the per-round trace that produced it"""

    algorithm: object
    ranks: torch.Tensor
    parallelism: int
    trace: List[RoundRecord] = field(default_factory=list)

    @property
    def rounds(self):
        return len(self.trace)

    @property
    def elapsed_ms(self):
        return self.trace[-1].elapsed_ms if self.trace else 0.0

    def first_round_below(self, eps):
        """First traced round whose ERR is below eps, or None"""
        for record in self.trace:
            if record.err is not None and record.err < eps:
                return record
        return None


def normalize(acc):
    """
    Scale a positive vector to unit sum.

    Example
    -------
    >>> normalize(torch.tensor([1.0, 3.0], dtype=torch.float64)).tolist()
    [0.25, 0.75]
    """
    acc = torch.as_tensor(acc, dtype=torch.float64)
    total = float(acc.sum())
    if not (total > 0 and math.isfinite(total)):
        raise NumericError("cannot normalize a vector of total mass %r" % total)
    return acc / total


class PageRankSolver:
    """
    Abstract class for bulk-synchronous PageRank solvers.

    A run partitions the vertices, then executes rounds until
    ``finished`` says so. Each round is one superstep of the worker pool.
    Per-round ERR against a reference is computed outside the timed region.

    Arguments
    ---------
    c : float
        damping factor.
    parallelism : int
        number of workers K.
    """

    algorithm = None

    def __init__(self, c=DEFAULT_DAMPING, parallelism=1):
        self.c = c
        self.parallelism = parallelism

    def run(self, g, reference=None, stop_below=None):
        """
        Compute PageRank on g.

        Arguments
        ---------
        g : UndirectedGraph
            a validated graph with at least one vertex.
        reference : optional torch.Tensor
            reference ranks; adds ERR and L1 error to every round record.
        stop_below : optional float
            with a reference, end the run after the first round whose ERR is
            below this value.

        Returns
        -------
        PageRankResult
        """
        if not isinstance(g, UndirectedGraph):
            raise GraphValidationError("expected an UndirectedGraph, got %r" % type(g))
        if g.n == 0:
            raise GraphValidationError("graph has no vertices")
        ranges = partition_vertices(g, self.parallelism)
        clock = CpuClock()
        trace = []
        with BulkSynchronousPool(ranges) as pool:
            with clock:
                self.start(g)
            k = 0
            while not self.finished(k, trace):
                k += 1
                with clock:
                    record = self.step(g, pool, k)
                record.elapsed_ms = clock.elapsed_ms
                if reference is not None:
                    report = max_relative_error(self.estimate(), reference)
                    record.err = report.max_rel_err
                    record.l1_err = report.l1_err
                logger.debug("%s round %d: %s", self.algorithm, k, record)
                trace.append(record)
                if stop_below is not None and record.err is not None:
                    if record.err < stop_below:
                        break
            with clock:
                ranks = self.estimate()
        result = PageRankResult(
            algorithm=self.algorithm,
            ranks=ranks,
            parallelism=len(ranges),
            trace=trace,
        )
        logger.info(
            "%s finished: n=%d, rounds=%d, K=%d, cpu=%.3f ms",
            self.algorithm,
            g.n,
            result.rounds,
            result.parallelism,
            clock.elapsed_ms,
        )
        return result

    def start(self, g):
        """Allocate and initialize the iteration state for graph g"""
        raise NotImplementedError

    def step(self, g, pool, k):
        """Execute round k on the pool and return its RoundRecord"""
        raise NotImplementedError

    def finished(self, k, trace):
        """Whether the run is complete after k rounds"""
        raise NotImplementedError

    def estimate(self):
        """Normalized rank estimate of the current state"""
        raise NotImplementedError

    @staticmethod
    def check_finite(k, *tensors):
        """Raise NumericError naming round k if any entry is NaN or infinite"""
        for tensor in tensors:
            if not bool(torch.isfinite(tensor).all()):
                raise NumericError("non-finite value encountered", round=k)


@dataclass
class ComparisonRow:
    """
    Outcome of one solver in a comparison sweep. rounds is the first round
    whose ERR fell below the threshold, None if it never did; err and l1 are
    taken at that round (or at the last one), elapsed_ms likewise.
    """

    algorithm: object
    parallelism: int
    rounds: Optional[int]
    err: Optional[float]
    l1: Optional[float]
    elapsed_ms: float
    ranks: Optional[torch.Tensor] = None


def compare_solvers(g, solvers, reference, eps, err_stats=None):
    """
    Run every solver against the same reference until ERR < eps.

    Arguments
    ---------
    g : UndirectedGraph
        input graph.
    solvers : iterable of PageRankSolver
        configured solvers; their own stopping rule caps the run.
    reference : torch.Tensor
        reference ranks.
    eps : float
        ERR threshold.
    err_stats : optional MetricStats
        collects the final ERR of every run.

    Returns
    -------
    list of ComparisonRow
    """
    rows = []
    for solver in tqdm(list(solvers), desc="compare", dynamic_ncols=True):
        result = solver.run(g, reference=reference, stop_below=eps)
        record = result.first_round_below(eps)
        if record is None:
            logger.warning(
                "%s with K=%d did not reach ERR < %g within %d rounds",
                solver.algorithm,
                result.parallelism,
                eps,
                result.rounds,
            )
            last = result.trace[-1] if result.trace else None
            elapsed = result.elapsed_ms
        else:
            last = record
            elapsed = record.elapsed_ms
        if err_stats is not None:
            err_stats.append(
                ["%s-K%d" % (solver.algorithm, result.parallelism)], result.ranks, reference
            )
        rows.append(
            ComparisonRow(
                algorithm=solver.algorithm,
                parallelism=result.parallelism,
                rounds=record.k if record is not None else None,
                err=last.err if last is not None else None,
                l1=last.l1_err if last is not None else None,
                elapsed_ms=elapsed,
                ranks=result.ranks,
            )
        )
    by_parallelism = {}
    for row in rows:
        by_parallelism.setdefault(row.parallelism, []).append(row)
    for K, group in by_parallelism.items():
        counts = {row.rounds for row in group}
        if len(group) > 1 and len(counts) == 1 and None not in counts:
            logger.info("K=%d: tie, every solver reaches ERR < %g in %d rounds", K, eps, group[0].rounds)
    return rows
