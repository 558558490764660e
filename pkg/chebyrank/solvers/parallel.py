"""
Vertex partitioning and the bulk-synchronous worker pool shared by the
solvers. Workers own disjoint contiguous vertex ranges; every call to
BulkSynchronousPool.run is one superstep that returns only once all
workers are done.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from chebyrank.errors import DomainError

logger = logging.getLogger(__name__)

PARTITION_STRATEGIES = ("degree",)


class VertexRange(NamedTuple):
    """Half-open range of vertex ids [lo, hi)"""

    lo: int
    hi: int

    def __len__(self):
        return self.hi - self.lo


def partition_vertices(g, K):
    """
    Split 0..n-1 into K contiguous ranges of balanced total degree.

    Each cut is placed at the prefix-sum position closest to j * total / K,
    so per-range work (proportional to stored edges) is as even as a
    contiguous split allows. K > n yields some empty ranges.

    Arguments
    ---------
    g : UndirectedGraph
    K : int
        number of workers, at least 1.

    Returns
    -------
    list of VertexRange
    """
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 1:
        raise DomainError("parallelism must be a positive integer, got %r" % (K,))
    prefix = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(g.degrees.numpy(), out=prefix[1:])
    total = int(prefix[-1])

    cuts = [0]
    for j in range(1, K):
        target = j * total / K
        right = int(np.searchsorted(prefix, target, side="left"))
        right = min(right, g.n)
        left = max(right - 1, 0)
        cut = left if target - prefix[left] <= prefix[right] - target else right
        cuts.append(max(cut, cuts[-1]))
    cuts.append(g.n)
    return [VertexRange(int(lo), int(hi)) for lo, hi in zip(cuts[:-1], cuts[1:])]


class BulkSynchronousPool:
    """
    A fixed set of K workers executing one task per vertex range per superstep.

    Arguments
    ---------
    ranges : list of VertexRange
        one range per worker.

    Example
    -------
    >>> pool = BulkSynchronousPool([VertexRange(0, 2), VertexRange(2, 3)])
    >>> with pool:
    ...     pool.run(lambda r: len(r))
    [2, 1]
    """

    def __init__(self, ranges):
        self.ranges = list(ranges)
        self._executor = None

    @property
    def parallelism(self):
        return len(self.ranges)

    def __enter__(self):
        if self.parallelism > 1:
            self._executor = ThreadPoolExecutor(
                max_workers=self.parallelism, thread_name_prefix="chebyrank"
            )
        return self

    def __exit__(self, *exc):
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
        return False

    def run(self, task):
        """
        Run task(vertex_range) for every range and wait for all of them.

        Returns
        -------
        list
            the task results in worker order.
        """
        if self._executor is None:
            return [task(r) for r in self.ranges]
        return list(self._executor.map(task, self.ranges))
