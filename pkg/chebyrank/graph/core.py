"""
Undirected graphs in compressed sparse row form and the column-stochastic
transition operator P = A D^-1 shared by every solver.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import torch

from chebyrank.errors import GraphValidationError

logger = logging.getLogger(__name__)

# edge keys low * n + high must fit in int64
MAX_VERTICES = math.isqrt(np.iinfo(np.int64).max)


@dataclass(frozen=True)
class GraphStats:
    """Summary of a validated graph; avg_degree follows the m/n convention"""

    n: int
    m: int
    avg_degree: float
    min_degree: int
    max_degree: int
    self_loops: int
    duplicates_removed: int = 0
    isolated_dropped: int = 0


class UndirectedGraph:
    """
    Immutable undirected graph stored as offsets/neighbors arrays.

    Each undirected edge is stored in both directions, a self-loop is stored
    once and contributes 1 to the degree of its vertex. Neighbor lists are
    sorted ascending and duplicate-free. The constructor validates every
    invariant and raises GraphValidationError otherwise.

    Arguments
    ---------
    offsets : array-like of int
        per-vertex cumulative index into neighbors, length n+1.
    neighbors : array-like of int
        flattened adjacency lists.
    weights : optional array-like of int
        multiplicity of each stored entry (multigraph mode only).
    original_ids : optional array-like of int
        input vertex id of each vertex, when isolated vertices were dropped.
    duplicates_removed : int
        number of duplicate edges collapsed while building.
    isolated_dropped : int
        number of isolated vertices removed while building.

    Example
    -------
    >>> g = UndirectedGraph([0, 1, 3, 4], [1, 0, 2, 1])
    >>> g.n, g.m, g.degrees.tolist()
    (3, 2, [1, 2, 1])
    """

    def __init__(
        self,
        offsets,
        neighbors,
        weights=None,
        original_ids=None,
        duplicates_removed=0,
        isolated_dropped=0,
    ):
        self.offsets = torch.as_tensor(offsets, dtype=torch.int64)
        self.neighbors = torch.as_tensor(neighbors, dtype=torch.int64)
        self.weights = (
            None if weights is None else torch.as_tensor(weights, dtype=torch.float64)
        )
        self.original_ids = (
            None
            if original_ids is None
            else torch.as_tensor(original_ids, dtype=torch.int64)
        )
        self.duplicates_removed = int(duplicates_removed)
        self.isolated_dropped = int(isolated_dropped)
        _check_structure(self.offsets, self.neighbors, self.weights)
        self.n = self.offsets.numel() - 1

        counts = self.offsets[1:] - self.offsets[:-1]
        # row index of every stored entry, used by the scatter kernel
        self.sources = torch.repeat_interleave(
            torch.arange(self.n, dtype=torch.int64), counts
        )
        if self.weights is None:
            self.degrees = counts.clone()
        else:
            weighted = torch.zeros(self.n, dtype=torch.float64)
            weighted.index_add_(0, self.sources, self.weights)
            self.degrees = weighted.round().to(torch.int64)
        self.neighbor_degrees = self.degrees.to(torch.float64)[self.neighbors]
        self.stats = validate(self)
        self.m = self.stats.m

    @property
    def nnz(self):
        """Number of stored adjacency entries (2m minus self-loops)"""
        return self.neighbors.numel()

    def neighbors_of(self, u):
        """Sorted neighbor list of vertex u"""
        return self.neighbors[self.offsets[u] : self.offsets[u + 1]]

    def edges(self):
        """Each undirected edge once as an (E, 2) int64 array with u <= v"""
        src = self.sources.numpy()
        dst = self.neighbors.numpy()
        keep = src <= dst
        return np.stack([src[keep], dst[keep]], axis=1)

    def to_dense(self):
        """Dense adjacency matrix A (float64); only meant for small graphs"""
        adjacency = torch.zeros(self.n, self.n, dtype=torch.float64)
        values = (
            torch.ones(self.nnz, dtype=torch.float64)
            if self.weights is None
            else self.weights
        )
        adjacency[self.sources, self.neighbors] = values
        return adjacency

    def vertex_ids(self):
        """Ids to report for each vertex (input ids when vertices were dropped)"""
        if self.original_ids is not None:
            return self.original_ids
        return torch.arange(self.n, dtype=torch.int64)

    def __repr__(self):
        return "UndirectedGraph(n=%d, m=%d)" % (self.n, self.m)


def _check_structure(offsets, neighbors, weights):
    if offsets.dim() != 1 or offsets.numel() < 1:
        raise GraphValidationError("offsets must be a 1-D array of length n+1")
    if neighbors.dim() != 1:
        raise GraphValidationError("neighbors must be a 1-D array")
    if int(offsets[0]) != 0 or int(offsets[-1]) != neighbors.numel():
        raise GraphValidationError(
            "offsets must start at 0 and end at len(neighbors)=%d" % neighbors.numel()
        )
    if bool((offsets[1:] < offsets[:-1]).any()):
        raise GraphValidationError("offsets must be non-decreasing")
    n = offsets.numel() - 1
    if neighbors.numel() and (
        int(neighbors.min()) < 0 or int(neighbors.max()) >= n
    ):
        raise GraphValidationError("neighbor ids must lie in [0, %d)" % n)
    if weights is not None:
        if weights.shape != neighbors.shape:
            raise GraphValidationError("weights must have one entry per neighbor")
        if bool((weights < 1).any()) or bool((weights != weights.round()).any()):
            raise GraphValidationError("multi-edge weights must be positive integers")


def validate(g):
    """
    Check every invariant of an undirected graph and summarize it.

    Arguments
    ---------
    g : UndirectedGraph
        the graph to check.

    Returns
    -------
    GraphStats
        n, m, average degree m/n, degree range and self-loop count.

    Raises
    ------
    GraphValidationError
        on asymmetric adjacency, unsorted or duplicate neighbors, or a
        vertex of degree 0.
    """
    _check_structure(g.offsets, g.neighbors, g.weights)
    n = g.offsets.numel() - 1
    counts = g.offsets[1:] - g.offsets[:-1]
    src = torch.repeat_interleave(torch.arange(n, dtype=torch.int64), counts)
    dst = g.neighbors

    same_row = src[1:] == src[:-1]
    bad = same_row & (dst[1:] <= dst[:-1])
    if bool(bad.any()):
        idx = int(torch.nonzero(bad)[0])
        raise GraphValidationError(
            "neighbor list of vertex %d is not sorted and duplicate-free"
            % int(src[idx])
        )

    keys = src * n + dst
    mirrored, order = torch.sort(dst * n + src)
    if not torch.equal(keys, mirrored):
        idx = int(torch.nonzero(keys != mirrored)[0])
        u, v = divmod(int(keys[idx]), n)
        raise GraphValidationError(
            "adjacency is not symmetric: %d lists %d but not the reverse" % (u, v)
        )
    if g.weights is not None and not torch.equal(g.weights, g.weights[order]):
        raise GraphValidationError("multi-edge weights are not symmetric")

    loops = src == dst
    if g.weights is None:
        degrees = counts
        m = (dst.numel() + int(loops.sum())) // 2
    else:
        weighted = torch.zeros(n, dtype=torch.float64)
        weighted.index_add_(0, src, g.weights)
        degrees = weighted.round().to(torch.int64)
        m = int(round((float(g.weights.sum()) + float(g.weights[loops].sum())) / 2))

    if n and bool((degrees < 1).any()):
        vertex = int(torch.nonzero(degrees < 1)[0])
        raise GraphValidationError(
            "vertex %d is isolated (degree 0); %d isolated vertices in total"
            % (vertex, int((degrees < 1).sum()))
        )

    return GraphStats(
        n=n,
        m=m,
        avg_degree=m / n if n else 0.0,
        min_degree=int(degrees.min()) if n else 0,
        max_degree=int(degrees.max()) if n else 0,
        self_loops=int(loops.sum()),
        duplicates_removed=g.duplicates_removed,
        isolated_dropped=g.isolated_dropped,
    )


def build_graph(n, heads, tails, dedup=True, drop_isolated=False):
    """
    Assemble an UndirectedGraph from an unordered list of edges.

    Arguments
    ---------
    n : int
        number of vertices; ids must lie in [0, n).
    heads, tails : array-like of int
        endpoints of each edge, in any order and orientation.
    dedup : bool
        collapse repeated edges (adjacency entries in {0, 1}). When False,
        multiplicities are kept as integer weights.
    drop_isolated : bool
        remove vertices without edges instead of failing; the kept vertices
        are renumbered and their input ids stored in original_ids.

    Returns
    -------
    UndirectedGraph
    """
    heads = np.asarray(heads, dtype=np.int64).ravel()
    tails = np.asarray(tails, dtype=np.int64).ravel()
    if heads.shape != tails.shape:
        raise ValueError("heads and tails must have the same length")
    if n < 0:
        raise GraphValidationError("vertex count must be non-negative")
    if n > MAX_VERTICES:
        raise GraphValidationError(
            "%d vertices exceed the supported maximum of %d" % (n, MAX_VERTICES)
        )
    if heads.size and (
        min(heads.min(), tails.min()) < 0 or max(heads.max(), tails.max()) >= n
    ):
        raise GraphValidationError("edge endpoints must lie in [0, %d)" % n)

    low = np.minimum(heads, tails)
    high = np.maximum(heads, tails)
    keys = low * n + high
    multiplicity = None
    if dedup:
        unique_keys = np.unique(keys)
        duplicates = keys.size - unique_keys.size
        if duplicates:
            logger.info("collapsed %d duplicate edges", duplicates)
    else:
        unique_keys, multiplicity = np.unique(keys, return_counts=True)
        duplicates = 0
        if (multiplicity > 1).any():
            logger.warning(
                "keeping %d multi-edges as integer weights (not a 0/1 adjacency)",
                int((multiplicity > 1).sum()),
            )
    low, high = (np.divmod(unique_keys, n) if n else (unique_keys, unique_keys))

    present = np.zeros(n, dtype=bool)
    present[low] = True
    present[high] = True
    isolated = np.flatnonzero(~present)
    original_ids = None
    if isolated.size:
        if not drop_isolated:
            raise GraphValidationError(
                "vertex %d is isolated (degree 0); %d isolated vertices in total, "
                "drop them explicitly or compact the vertex ids"
                % (isolated[0], isolated.size)
            )
        logger.warning("dropped %d isolated vertices", isolated.size)
        kept = np.flatnonzero(present)
        remap = np.full(n, -1, dtype=np.int64)
        remap[kept] = np.arange(kept.size, dtype=np.int64)
        low, high = remap[low], remap[high]
        n = kept.size
        original_ids = kept

    loops = low == high
    src = np.concatenate([low, high[~loops]])
    dst = np.concatenate([high, low[~loops]])
    weights = None
    if multiplicity is not None:
        weights = np.concatenate([multiplicity, multiplicity[~loops]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    if weights is not None:
        weights = weights[order]

    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
    return UndirectedGraph(
        torch.from_numpy(offsets),
        torch.from_numpy(dst),
        weights=None if weights is None else torch.from_numpy(weights),
        original_ids=None if original_ids is None else torch.from_numpy(original_ids),
        duplicates_removed=duplicates,
        isolated_dropped=isolated.size if original_ids is not None else 0,
    )


def spmv_range(g, x, lo, hi):
    """
    Rows lo..hi-1 of P x, i.e. y_u = sum over v in N(u) of a_uv x_v / deg(v).

    Contributions are scattered in storage order, so the value of each row
    does not depend on how the vertex range is split between workers.

    Arguments
    ---------
    g : UndirectedGraph
    x : torch.Tensor
        float64 vector of length n.
    lo, hi : int
        half-open vertex range.
    """
    first = int(g.offsets[lo])
    last = int(g.offsets[hi])
    contributions = x[g.neighbors[first:last]] / g.neighbor_degrees[first:last]
    if g.weights is not None:
        contributions = contributions * g.weights[first:last]
    out = torch.zeros(hi - lo, dtype=torch.float64)
    out.index_add_(0, g.sources[first:last] - lo, contributions)
    return out


def transition_apply(g, x):
    """
    Apply the column-stochastic transition matrix: y = P x with P = A D^-1.

    Arguments
    ---------
    g : UndirectedGraph
    x : torch.Tensor
        vector of length n.

    Returns
    -------
    torch.Tensor
        P x, whose entries sum to sum(x) up to rounding.

    Example
    -------
    >>> g = UndirectedGraph([0, 1, 3, 4], [1, 0, 2, 1])
    >>> transition_apply(g, torch.ones(3, dtype=torch.float64)).tolist()
    [0.5, 2.0, 0.5]
    """
    x = torch.as_tensor(x, dtype=torch.float64)
    if x.dim() != 1 or x.numel() != g.n:
        raise ValueError(
            "expected a vector of length %d, got shape %s" % (g.n, tuple(x.shape))
        )
    return spmv_range(g, x, 0, g.n)
