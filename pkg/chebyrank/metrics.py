"""
Error metrics against reference vectors, and brute-force oracles used to
check the solvers.
"""

import logging
from dataclasses import dataclass

import torch
from speechbrain.utils.metric_stats import MetricStats

from chebyrank.errors import CapacityError, DomainError, NumericError

logger = logging.getLogger(__name__)

DENSE_SOLVE_LIMIT = 512
SIMILARITY_CHECK_LIMIT = 2048


@dataclass(frozen=True)
class ErrorReport:
    """max_i |est_i - ref_i| / ref_i, sum_i |est_i - ref_i| and |sum(est) - 1|"""

    max_rel_err: float
    l1_err: float
    mass_gap: float


def max_relative_error(est, ref):
    """
    Compare an estimate against a strictly positive reference vector.

    Arguments
    ---------
    est : torch.Tensor
        estimated ranks.
    ref : torch.Tensor
        reference ranks, used as the denominator.

    Returns
    -------
    ErrorReport
    """
    est = torch.as_tensor(est, dtype=torch.float64)
    ref = torch.as_tensor(ref, dtype=torch.float64)
    if est.shape != ref.shape:
        raise ValueError(
            "estimate and reference differ in shape: %s vs %s"
            % (tuple(est.shape), tuple(ref.shape))
        )
    nonpositive = torch.nonzero(~(ref > 0))
    if nonpositive.numel():
        raise DomainError(
            "reference entry %d is not strictly positive" % int(nonpositive[0])
        )
    diff = (est - ref).abs()
    return ErrorReport(
        max_rel_err=float((diff / ref).max()) if diff.numel() else 0.0,
        l1_err=float(diff.sum()),
        mass_gap=abs(float(est.sum()) - 1.0),
    )


def dense_direct_solve(g, c):
    """
    Exact PageRank of a small graph: solve (I - cP) x = (1 - c) e / n by LU
    with partial pivoting, then normalize.

    Arguments
    ---------
    g : UndirectedGraph
        at most DENSE_SOLVE_LIMIT vertices.
    c : float
        damping factor in (0, 1).

    Returns
    -------
    torch.Tensor
        ranks summing to 1.
    """
    if g.n > DENSE_SOLVE_LIMIT:
        raise CapacityError(
            "dense solve is limited to %d vertices, graph has %d"
            % (DENSE_SOLVE_LIMIT, g.n)
        )
    if not 0.0 < c < 1.0:
        raise DomainError("damping factor must lie in (0, 1), got %r" % (c,))
    n = g.n
    transition = g.to_dense() / g.degrees.to(torch.float64).unsqueeze(0)
    system = torch.eye(n, dtype=torch.float64) - c * transition
    rhs = torch.full((n,), (1.0 - c) / n, dtype=torch.float64)
    x = torch.linalg.solve(system, rhs)
    residual = float((system @ x - rhs).abs().max())
    if residual > 1e-10:
        raise NumericError("dense solve residual %.3g exceeds 1e-10" % residual)
    return x / x.sum()


def symmetry_similarity_check(g):
    """
    Largest asymmetry of S = D^-1/2 A D^-1/2.

    P = A D^-1 is similar to S, so an exactly symmetric S certifies that every
    eigenvalue of P is real. The result must be exactly 0.

    Arguments
    ---------
    g : UndirectedGraph
        at most SIMILARITY_CHECK_LIMIT vertices.

    Returns
    -------
    float
        max_ij |S_ij - S_ji|
    """
    if g.n > SIMILARITY_CHECK_LIMIT:
        raise CapacityError(
            "similarity check is limited to %d vertices, graph has %d"
            % (SIMILARITY_CHECK_LIMIT, g.n)
        )
    if g.n == 0:
        return 0.0
    degrees = g.degrees.to(torch.float64)
    scaled = g.to_dense() / torch.sqrt(torch.outer(degrees, degrees))
    return float((scaled - scaled.T).abs().max())


def mass_check(vec, expected):
    """|sum(vec) - expected|"""
    return abs(float(torch.as_tensor(vec, dtype=torch.float64).sum()) - expected)


class RelativeErrorComputer(MetricStats):
    """Tracks the max relative error of solver outputs against a reference"""

    def __init__(self, **kwargs):
        def metric(est, ref):
            return torch.tensor([max_relative_error(est, ref).max_rel_err], dtype=torch.float64)

        super().__init__(metric, **kwargs)
