"""
Chebyshev expansion of f(x) = 1 / (1 - c x) on [-1, 1].

The coefficients c_k = (2/pi) * int_0^pi cos(kt) / (1 - c cos t) dt form a
geometric sequence c_k = c_0 * beta^k with c_0 = 2 / sqrt(1 - c^2) and
beta = (1 - sqrt(1 - c^2)) / c. The closed form is authoritative; the
quadrature version only exists to cross-check it.
"""

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from chebyrank.errors import DomainError, NumericError

logger = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 60


@dataclass(frozen=True)
class CoefficientTable:
    """Damping factor, geometric ratio and the truncated coefficients c_0..c_M"""

    c: float
    beta: float
    c0: float
    coeffs: np.ndarray

    @property
    def M(self):
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class ApproxPlan:
    """Smallest round count M whose whole-graph error bound meets target_err"""

    M: int
    target_err: float
    predicted_err: float


def _check_damping(c):
    if not (isinstance(c, (int, float)) and 0.0 < c < 1.0):
        raise DomainError("damping factor must lie in (0, 1), got %r" % (c,))
    return float(c)


def _check_rounds(M):
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 0:
        raise DomainError("round count must be a non-negative integer, got %r" % (M,))
    return int(M)


def _one_minus_root(c):
    # 1 - sqrt(1 - c^2) without cancellation for small c
    return c * c / (1.0 + math.sqrt(1.0 - c * c))


def beta(c):
    """
    Geometric ratio of the coefficients, beta = (1 - sqrt(1 - c^2)) / c.

    Example
    -------
    >>> round(beta(0.85), 4)
    0.5567
    """
    c = _check_damping(c)
    return _one_minus_root(c) / c


def sigma(c):
    """
    Per-round shrink factor of the unaccumulated mass,
    sigma_c = (c^2 - (2 - c) q) / (c^2 - c q) with q = 1 - sqrt(1 - c^2).
    Algebraically equal to beta(c).

    Example
    -------
    >>> round(sigma(0.85), 4)
    0.5567
    """
    c = _check_damping(c)
    q = _one_minus_root(c)
    return (c * c - (2.0 - c) * q) / (c * c - c * q)


def rate_ratio(c):
    """sigma_c / c: how fast CPAA sheds error relative to the Power method"""
    return sigma(c) / _check_damping(c)


def sigma_sweep(cs):
    """Rows (c, beta, sigma, sigma/c) for each damping factor in cs"""
    return [(c, beta(c), sigma(c), rate_ratio(c)) for c in cs]


def leading_coefficient(c):
    """c_0 = 2 / sqrt(1 - c^2)"""
    c = _check_damping(c)
    return 2.0 / math.sqrt(1.0 - c * c)


def total_mass(c):
    """Limit of c_0/2 + sum_k c_k, i.e. f(1) = 1 / (1 - c)"""
    c = _check_damping(c)
    return 1.0 / (1.0 - c)


def coefficients(c, M):
    """
    Closed-form coefficients c_0..c_M.

    Arguments
    ---------
    c : float
        damping factor in (0, 1).
    M : int
        last coefficient index.

    Returns
    -------
    CoefficientTable

    Example
    -------
    >>> table = coefficients(0.85, 1)
    >>> [round(x, 6) for x in table.coeffs]
    [3.796632, 2.113685]
    """
    c = _check_damping(c)
    M = _check_rounds(M)
    ratio = beta(c)
    c0 = leading_coefficient(c)
    coeffs = np.empty(M + 1, dtype=np.float64)
    coeffs[0] = c0
    for k in range(1, M + 1):
        coeffs[k] = coeffs[k - 1] * ratio
    return CoefficientTable(c=c, beta=ratio, c0=c0, coeffs=coeffs)


def coefficients_quadrature(c, M, tol=1e-10, limit=200):
    """
    Coefficients c_0..c_M by adaptive quadrature of their defining integral.

    Uses QUADPACK's adaptive bisection with a cosine weight, so the
    oscillation of cos(kt) is handled by the rule rather than by subdivision.

    Arguments
    ---------
    c : float
        damping factor in (0, 1).
    M : int
        last coefficient index.
    tol : float
        absolute tolerance per coefficient.
    limit : int
        maximum number of subintervals.

    Returns
    -------
    CoefficientTable
    """
    c = _check_damping(c)
    M = _check_rounds(M)
    if not tol > 0:
        raise DomainError("quadrature tolerance must be positive, got %r" % (tol,))

    def integrand(t):
        return 1.0 / (1.0 - c * math.cos(t))

    coeffs = np.empty(M + 1, dtype=np.float64)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for k in range(M + 1):
            try:
                if k == 0:
                    value, abserr = integrate.quad(
                        integrand, 0.0, math.pi, epsabs=tol, epsrel=0.0, limit=limit
                    )
                else:
                    value, abserr = integrate.quad(
                        integrand,
                        0.0,
                        math.pi,
                        weight="cos",
                        wvar=k,
                        epsabs=tol,
                        epsrel=0.0,
                        limit=limit,
                    )
            except integrate.IntegrationWarning as err:
                raise NumericError(
                    "quadrature of c_%d did not converge: %s" % (k, err)
                ) from None
            if abserr > tol:
                raise NumericError(
                    "quadrature of c_%d reached error %.3g above tolerance %.3g"
                    % (k, abserr, tol)
                )
            coeffs[k] = 2.0 / math.pi * value
    return CoefficientTable(c=c, beta=beta(c), c0=coeffs[0], coeffs=coeffs)


def err_bound(c, M):
    """
    Whole-graph relative truncation error after M rounds,
    ERR_M = 1 - S_M / S = 2 beta^(M+1) / (1 + beta).

    Example
    -------
    >>> err_bound(0.85, 20) < 1e-4
    True
    """
    ratio = beta(c)
    M = _check_rounds(M)
    return 2.0 * ratio ** (M + 1) / (1.0 + ratio)


def plan_iterations(c, eps, max_rounds=None):
    """
    Smallest M with err_bound(c, M) <= eps.

    Arguments
    ---------
    c : float
        damping factor in (0, 1).
    eps : float
        target relative error in (0, 1).
    max_rounds : optional int
        fail with DomainError if the plan needs more rounds than this.

    Returns
    -------
    ApproxPlan

    Example
    -------
    >>> plan_iterations(0.85, 1e-3).M
    12
    """
    c = _check_damping(c)
    if not (isinstance(eps, (int, float)) and 0.0 < eps < 1.0):
        raise DomainError("target error must lie in (0, 1), got %r" % (eps,))
    M = 0
    bound = err_bound(c, 0)
    while bound > eps:
        M += 1
        bound = err_bound(c, M)
        if max_rounds is not None and M > max_rounds:
            raise DomainError(
                "reaching error %.3g with c=%.4g needs more than %d rounds"
                % (eps, c, max_rounds)
            )
    return ApproxPlan(M=M, target_err=float(eps), predicted_err=bound)


def operation_counts(g, M):
    """
    Arithmetic cost of M CPAA rounds on graph g: per vertex, deg(v)
    multiplications plus deg(v) additions and one subtraction to generate,
    one addition to accumulate.

    Returns
    -------
    tuple of int
        (multiplications, additions) = (M * nnz, M * (nnz + 2n))
    """
    M = _check_rounds(M)
    return M * g.nnz, M * (g.nnz + 2 * g.n)
