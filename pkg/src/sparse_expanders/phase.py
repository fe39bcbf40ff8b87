"""Existence phase transition rho_exp(delta; d, eps) for lossless expanders.

A union bound over all ``C(N, k)`` column sets turns the RIP-1 failure bound
into the per-``N`` exponent

    net(k) = H(k/N) + (n/N) * psi(k, d, eps),

and ``rho_exp`` is the largest ``k/n`` at which ``net`` changes sign. The
working size ``n`` is finite (default ``2**10``) and ``k`` is treated as a
continuous variable.
"""
import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ._threads import resolve_threads
from .combinatorics import shannon_entropy
from .dyadic import rip1_failure_bound
from .errors import DomainError, InfeasibleError, NoTransitionError, SolverError

DEFAULT_N = 2 ** 10
DEFAULT_EPS = 1.0 / 6.0
SCAN_POINTS = 256
K_MIN = 2.0
BISECT_RTOL = 1e-8
BISECT_MAXITER = 200


def _check_eps(eps):
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")


def net_exponent(k, n, N, d, eps):
    """``H(k/N) + (n/N) psi(k, d, eps)`` with ``a_k = (1 - eps) d k``.

    Args:
        k: Set size (real, ``k >= 2``).
        n: Rows.
        N: Columns (real; only the ratios ``k/N`` and ``n/N`` matter).
        d: Column degree.
        eps: Expansion slack in ``(0, 1/2)``.

    Raises:
        InfeasibleError: ``side="above"`` if ``(1 - eps) d k > n``,
            ``side="below"`` if ``k`` is under two columns.
    """
    _check_eps(eps)
    if not 0 < n <= N:
        raise DomainError(f"need 0 < n <= N, got n={n}, N={N}")
    if k < K_MIN:
        raise InfeasibleError(f"k={k} is below the smallest merged set size {K_MIN}",
                              side="below")
    a_k = (1.0 - eps) * d * k
    if a_k > n:
        raise InfeasibleError(f"(1-eps) d k = {a_k} exceeds n={n}", side="above")
    if k > N:
        raise DomainError(f"k={k} exceeds N={N}")
    bound = rip1_failure_bound(k, d, n, eps)
    return shannon_entropy(k / N) + (n / N) * bound.psi


def feasible_k_range(d, eps, n, k_min=K_MIN):
    """Interval of ``k`` on which :func:`net_exponent` is defined."""
    return k_min, n / ((1.0 - eps) * d)


@dataclass(frozen=True)
class TransitionPoint:
    delta: float
    rho: float
    k: float
    residual: float
    iterations: int


def find_transition(delta, d, eps=DEFAULT_EPS, n=DEFAULT_N, scan_points=SCAN_POINTS,
                    k_min=K_MIN):
    """Locate the largest sign change of the net exponent in ``k``.

    The feasible ``k`` interval is scanned at ``scan_points`` evenly spaced
    points and the last bracketing pair is bisected to relative tolerance
    ``1e-8`` in ``k``.

    Returns:
        TransitionPoint

    Raises:
        NoTransitionError: No sign change on the scan grid; the diagnostics
            carry the endpoint values and the scanned extremes.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    _check_eps(eps)
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    N = n / delta
    k_lo, k_hi = feasible_k_range(d, eps, n, k_min)
    if k_hi <= k_lo:
        raise NoTransitionError("feasible k interval is empty",
                                {"k_range": (k_lo, k_hi)})
    ks = np.linspace(k_lo, k_hi, scan_points)
    values = np.array([net_exponent(k, n, N, d, eps) for k in ks])
    negative = values < 0.0
    changes = np.flatnonzero(negative[:-1] != negative[1:])
    if changes.size == 0:
        raise NoTransitionError(
            f"net exponent keeps one sign on k in [{k_lo:.6g}, {k_hi:.6g}]",
            {"delta": delta, "d": d, "eps": eps, "n": n,
             "endpoints": (float(values[0]), float(values[-1])),
             "min": float(values.min()), "max": float(values.max())})
    j = int(changes[-1])
    lo, hi = float(ks[j]), float(ks[j + 1])
    lo_negative = bool(negative[j])
    iterations = 0
    while hi - lo > BISECT_RTOL * hi and iterations < BISECT_MAXITER:
        mid = 0.5 * (lo + hi)
        if (net_exponent(mid, n, N, d, eps) < 0.0) == lo_negative:
            lo = mid
        else:
            hi = mid
        iterations += 1
    k_star = 0.5 * (lo + hi)
    residual = abs(net_exponent(k_star, n, N, d, eps))
    return TransitionPoint(delta=delta, rho=k_star / n, k=k_star, residual=residual,
                           iterations=iterations)


def rho_exp(delta, d, eps=DEFAULT_EPS, n=DEFAULT_N, **kwargs):
    """Phase transition ``rho_exp(delta; d, eps)`` at working size ``n``."""
    return find_transition(delta, d, eps, n, **kwargs).rho


@dataclass
class PhaseCurve:
    """``rho_exp`` sampled on a grid of ``delta``; failed points hold NaN."""
    delta_grid: List[float]
    rho_values: List[float]
    d: int
    eps: float
    n: int
    residuals: List[float] = field(default_factory=list)
    iterations: List[int] = field(default_factory=list)
    failures: dict = field(default_factory=dict)

    @property
    def converged(self):
        return not self.failures

    def to_csv(self):
        """CSV text with header ``delta,rho,residual,iterations``.

        Failed points are written with ``nan`` values and ``-1`` iterations.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["delta", "rho", "residual", "iterations"])
        for row in zip(self.delta_grid, self.rho_values, self.residuals, self.iterations):
            delta, rho, res, it = row
            writer.writerow([format_float(delta), format_float(rho),
                             format_float(res), it])
        return buf.getvalue()


def format_float(x):
    """Round-trip exact decimal text (17 significant digits)."""
    return format(float(x), ".17g")


def parse_grid(spec):
    """Parse ``"start:stop:count"`` into a linearly spaced ascending grid."""
    try:
        start, stop, count = spec.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise DomainError(f"grid spec {spec!r} is not start:stop:count") from None
    if count < 1 or not 0.0 < start <= stop < 1.0:
        raise DomainError(f"grid spec {spec!r} must satisfy 0 < start <= stop < 1, count >= 1")
    if count == 1:
        return [start]
    return [float(x) for x in np.linspace(start, stop, count)]


def sweep(delta_grid, d, eps=DEFAULT_EPS, n=DEFAULT_N, threads=None, **kwargs):
    """Evaluate :func:`find_transition` at every grid point.

    Per-point failures are recorded in ``PhaseCurve.failures`` (keyed by grid
    index) and do not stop the sweep. Output is ordered by grid index and
    independent of ``threads``.
    """
    grid = [float(x) for x in delta_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("delta grid must be strictly ascending")

    def solve(delta):
        try:
            return find_transition(delta, d, eps, n, **kwargs)
        except (SolverError, InfeasibleError) as exc:
            return exc

    workers = resolve_threads(threads)
    if workers == 1:
        results = [solve(x) for x in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, grid))
    curve = PhaseCurve(delta_grid=grid, rho_values=[], d=d, eps=eps, n=n)
    for idx, res in enumerate(results):
        if isinstance(res, TransitionPoint):
            curve.rho_values.append(res.rho)
            curve.residuals.append(res.residual)
            curve.iterations.append(res.iterations)
        else:
            curve.rho_values.append(math.nan)
            curve.residuals.append(math.nan)
            curve.iterations.append(-1)
            curve.failures[idx] = str(res)
    return curve
