"""Tail bound on the size of the set of neighbours via dyadic splitting.

For ``s`` columns the bound is ``ln P(|A_s| <= a_s) < ln p_max(s, d) + n*psi``
where ``psi`` sums entropy terms over the merge levels ``i = 1, 2, 4, ...`` of
a binary splitting tree. The union cardinalities at those levels form a
:class:`DyadicProfile`. It holds either the expected values (unconstrained
top) or the solution of the cubic level relation that pins the top value to
a target ``a_s``.

Set sizes that are not powers of two are handled by a continuous
relaxation. The last merge joins a block of ``i`` columns (the largest power
of two below ``s``) with a block of ``s - i`` columns. It is weighted
``s / (2i)`` like every other level, and the smaller block's cardinality is
the profile's ``partner``. For powers of two the partner equals ``a_i`` and
the sum is exactly the symmetric one.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .combinatorics import log_p_max, shannon_entropy, CLAMP_TOL
from .errors import DomainError, InfeasibleError, SolverError

SHOOT_RTOL = 1e-12
SHOOT_MAXITER = 200


@dataclass(frozen=True)
class DyadicProfile:
    """Union cardinalities ``a_1 = d, a_2, a_4, ..., a_s`` at the merge levels.

    ``levels`` holds ``(i, a_i)`` pairs in increasing ``i``; the final pair
    is ``(s, a_s)``. ``partner`` is the cardinality of the ``s - i`` column
    block joined at the top merge.
    """
    n: int
    d: int
    s: float
    levels: Tuple[Tuple[float, float], ...]
    partner: float
    constrained: bool = False

    @property
    def top(self):
        return self.levels[-1][1]

    @property
    def values(self):
        return [a for _, a in self.levels]


@dataclass(frozen=True)
class TailBoundResult:
    """Log-domain tail bound together with what produced it.

    ``log_bound == ln p_max(s, d) + n * psi``. A positive ``log_bound``
    is a vacuous (but valid) bound.
    """
    log_bound: float
    psi: float
    profile: DyadicProfile
    s: float
    d: int
    n: int
    a_s: float
    eps: Optional[float] = None

    @property
    def case(self):
        return "constrained" if self.profile.constrained else "expected"

    @property
    def vacuous(self):
        return self.log_bound > 0.0


def _dyadic_floor(s):
    """Largest power of two ``i`` with ``i < s`` (so the top merge is ``i -> s``)."""
    i = 1
    while 2 * i < s:
        i *= 2
    return i


def _check_sdn(s, d, n):
    if not s >= 2:
        raise DomainError(f"set size s must be >= 2 (|A_1| = d is deterministic), got {s}")
    if d < 1 or n < 1:
        raise DomainError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    if d > n:
        raise InfeasibleError(f"degree d={d} exceeds n={n}", side="above")


def _geometric(x, d, q):
    """Relaxed cardinality of ``x`` columns, ``d (1 - q^x) / (1 - q)``."""
    if q >= 1.0:
        return d * x
    return d * (1.0 - q ** x) / (1.0 - q)


def expected_cardinality(s, d, n):
    """``E|A_s| = n (1 - (1 - d/n)^s)``; the level recursion reproduces it."""
    return n * -math.expm1(s * math.log1p(-d / n)) if d < n else float(n)


def expected_profile(s, d, n):
    """Profile of expected values, ``a_{2i} = a_i (2 - a_i / n)`` from ``a_1 = d``.

    Args:
        s: Top set size, ``s >= 2`` (real values accepted).
        d: Column degree.
        n: Row count.

    Returns:
        DyadicProfile with ``constrained=False``.
    """
    _check_sdn(s, d, n)
    i_top = _dyadic_floor(s)
    levels = [(1, float(d))]
    a = float(d)
    i = 1
    while i < i_top:
        a = a * (2.0 - a / n)
        i *= 2
        levels.append((i, a))
    if s == 2 * i_top:
        top = a * (2.0 - a / n)
        partner = a
    else:
        # fractional last step: empty fraction (1 - a/n) raised to s/i
        top = n * -math.expm1((s / i_top) * math.log1p(-a / n)) if a < n else float(n)
        partner = expected_cardinality(s - i_top, d, n)
    levels.append((s, top))
    return DyadicProfile(n=n, d=d, s=s, levels=tuple(levels), partner=partner,
                         constrained=False)


def cubic_forward(a_i, a_2i, n=None):
    """Solve ``a_2i^3 - 2 a_i a_2i^2 + 2 a_i^2 a_2i - a_i^2 a_4i = 0`` for ``a_4i``.

    Raises:
        DomainError: If ``a_i`` is zero.
        InfeasibleError: If the result exceeds ``min(2 a_2i, n)``.
    """
    if a_i == 0:
        raise DomainError("cubic_forward needs a_i > 0")
    a_4i = (a_2i ** 3 - 2.0 * a_i * a_2i ** 2 + 2.0 * a_i ** 2 * a_2i) / a_i ** 2
    cap = 2.0 * a_2i if n is None else min(2.0 * a_2i, n)
    if a_4i > cap * (1.0 + 1e-12):
        raise InfeasibleError(f"a_4i={a_4i} exceeds min(2 a_2i, n)={cap}", side="above")
    return a_4i


def _shoot(s, d, n, a_2):
    """Propagate a trial ``a_2`` up the levels; returns (levels, partner)."""
    i_top = _dyadic_floor(s)
    q = a_2 / d - 1.0
    if i_top == 1:
        return [(1, float(d)), (s, float(a_2))], float(d)
    levels = [(1, float(d)), (2, float(a_2))]
    i = 2
    while i < i_top:
        levels.append((2 * i, cubic_forward(levels[-2][1], levels[-1][1], n)))
        i *= 2
    a_half, a_i = levels[-2][1], levels[-1][1]
    if s == 2 * i_top:
        top = cubic_forward(a_half, a_i, n)
        partner = a_i
    else:
        ratio = (a_i / a_half - 1.0) ** 2  # the next level's growth a_2i/a_i - 1
        t = s / i_top
        top = a_i * t if ratio >= 1.0 else a_i * (1.0 - ratio ** t) / (1.0 - ratio)
        partner = _geometric(s - i_top, d, q)
    levels.append((s, top))
    return levels, partner


def constrained_profile(s, d, n, a_s):
    """Profile satisfying the cubic level relation whose top value is ``a_s``.

    The only free unknown is ``a_2``. It is bisected on ``[d, E|A_2|]``,
    every higher level follows by :func:`cubic_forward`, and the top value
    is monotone in ``a_2``.

    Args:
        s: Top set size (``>= 2``).
        d: Column degree.
        n: Row count.
        a_s: Target top cardinality with ``d <= a_s <= E|A_s|``.

    Returns:
        DyadicProfile with ``constrained=True``.

    Raises:
        InfeasibleError: ``a_s < d``.
        DomainError: ``a_s`` above the expected value (use
            :func:`expected_profile`).
        SolverError: The bracket does not contain the target.
    """
    _check_sdn(s, d, n)
    if a_s < d:
        raise InfeasibleError(f"a_s={a_s} below the minimum cardinality d={d}", side="below")
    expected = expected_profile(s, d, n)
    if a_s > expected.top * (1.0 + 1e-12):
        raise DomainError(f"a_s={a_s} exceeds E|A_s|={expected.top}; "
                          "use expected_profile for unconstrained tops")
    lo, hi = float(d), expected.levels[1][1]
    if a_s == d:
        levels, partner = _shoot(s, d, n, lo)
        return DyadicProfile(n, d, s, tuple(levels), partner, constrained=True)
    f_lo = _shoot(s, d, n, lo)[0][-1][1] - a_s
    f_hi = _shoot(s, d, n, hi)[0][-1][1] - a_s
    if f_lo > 0 or f_hi < -1e-10 * n:
        raise SolverError("shooting interval does not bracket the target",
                          {"a_s": a_s, "a_2_bracket": (lo, hi), "residuals": (f_lo, f_hi)})
    iterations = 0
    # run to float resolution; SHOOT_RTOL is only the guaranteed floor
    while iterations < SHOOT_MAXITER:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if _shoot(s, d, n, mid)[0][-1][1] < a_s:
            lo = mid
        else:
            hi = mid
        iterations += 1
    if hi - lo > SHOOT_RTOL * hi:
        raise SolverError("shooting bisection stalled", {"a_2_bracket": (lo, hi)})
    levels, partner = _shoot(s, d, n, 0.5 * (lo + hi))
    residual = levels[-1][1] - a_s
    if abs(residual) > 1e-10 * n:
        raise SolverError("shooting did not reach the target top value",
                          {"a_s": a_s, "residual": residual, "iterations": iterations})
    levels[-1] = (s, float(a_s))
    return DyadicProfile(n, d, s, tuple(levels), partner, constrained=True)


def _entropy_checked(x):
    if not -CLAMP_TOL <= x <= 1.0 + CLAMP_TOL:
        raise InfeasibleError(f"profile produces entropy argument {x!r} outside [0, 1]")
    return shannon_entropy(min(max(x, 0.0), 1.0))


def merge_term(n, a, partner, union):
    """Log-count exponent for joining blocks of cardinality ``a`` and ``partner``.

    For ``partner == a`` this is
    ``(n-a) H((u-a)/(n-a)) + a H((u-a)/a) - n H(a/n)``.
    """
    fresh = union - a
    term = 0.0
    if n - a > 0:
        term += (n - a) * _entropy_checked(fresh / (n - a))
    elif fresh > CLAMP_TOL * n:
        raise InfeasibleError("union grows beyond n")
    overlap_arg = fresh / a if partner == a else (partner - fresh) / a
    term += a * _entropy_checked(overlap_arg)
    term -= n * _entropy_checked(partner / n)
    return term


def psi(profile):
    """Per-``n`` exponent of the tail bound for a profile.

    ``psi = (1/n) [3 s ln(5d) + sum_i (s / 2i) * merge_term(level i)]``
    """
    n, d, s = profile.n, profile.d, profile.s
    total = 3.0 * s * math.log(5.0 * d)
    pairs = list(zip(profile.levels[:-1], profile.levels[1:]))
    for idx, ((i, a), (_, a_next)) in enumerate(pairs):
        partner = profile.partner if idx == len(pairs) - 1 else a
        total += (s / (2.0 * i)) * merge_term(n, a, partner, a_next)
    return total / n


def tail_bound(s, d, n, a_s):
    """Upper bound on ``ln P(|A_s| <= a_s)`` for an SE/SSE matrix.

    Uses the expected profile when ``a_s`` is at least ``E|A_s|`` and the
    constrained profile otherwise. Real ``a_s`` is accepted; the discrete
    event is ``|A_s| <= floor(a_s)``.
    """
    _check_sdn(s, d, n)
    if a_s < d:
        raise InfeasibleError(f"a_s={a_s} below the minimum cardinality d={d}", side="below")
    expected = expected_profile(s, d, n)
    if a_s >= expected.top:
        profile = expected
    else:
        profile = constrained_profile(s, d, n, a_s)
    value = psi(profile)
    return TailBoundResult(log_bound=log_p_max(s, d) + n * value, psi=value,
                           profile=profile, s=s, d=d, n=n, a_s=float(a_s))


def rip1_failure_bound(s, d, n, eps):
    """Bound on ``ln P(||A_S x||_1 <= (1 - 2 eps) d ||x||_1)``, i.e. ``a_s = (1-eps) d s``."""
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")
    result = tail_bound(s, d, n, (1.0 - eps) * d * s)
    return TailBoundResult(log_bound=result.log_bound, psi=result.psi,
                           profile=result.profile, s=s, d=d, n=n,
                           a_s=result.a_s, eps=eps)
