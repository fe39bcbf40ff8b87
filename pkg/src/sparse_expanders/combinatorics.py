"""Scalar special functions used by the bound computations.

Everything probability-like is returned in nats (natural-log units).
"""
import math

from .errors import DomainError

#: Inputs this far outside [0, 1] are clamped instead of rejected.
CLAMP_TOL = 1e-12


def shannon_entropy(p):
    """Binary Shannon entropy in nats, ``-p ln p - (1-p) ln(1-p)``.

    Uses the convention ``0 ln 0 = 0`` so both endpoints return exactly 0.

    Args:
        p: Fraction in [0, 1]. Values within ``CLAMP_TOL`` outside the
            interval are clamped.

    Returns:
        float: The entropy.

    Raises:
        DomainError: If ``p`` is NaN or further than ``CLAMP_TOL`` from [0, 1].
    """
    p = float(p)
    if not (-CLAMP_TOL <= p <= 1.0 + CLAMP_TOL):
        raise DomainError(f"entropy argument {p!r} outside [0, 1]")
    if p <= 0.0 or p >= 1.0:
        return 0.0
    q = 1.0 - p
    return -p * math.log(p) - q * math.log1p(-p)


def p_max(s, d):
    """Polynomial prefactor ``2 / (25 sqrt(2 pi s^3 d^3))`` of the tail bound.

    ``s`` may be real-valued (the phase-transition solver relaxes it), but
    must be at least 1.
    """
    if s < 1 or d < 1:
        raise DomainError(f"p_max needs s >= 1 and d >= 1, got s={s}, d={d}")
    return 2.0 / (25.0 * math.sqrt(2.0 * math.pi * float(s) ** 3 * float(d) ** 3))


def log_p_max(s, d):
    """``ln p_max(s, d)`` evaluated without forming the small product."""
    if s < 1 or d < 1:
        raise DomainError(f"p_max needs s >= 1 and d >= 1, got s={s}, d={d}")
    return (math.log(2.0 / 25.0) - 0.5 * math.log(2.0 * math.pi)
            - 1.5 * (math.log(s) + math.log(d)))


def log_binomial(n, k):
    """Natural log of the binomial coefficient C(n, k) via log-gamma."""
    if n < 0 or k < 0 or k > n:
        raise DomainError(f"log_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 0.0
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
