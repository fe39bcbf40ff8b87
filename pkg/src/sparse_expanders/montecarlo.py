"""Monte Carlo and exact oracles for union cardinalities ``|A_k|``.

Trial ``t`` for set size ``k`` draws its ``k`` fresh columns from substream
``(seed, t, lane=k)``. The draws are therefore identical for any chunking of
the trial range over worker threads.
"""
import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from scipy import stats

from . import _streams
from ._threads import resolve_threads
from .dyadic import expected_profile
from .errors import CapacityError, DomainError
from .graph import Ensemble, sample_supports, _check_shape
from .phase import format_float

#: Upper bound on row indices held in memory per chunk of trials.
CHUNK_ENTRIES = 2 ** 22
#: Two-sided normal coverage of +-3 sigma, used for the Wilson fallback.
THREE_SIGMA = math.erf(3.0 / math.sqrt(2.0))
MAX_ENUMERATION = 4_000_000
MAX_SUBSETS = 10 ** 7


def default_k_grid(n, d=None):
    """Powers of two up to ``n`` merged with multiples of ``n // 16``.

    ``d`` is unused; it is accepted so callers can pass a full config.
    """
    grid = set()
    k = 1
    while k <= n:
        grid.add(k)
        k *= 2
    step = max(n // 16, 1)
    grid.update(range(step, n + 1, step))
    return sorted(grid)


@dataclass
class SimulationConfig:
    n: int
    d: int
    k_grid: List[int]
    trials: int
    seed: int = 0
    ensemble: Ensemble = Ensemble.SE

    def __post_init__(self):
        _check_shape(self.n, self.d)
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials}")
        self.seed = _streams.check_seed(self.seed)
        self.ensemble = Ensemble.parse(self.ensemble)
        self.k_grid = [int(k) for k in self.k_grid]


@dataclass
class SimulationResult:
    """Per-``k`` samples of ``|A_k|`` with empirical and expected means."""
    config: SimulationConfig
    samples: Dict[int, np.ndarray] = field(default_factory=dict)
    means: Dict[int, float] = field(default_factory=dict)
    expected: Dict[int, float] = field(default_factory=dict)
    rel_error: Dict[int, float] = field(default_factory=dict)
    errors: Dict[int, str] = field(default_factory=dict)

    @property
    def max_rel_error(self):
        return max(self.rel_error.values())

    def to_csv(self, mode="summary"):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cfg = self.config
        if mode == "raw":
            writer.writerow(["k", "trial", "cardinality"])
            for k in cfg.k_grid:
                for t, value in enumerate(self.samples.get(k, ())):
                    writer.writerow([k, t, int(value)])
        elif mode == "summary":
            writer.writerow(["k", "mean", "expected", "rel_error", "trials", "seed"])
            for k in cfg.k_grid:
                if k in self.errors:
                    writer.writerow([k, "nan", "nan", "nan", cfg.trials, cfg.seed])
                    continue
                writer.writerow([k, format_float(self.means[k]),
                                 format_float(self.expected[k]),
                                 format_float(self.rel_error[k]), cfg.trials, cfg.seed])
        else:
            raise DomainError(f"unknown CSV mode {mode!r}")
        return buf.getvalue()


def _cardinalities_chunk(n, d, k, seed, first, last):
    count = last - first
    words = np.empty((count * k, d), dtype=np.uint64)
    for t in range(first, last):
        block = _streams.raw_words(seed, t, 2 * d * k, lane=k).reshape(k, 2 * d)
        words[(t - first) * k:(t - first + 1) * k] = block[:, :d]
    rows = sample_supports(words, n, d).reshape(count, k * d)
    rows.sort(axis=1)
    return 1 + np.count_nonzero(np.diff(rows, axis=1), axis=1)


def draw_cardinalities(n, d, k, trials, seed=0, threads=None):
    """``trials`` independent samples of ``|A_k|`` (fresh columns per trial)."""
    _check_shape(n, d)
    if k < 1:
        raise DomainError(f"set size k must be >= 1, got {k}")
    seed = _streams.check_seed(seed)
    per_chunk = max(1, CHUNK_ENTRIES // (k * d))
    bounds = [(lo, min(lo + per_chunk, trials)) for lo in range(0, trials, per_chunk)]
    workers = resolve_threads(threads)
    if workers == 1 or len(bounds) == 1:
        parts = [_cardinalities_chunk(n, d, k, seed, lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _cardinalities_chunk(n, d, k, seed, *b), bounds))
    return np.concatenate(parts).astype(np.int64)


def expected_union(k, d, n):
    return float(d) if k == 1 else expected_profile(k, d, n).top


def simulate_cardinalities(config, threads=None):
    """Sample ``|A_k|`` for every ``k`` in the grid and compare with ``E|A_k|``.

    Infeasible grid entries are recorded in ``result.errors`` instead of
    aborting the run.
    """
    result = SimulationResult(config=config)
    for k in config.k_grid:
        if k < 1:
            result.errors[k] = f"set size k={k} must be >= 1"
            continue
        samples = draw_cardinalities(config.n, config.d, k, config.trials,
                                     config.seed, threads)
        mean = float(samples.mean())
        expected = expected_union(k, config.d, config.n)
        result.samples[k] = samples
        result.means[k] = mean
        result.expected[k] = expected
        result.rel_error[k] = abs(mean - expected) / expected
    return result


@dataclass(frozen=True)
class TailEstimate:
    """Empirical ``P(|A_s| <= floor(a_s))`` with a 3-sigma radius."""
    frequency: float
    radius: float
    hits: int
    trials: int
    threshold: int


def confidence_radius(hits, trials):
    """3-sigma normal radius, or the Wilson interval's reach when hits < 10."""
    p = hits / trials
    if p * trials < 10:
        ci = stats.binomtest(hits, trials).proportion_ci(confidence_level=THREE_SIGMA,
                                                         method="wilson")
        return max(p - ci.low, ci.high - p)
    return 3.0 * math.sqrt(p * (1.0 - p) / trials)


def empirical_tail(n, d, s, a_s, trials, seed=0, threads=None):
    """Monte Carlo frequency of ``|A_s| <= floor(a_s)``."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    threshold = math.floor(a_s)
    samples = draw_cardinalities(n, d, s, trials, seed, threads)
    hits = int(np.count_nonzero(samples <= threshold))
    return TailEstimate(frequency=hits / trials, radius=confidence_radius(hits, trials),
                        hits=hits, trials=trials, threshold=threshold)


# -- exact distributions -------------------------------------------------------

def _pmf_closed_form(n, d):
    # overlap of two independent d-subsets is hypergeometric
    overlap = np.arange(max(0, 2 * d - n), d + 1)
    pmf = np.zeros(n + 1)
    pmf[2 * d - overlap] = stats.hypergeom.pmf(overlap, n, d, d)
    return pmf


def _pmf_chain(n, d, s):
    # adding one column to a union of size u adds j fresh rows with
    # hypergeometric probability C(n-u, j) C(u, d-j) / C(n, d)
    if n * (d + 1) * s > 10 ** 8:
        raise CapacityError(f"chain for n={n}, d={d}, s={s} exceeds the work guard")
    total = math.comb(n, d)
    step = np.zeros((n + 1, d + 1))
    for u in range(d, n + 1):
        for j in range(d + 1):
            step[u, j] = math.comb(n - u, j) * math.comb(u, d - j) / total
    pmf = np.zeros(n + 1)
    pmf[d] = 1.0
    for _ in range(s - 1):
        nxt = np.zeros(n + 1)
        for j in range(d + 1):
            nxt[j:] += (pmf * step[:, j])[: n + 1 - j]
        pmf = nxt
    return pmf


def _pmf_enumerate(n, d, s):
    count = math.comb(n, d) ** s
    if count > MAX_ENUMERATION:
        raise CapacityError(f"{count} support tuples exceed the enumeration guard "
                            f"{MAX_ENUMERATION}")
    masks = [sum(1 << r for r in c) for c in itertools.combinations(range(n), d)]
    tally = np.zeros(n + 1, dtype=np.int64)
    for combo in itertools.product(masks, repeat=s):
        union = 0
        for m in combo:
            union |= m
        tally[union.bit_count()] += 1
    return tally / count


def exact_union_distribution(n, d, s, method="auto"):
    """Exact probability mass of ``|A_s|`` as an array indexed by cardinality.

    Args:
        n: Rows.
        d: Column degree.
        s: Number of independent columns.
        method: ``"closed"`` (hypergeometric overlap law, ``s == 2`` only),
            ``"chain"`` (column-by-column Markov chain), ``"enumerate"``
            (brute force over all support tuples, tiny cases only) or
            ``"auto"`` (closed form for ``s == 2``, chain otherwise).

    Returns:
        ``np.ndarray`` of length ``n + 1``; entry ``u`` is ``P(|A_s| = u)``.

    Raises:
        CapacityError: The chosen method's size guard is exceeded.
    """
    _check_shape(n, d)
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    if method == "auto":
        method = "closed" if s == 2 else "chain"
    if s == 1:
        pmf = np.zeros(n + 1)
        pmf[d] = 1.0
        return pmf
    if method == "closed":
        if s != 2:
            raise DomainError("closed form covers s == 2 only")
        return _pmf_closed_form(n, d)
    if method == "chain":
        return _pmf_chain(n, d, s)
    if method == "enumerate":
        return _pmf_enumerate(n, d, s)
    raise DomainError(f"unknown method {method!r}")


def exact_tail(n, d, s, a_s, method="auto"):
    """Exact ``P(|A_s| <= floor(a_s))``."""
    pmf = exact_union_distribution(n, d, s, method)
    threshold = math.floor(a_s)
    if threshold < 0:
        return 0.0
    return float(pmf[: min(threshold, n) + 1].sum())


# -- exhaustive expander verification -----------------------------------------

@dataclass(frozen=True)
class ExpanderVerdict:
    """Outcome of checking every column set of size ``<= k``.

    ``witness`` is the set with the smallest expansion ``|Gamma(X)| / |X|``
    among the failing sets (``None`` on pass).
    """
    passed: bool
    k: int
    eps: float
    checked: int
    witness: Optional[tuple] = None
    witness_neighbors: Optional[int] = None
    min_expansion: float = math.inf


def verify_expander_exhaustive(matrix, k, eps, max_subsets=MAX_SUBSETS):
    """Check the lossless ``(k, d, eps)`` expansion property by brute force."""
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    k = min(k, matrix.N)
    work = sum(math.comb(matrix.N, j) for j in range(1, k + 1))
    if work > max_subsets:
        raise CapacityError(f"{work} column subsets exceed the guard {max_subsets}; "
                            "sample subsets instead")
    masks = [sum(1 << int(r) for r in col) for col in matrix.supports]
    need = 1.0 - eps
    worst, worst_ratio, worst_count = None, math.inf, None
    min_expansion = math.inf
    checked = 0
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(matrix.N), size):
            union = 0
            for j in subset:
                union |= masks[j]
            count = union.bit_count()
            checked += 1
            ratio = count / size
            min_expansion = min(min_expansion, ratio)
            if count < need * matrix.d * size and ratio < worst_ratio:
                worst, worst_ratio, worst_count = subset, ratio, count
    return ExpanderVerdict(passed=worst is None, k=k, eps=eps, checked=checked,
                           witness=worst, witness_neighbors=worst_count,
                           min_expansion=min_expansion)


__all__ = [
    "SimulationConfig", "SimulationResult", "TailEstimate", "ExpanderVerdict",
    "default_k_grid", "draw_cardinalities", "simulate_cardinalities",
    "empirical_tail", "exact_union_distribution", "exact_tail",
    "verify_expander_exhaustive", "confidence_radius",
]
