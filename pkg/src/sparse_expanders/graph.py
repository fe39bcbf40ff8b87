"""Random sparse expander matrices (SE / SSE) and measurements on them.

An ``n x N`` matrix with exactly ``d`` nonzeros per column is the adjacency
matrix of a left-``d``-regular bipartite graph with ``N`` left and ``n``
right vertices. Columns are stored as sorted row-index arrays.
"""
import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _streams
from .errors import DomainError, InfeasibleError

#: Unions over at most this many rows are counted with a dense mask.
BITSET_MAX_ROWS = 2 ** 16


class Ensemble(enum.Enum):
    SE = "SE"
    SSE = "SSE"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown ensemble {value!r}; expected SE or SSE") from None


@dataclass(frozen=True, eq=False)
class SparseColumnMatrix:
    """Column-sparse matrix with ``d`` distinct sorted row indices per column.

    Attributes:
        n: Number of rows (right vertices).
        N: Number of columns (left vertices).
        d: Nonzeros per column (left degree).
        supports: ``(N, d)`` int64 array, each row strictly increasing.
        signs: ``(N, d)`` int8 array of +-1 aligned with ``supports`` for SSE,
            ``None`` for SE.
        seed: Seed that generated the matrix, or ``None`` if built by hand.
    """
    n: int
    N: int
    d: int
    supports: np.ndarray
    signs: Optional[np.ndarray] = None
    seed: Optional[int] = None

    def __post_init__(self):
        sup = np.asarray(self.supports, dtype=np.int64)
        if sup.shape != (self.N, self.d):
            raise DomainError(f"supports shape {sup.shape} != ({self.N}, {self.d})")
        if sup.size and (sup.min() < 0 or sup.max() >= self.n):
            raise DomainError("row index outside [0, n)")
        if self.d > 1 and not np.all(np.diff(sup, axis=1) > 0):
            raise DomainError("column supports must be strictly increasing")
        sup.setflags(write=False)
        object.__setattr__(self, "supports", sup)
        if self.signs is not None:
            sg = np.asarray(self.signs, dtype=np.int8)
            if sg.shape != sup.shape or not np.all(np.abs(sg) == 1):
                raise DomainError("signs must be +-1 with the same shape as supports")
            sg.setflags(write=False)
            object.__setattr__(self, "signs", sg)

    @property
    def ensemble(self):
        return Ensemble.SE if self.signs is None else Ensemble.SSE

    @classmethod
    def from_supports(cls, n, supports, signs=None, seed=None):
        """Build a matrix from explicit column supports (sorted on the way in)."""
        sup = [sorted(int(r) for r in col) for col in supports]
        if not sup:
            raise DomainError("need at least one column")
        d = len(sup[0])
        if any(len(col) != d for col in sup):
            raise DomainError("every column needs the same number of nonzeros")
        if any(len(set(col)) != d for col in sup):
            raise DomainError("row indices within a column must be distinct")
        arr = np.array(sup, dtype=np.int64).reshape(len(sup), d)
        sg = None
        if signs is not None:
            # signs are given in the caller's column order, re-align to sorted rows
            sg = np.empty_like(arr, dtype=np.int8)
            for j, (col, col_signs) in enumerate(zip(supports, signs)):
                lookup = dict(zip((int(r) for r in col), col_signs))
                sg[j] = [lookup[r] for r in arr[j]]
        return cls(n=n, N=arr.shape[0], d=d, supports=arr, signs=sg, seed=seed)

    def to_dense(self):
        """Dense ``(n, N)`` float array, mostly for tests and small demos."""
        dense = np.zeros((self.n, self.N))
        cols = np.repeat(np.arange(self.N), self.d)
        vals = 1.0 if self.signs is None else self.signs.ravel()
        dense[self.supports.ravel(), cols] = vals
        return dense


def _check_shape(n, d):
    if d < 1:
        raise DomainError(f"degree d must be >= 1, got {d}")
    if n < 1:
        raise DomainError(f"row count n must be >= 1, got {n}")
    if d > n:
        raise InfeasibleError(f"cannot place d={d} distinct nonzeros in n={n} rows",
                              side="above")


def sample_supports(words, n, d):
    """Turn raw uint64 words into uniform ``d``-subsets of ``range(n)``.

    Each row of ``words`` holds at least ``d`` words; word ``t`` drives step
    ``t`` of a partial Fisher-Yates shuffle of the virtual array
    ``[0, 1, ..., n-1]``. Only displaced positions are tracked, so the cost
    is ``O(d^2)`` per column regardless of ``n``.

    Returns:
        ``(C, d)`` int64 array of sorted supports.
    """
    words = np.asarray(words, dtype=np.uint64)
    cols = words.shape[0]
    u = _streams.unit_floats(words[:, :d])
    out = np.empty((cols, d), dtype=np.int64)
    keys = np.empty((cols, d), dtype=np.int64)
    vals = np.empty((cols, d), dtype=np.int64)
    for t in range(d):
        j = t + np.floor(u[:, t] * (n - t)).astype(np.int64)
        vj = j.copy()
        vt = np.full(cols, t, dtype=np.int64)
        for prev in range(t):  # ascending, so the latest swap wins
            kp = keys[:, prev]
            vj = np.where(kp == j, vals[:, prev], vj)
            vt = np.where(kp == t, vals[:, prev], vt)
        out[:, t] = vj
        keys[:, t] = j
        vals[:, t] = vt
    out.sort(axis=1)
    return out


def sample_signs(words, d):
    """Fair +-1 signs from the top bit of each of ``d`` words per row."""
    bits = (np.asarray(words, dtype=np.uint64)[:, :d] >> np.uint64(63)).astype(np.int8)
    return (1 - 2 * bits).astype(np.int8)


def column_words(seed, column, d, lane=0):
    """The ``2d`` words consumed by one column: ``d`` for rows, ``d`` for signs."""
    return _streams.raw_words(seed, column, 2 * d, lane=lane)


def generate(n, N, d, ensemble=Ensemble.SE, seed=0):
    """Draw a random SE or SSE matrix.

    Column ``j`` draws its support (and then its signs) from the substream
    ``(seed, j)``, so any column can be regenerated on its own and the SE
    and SSE draws for one seed share supports.

    Args:
        n: Rows.
        N: Columns.
        d: Nonzeros per column, ``1 <= d <= n``.
        ensemble: ``Ensemble.SE`` (all ones) or ``Ensemble.SSE`` (random signs).
        seed: Integer in ``[0, 2**64)``.

    Returns:
        SparseColumnMatrix
    """
    _check_shape(n, d)
    if N < 1:
        raise DomainError(f"column count N must be >= 1, got {N}")
    ensemble = Ensemble.parse(ensemble)
    seed = _streams.check_seed(seed)
    words = np.empty((N, 2 * d), dtype=np.uint64)
    for j in range(N):
        words[j] = column_words(seed, j, d)
    supports = sample_supports(words, n, d)
    signs = sample_signs(words[:, d:], d) if ensemble is Ensemble.SSE else None
    return SparseColumnMatrix(n=n, N=N, d=d, supports=supports, signs=signs, seed=seed)


def _column_set(matrix, S):
    cols = sorted({int(j) for j in S})
    if not cols:
        raise DomainError("column set S must be nonempty")
    if cols[0] < 0 or cols[-1] >= matrix.N:
        raise DomainError(f"column index outside [0, {matrix.N})")
    return cols


def union_size(rows, n):
    """Number of distinct entries of an integer array of row indices."""
    rows = np.asarray(rows).ravel()
    if n <= BITSET_MAX_ROWS:
        mask = np.zeros(n, dtype=bool)
        mask[rows] = True
        return int(np.count_nonzero(mask))
    return int(np.unique(rows).size)


def neighbor_count(matrix, S):
    """``|A_S|``: number of rows holding a nonzero in some column of ``S``."""
    cols = _column_set(matrix, S)
    return union_size(matrix.supports[cols], matrix.n)


def expansion_event(matrix, S, eps):
    """True iff ``|A_S| >= (1 - eps) d |S|`` for ``0 < eps < 1/2``."""
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must lie in (0, 1/2), got {eps}")
    cols = _column_set(matrix, S)
    return union_size(matrix.supports[cols], matrix.n) >= (1.0 - eps) * matrix.d * len(cols)


def apply(matrix, x):
    """Matrix-vector product ``A x`` (SE entries are +1, SSE entries their sign)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (matrix.N,):
        raise DomainError(f"x must have shape ({matrix.N},), got {x.shape}")
    weights = np.repeat(x, matrix.d).reshape(matrix.N, matrix.d)
    if matrix.signs is not None:
        weights = weights * matrix.signs
    return np.bincount(matrix.supports.ravel(), weights=weights.ravel(),
                       minlength=matrix.n).astype(np.float64)


# -- text serialization ------------------------------------------------------
# Header "n N d ensemble seed", then one line per column. SE lines list row
# indices; SSE lines suffix each index with its sign, e.g. "3+ 17- 40+".

def dumps(matrix):
    seed = "-" if matrix.seed is None else str(matrix.seed)
    lines = [f"{matrix.n} {matrix.N} {matrix.d} {matrix.ensemble.value} {seed}"]
    for j in range(matrix.N):
        rows = matrix.supports[j]
        if matrix.signs is None:
            lines.append(" ".join(str(r) for r in rows))
        else:
            lines.append(" ".join(f"{r}{'+' if s > 0 else '-'}"
                                  for r, s in zip(rows, matrix.signs[j])))
    return "\n".join(lines) + "\n"


def loads(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty matrix file")
    try:
        n, N, d, ens, seed = lines[0].split()
        n, N, d = int(n), int(N), int(d)
    except ValueError:
        raise DomainError(f"bad matrix header {lines[0]!r}") from None
    ensemble = Ensemble.parse(ens)
    seed = None if seed == "-" else int(seed)
    body = lines[1:]
    if len(body) != N:
        raise DomainError(f"header announces {N} columns, found {len(body)}")
    supports = np.empty((N, d), dtype=np.int64)
    signs = np.empty((N, d), dtype=np.int8) if ensemble is Ensemble.SSE else None
    for j, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != d:
            raise DomainError(f"column {j} lists {len(tokens)} entries, expected {d}")
        for t, tok in enumerate(tokens):
            if signs is not None:
                if tok[-1] not in "+-":
                    raise DomainError(f"SSE entry {tok!r} lacks a sign")
                signs[j, t] = 1 if tok[-1] == "+" else -1
                tok = tok[:-1]
            supports[j, t] = int(tok)
    return SparseColumnMatrix(n=n, N=N, d=d, supports=supports, signs=signs, seed=seed)


def save(matrix, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(matrix))


def load(path):
    with open(path, encoding="ascii") as fh:
        return loads(fh.read())
