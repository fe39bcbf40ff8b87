"""Counter-based random substreams.

Every random quantity in the package is drawn from a Philox4x64 stream
identified by ``(seed, stream, lane)``:

* the 128-bit Philox key is ``seed + 2**64 * stream``;
* the 256-bit counter starts at ``[0, lane, 0, 0]``.

Matrix column ``j`` generated with seed ``s`` uses ``(s, j, 0)``; Monte Carlo
trial ``t`` for set size ``k`` uses ``(s, t, k)``. Streams are therefore a
pure function of their indices, so results do not depend on how work is
split across threads. Philox is implemented identically on every platform
numpy supports.
"""
import numpy as np

from .errors import DomainError

_U64 = 2 ** 64
_TO_UNIT = 2.0 ** -53


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise DomainError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise DomainError(f"seed must lie in [0, 2**64), got {seed}")
    return seed


def raw_words(seed, stream, count, lane=0):
    """Return ``count`` raw uint64 words from substream ``(seed, stream, lane)``."""
    bitgen = np.random.Philox(key=seed + _U64 * int(stream),
                              counter=[0, int(lane), 0, 0])
    return bitgen.random_raw(count)


def unit_floats(words):
    """Map uint64 words to doubles in [0, 1) using their top 53 bits."""
    return (words >> np.uint64(11)).astype(np.float64) * _TO_UNIT
