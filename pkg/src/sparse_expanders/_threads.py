import os

from .errors import DomainError

THREADS_ENV = "SPARSE_EXPANDERS_THREADS"


def resolve_threads(threads=None):
    """Worker count: explicit argument, else ``$SPARSE_EXPANDERS_THREADS``, else 1."""
    if threads is None:
        threads = os.environ.get(THREADS_ENV, "1")
    try:
        threads = int(threads)
    except (TypeError, ValueError):
        raise DomainError(f"thread count must be an integer, got {threads!r}") from None
    if threads < 1:
        raise DomainError(f"thread count must be >= 1, got {threads}")
    return threads
