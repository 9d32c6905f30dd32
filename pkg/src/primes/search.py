"""Deterministic smallest-prime search over integer ranges."""

import logging
from itertools import islice
from typing import AbstractSet, Iterator, Optional, Tuple

from joblib import Parallel, delayed

from src.errors import DomainError
from src.primes.primality import is_prime

logger = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 2048


def _chunks(lo: int, hi: int, size: int) -> Iterator[Tuple[int, int]]:
    start = lo
    while start <= hi:
        end = min(start + size - 1, hi)
        yield start, end
        start = end + 1


def _candidates(lo: int, hi: int) -> Iterator[int]:
    if lo <= 2 <= hi:
        yield 2
    n = max(lo, 3)
    if n % 2 == 0:
        n += 1
    while n <= hi:
        yield n
        n += 2


def _scan_chunk(lo: int, hi: int, exclude: AbstractSet[int]) -> Optional[int]:
    for n in _candidates(lo, hi):
        if n in exclude:
            continue
        if is_prime(n).is_prime:
            return n
    return None


def find_prime_in_interval(
    lo: int,
    hi: int,
    exclude: AbstractSet[int] = frozenset(),
    jobs: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> Optional[int]:
    """Return the smallest prime q with lo <= q <= hi and q not in ``exclude``.

    The range is cut into chunks of ``chunk_size`` integers. With
    ``jobs > 1`` consecutive batches of ``jobs`` chunks are scanned on a
    thread pool; the answer is taken from the earliest chunk of the first
    batch that holds any hit, so it does not depend on ``jobs``.

    Args:
        lo: Lower end of the range, inclusive.
        hi: Upper end of the range, inclusive.
        exclude: Primes that may not be returned.
        jobs: Number of chunks scanned concurrently.
        chunk_size: Integers per chunk.

    Returns:
        The prime, or None when the range holds no eligible prime.
    """
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise DomainError(f"empty search range [{lo}, {hi}]")
    if jobs < 1 or chunk_size < 1:
        raise DomainError("jobs and chunk_size must be positive")
    lo = max(lo, 2)
    if lo > hi:
        return None

    chunks = _chunks(lo, hi, chunk_size)
    if jobs == 1:
        for a, b in chunks:
            found = _scan_chunk(a, b, exclude)
            if found is not None:
                return found
        return None

    with Parallel(n_jobs=jobs, prefer="threads") as parallel:
        while True:
            batch = list(islice(chunks, jobs))
            if not batch:
                return None
            results = parallel(delayed(_scan_chunk)(a, b, exclude) for a, b in batch)
            for found in results:
                if found is not None:
                    return found
            logger.debug("no prime in [%d, %d], continuing", batch[0][0], batch[-1][1])


def smallest_prime_at_least(
    start: int,
    exclude: AbstractSet[int] = frozenset(),
    scan_cap: int = 1_000_000,
    jobs: int = 1,
) -> Optional[int]:
    """Smallest eligible prime in ``[start, start + scan_cap]``, or None."""
    return find_prime_in_interval(start, int(start) + scan_cap, exclude, jobs=jobs)
