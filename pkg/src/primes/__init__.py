"""Primality testing and prime search."""

from src.primes.primality import (
    PrimalityMethod,
    PrimalityStatus,
    PrimalityVerdict,
    is_prime,
)
from src.primes.search import find_prime_in_interval, smallest_prime_at_least

__all__ = [
    "PrimalityMethod",
    "PrimalityStatus",
    "PrimalityVerdict",
    "is_prime",
    "find_prime_in_interval",
    "smallest_prime_at_least",
]
