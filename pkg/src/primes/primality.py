"""Big-integer primality testing.

Three tiers, cheapest first:

* trial division by the primes below 1000, which decides every n < 1009**2;
* deterministic Miller-Rabin over the first twelve prime bases, proven
  correct for n < 3.3e24 and used here for n < 2**64;
* strong Baillie-PSW above 2**64, reported as a probable prime.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

import gmpy2

from src.errors import DomainError

SMALL_PRIME_BOUND = 1000
DETERMINISTIC_LIMIT = 2**64
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(limit: int) -> List[int]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i, flag in enumerate(flags) if flag]


SMALL_PRIMES = tuple(_sieve(SMALL_PRIME_BOUND))
TRIAL_LIMIT = 1009**2  # first prime above SMALL_PRIME_BOUND, squared
SMALL_PRIMORIAL = gmpy2.mpz(1)
for _q in SMALL_PRIMES:
    SMALL_PRIMORIAL *= _q
del _q


class PrimalityStatus(str, Enum):
    COMPOSITE = "composite"
    PROVABLE_PRIME = "provable_prime"
    PROBABLE_PRIME = "probable_prime"


class PrimalityMethod(str, Enum):
    TRIAL_DIVISION = "trial_division"
    DETERMINISTIC_MR = "deterministic_mr"
    BPSW = "bpsw"


@dataclass(frozen=True)
class PrimalityVerdict:
    """Outcome of :func:`is_prime`.

    ``rounds`` counts strong-probable-prime rounds: the number of
    Miller-Rabin bases tried, 1 for a BPSW run, 0 for trial division.
    """

    status: PrimalityStatus
    method: PrimalityMethod
    rounds: int = 0

    def __post_init__(self):
        if self.status is PrimalityStatus.PROBABLE_PRIME and self.method is not PrimalityMethod.BPSW:
            raise ValueError("only BPSW yields probable primes")
        if self.status is PrimalityStatus.PROVABLE_PRIME and self.method is PrimalityMethod.BPSW:
            raise ValueError("BPSW cannot prove primality")

    @property
    def is_prime(self) -> bool:
        return self.status is not PrimalityStatus.COMPOSITE

    @property
    def is_provable(self) -> bool:
        return self.status is PrimalityStatus.PROVABLE_PRIME

    def __bool__(self) -> bool:
        return self.is_prime


def _trial(status: PrimalityStatus) -> PrimalityVerdict:
    return PrimalityVerdict(status, PrimalityMethod.TRIAL_DIVISION, 0)


def is_prime(n: int) -> PrimalityVerdict:
    """Classify a nonnegative integer as composite, provable or probable prime.

    Args:
        n: Integer to test.

    Returns:
        PrimalityVerdict recording the status and the method that decided it.

    Raises:
        DomainError: If n is negative.
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"primality is defined for n >= 0, got {n}")
    if n < 2:
        return _trial(PrimalityStatus.COMPOSITE)

    if n < TRIAL_LIMIT:
        for q in SMALL_PRIMES:
            if q * q > n:
                break
            if n % q == 0:
                return _trial(PrimalityStatus.COMPOSITE)
        return _trial(PrimalityStatus.PROVABLE_PRIME)

    if has_small_factor(n):
        return _trial(PrimalityStatus.COMPOSITE)

    if n < DETERMINISTIC_LIMIT:
        for rounds, base in enumerate(MR_BASES, start=1):
            if not gmpy2.is_strong_prp(n, base):
                return PrimalityVerdict(
                    PrimalityStatus.COMPOSITE, PrimalityMethod.DETERMINISTIC_MR, rounds
                )
        return PrimalityVerdict(
            PrimalityStatus.PROVABLE_PRIME, PrimalityMethod.DETERMINISTIC_MR, len(MR_BASES)
        )

    if gmpy2.is_strong_bpsw_prp(n):
        return PrimalityVerdict(PrimalityStatus.PROBABLE_PRIME, PrimalityMethod.BPSW, 1)
    return PrimalityVerdict(PrimalityStatus.COMPOSITE, PrimalityMethod.BPSW, 1)


def has_small_factor(n: int) -> bool:
    """True when n > 997 shares a factor with the primes below 1000."""
    return n > SMALL_PRIMES[-1] and gmpy2.gcd(n, SMALL_PRIMORIAL) != 1
