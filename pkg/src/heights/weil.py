"""Weil heights and the f-functional ``(deg a)^g * h(a)``."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from src.errors import DomainError
from src.heights.mahler import mahler_measure
from src.heights.polynomial import IntPolynomial
from src.numerics.bigreal import (
    Enclosure,
    PrecisionPolicy,
    RealLike,
    log_at,
    log_enc,
    pow_enc,
    refine,
)
from src.primes.primality import is_prime

logger = logging.getLogger(__name__)

# rational-root screening enumerates divisors only below this size
RATIONAL_ROOT_SCREEN_LIMIT = 10**12


@dataclass(frozen=True)
class RadicalGenerator:
    """The number ``p^(1/d)`` with p and d prime."""

    p: int
    d: int
    degree: int
    height: Enclosure

    @property
    def minimal_polynomial(self) -> IntPolynomial:
        return IntPolynomial.binomial(self.d, self.p)


def radical_height(p: int, d: int, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """Enclosure of the Weil height ``(log p) / d`` of ``p^(1/d)``.

    Args:
        p: Radicand, at least 2.
        d: Root index, at least 1.
        policy: Precision policy; the width target is absolute.

    Raises:
        DomainError: If p < 2 or d < 1.
    """
    p, d = int(p), int(d)
    if p < 2 or d < 1:
        raise DomainError(f"radical height needs p >= 2 and d >= 1, got p={p}, d={d}")
    policy = policy or PrecisionPolicy()
    return refine(
        lambda bits: log_at(Enclosure.from_int(p, bits), bits) / d,
        policy,
        relative=False,
        what=f"h({p}^(1/{d}))",
    )


def radical_generator(p: int, d: int, policy: Optional[PrecisionPolicy] = None) -> RadicalGenerator:
    """Build a :class:`RadicalGenerator`, checking that p and d are prime."""
    for name, value in (("p", p), ("d", d)):
        if not is_prime(value).is_prime:
            raise DomainError(f"{name}={value} is not prime")
    return RadicalGenerator(p=int(p), d=int(d), degree=int(d), height=radical_height(p, d, policy))


def f_value(
    degree: int,
    gamma_prime: Union[Enclosure, RealLike],
    h: Enclosure,
    policy: Optional[PrecisionPolicy] = None,
) -> Enclosure:
    """Enclosure of ``degree ** gamma_prime * h``; ``gamma_prime`` may be any real."""
    if int(degree) < 1:
        raise DomainError(f"degree must be at least 1, got {degree}")
    if h.lo < 0:
        raise DomainError("heights are nonnegative")
    policy = policy or PrecisionPolicy()
    if int(degree) == 1:
        return h
    return pow_enc(int(degree), gamma_prime, policy) * h


def _divisors(n: int) -> Iterator[int]:
    n = abs(n)
    k = 1
    while k * k <= n:
        if n % k == 0:
            yield k
            if k * k != n:
                yield n // k
        k += 1


def rational_root(f: IntPolynomial) -> Optional[Fraction]:
    """A rational root of f found by the rational-root theorem, if cheap to find."""
    if f.constant == 0:
        return Fraction(0)
    if abs(f.constant) > RATIONAL_ROOT_SCREEN_LIMIT or abs(f.leading) > RATIONAL_ROOT_SCREEN_LIMIT:
        logger.debug("skipping rational-root screen for %s", f)
        return None
    for a in _divisors(f.constant):
        for b in _divisors(f.leading):
            for candidate in (Fraction(a, b), Fraction(-a, b)):
                if f.evaluate(candidate) == 0:
                    return candidate
    return None


def weil_height_from_minpoly(f: IntPolynomial, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """Enclosure of ``log M(f) / deg f`` for the minimal polynomial f of a number.

    Irreducibility is the caller's responsibility; only a rational-root
    screen is run for polynomials of degree above 1.

    Raises:
        DomainError: For constant f, or when f of degree > 1 has a rational root.
        PrecisionExhausted: Propagated from the Mahler measure.
    """
    if f.degree < 1:
        raise DomainError("a minimal polynomial has degree at least 1")
    if f.degree > 1:
        root = rational_root(f)
        if root is not None:
            raise DomainError(f"{f} has the rational root {root} and is reducible")
    policy = policy or PrecisionPolicy()
    content = f.content
    primitive = IntPolynomial(tuple(c // content for c in f.coefficients))
    measure = mahler_measure(primitive, policy)
    return log_enc(measure, policy) / f.degree


def eisenstein_check(f: IntPolynomial, q: int) -> bool:
    """True iff f is monic and Eisenstein at the prime q."""
    if not is_prime(q).is_prime:
        raise DomainError(f"Eisenstein criterion needs a prime, got {q}")
    if not f.is_monic or f.degree < 1:
        return False
    return all(c % q == 0 for c in f.coefficients[:-1]) and f.constant % (q * q) != 0
