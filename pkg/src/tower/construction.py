"""Deterministic construction of the prime sequences (d_i, p_i).

Each level first picks d as the smallest prime >= 2 * (previous d) and
then p as the smallest prime in the certified integer bracket of
``[x, 2x]``, where ``x = e^(d^tau)`` or ``x = d^delta``. Every prime is
kept out of all later choices, so the 2 * horizon primes are distinct.
"""

import logging
import math
from dataclasses import dataclass
from typing import AbstractSet, Iterator, List, Optional, Sequence, Set, Tuple

from src.errors import (
    BitSizeExceeded,
    DomainError,
    HeightTowerError,
    IntervalExhausted,
    PrecisionExhausted,
    SearchExhausted,
)
from src.heights.polynomial import IntPolynomial
from src.heights.weil import eisenstein_check
from src.numerics.bigreal import (
    Enclosure,
    IntegerBracket,
    PrecisionPolicy,
    enclose,
    exp_at,
    integer_bracket,
    log_enc,
    pow_at,
)
from src.primes.primality import PrimalityVerdict, is_prime
from src.primes.search import find_prime_in_interval, smallest_prime_at_least
from src.tower.params import ConstructionParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TowerLevel:
    """Level i of the tower: the field step ``K_i = K_(i-1)(p^(1/d))``."""

    index: int
    d: int
    p: int
    p_verdict: PrimalityVerdict
    d_verdict: PrimalityVerdict
    log_p: Enclosure
    log_d: Enclosure
    abs_degree: int
    generator_height: Enclosure
    p_bracket: Optional[Tuple[int, int]] = None

    @property
    def pair(self) -> Tuple[int, int]:
        return self.d, self.p

    @property
    def minimal_polynomial(self) -> IntPolynomial:
        return IntPolynomial.binomial(self.d, self.p)


def _log2_estimate(d: int, params: ConstructionParams) -> float:
    try:
        if params.delta is not None:
            return float(params.delta) * math.log2(d)
        return math.exp(float(params.exponent) * math.log(d)) / math.log(2)
    except OverflowError:
        return math.inf


def _bracket_target(d: int, params: ConstructionParams, bits: int) -> Enclosure:
    if params.delta is not None:
        return pow_at(enclose(d, bits), enclose(params.delta, bits), bits)
    tau = pow_at(enclose(d, bits), enclose(params.exponent, bits), bits)
    return exp_at(tau, bits)


def p_interval(d: int, params: ConstructionParams) -> Tuple[int, int]:
    """Certified integer bracket ``[ceil(x), floor(2x)]`` for level degree d.

    Raises:
        DomainError: If d < 2.
        BitSizeExceeded: If p would exceed ``params.max_p_bits`` bits.
        PrecisionExhausted: If an endpoint cannot be bracketed at max_bits.
    """
    d = int(d)
    if d < 2:
        raise DomainError(f"degree must be at least 2, got {d}")
    estimate = _log2_estimate(d, params)
    if estimate + 1 > params.max_p_bits:
        raise BitSizeExceeded(
            f"p for d={d} needs about {estimate:.0f} bits, cap is {params.max_p_bits}"
        )
    for bits in params.precision.bit_schedule():
        x = _bracket_target(d, params, bits)
        lower = integer_bracket(x)
        upper = integer_bracket(x * 2)
        if isinstance(lower, IntegerBracket) and isinstance(upper, IntegerBracket):
            return lower.ceiling, upper.floor
        logger.debug("bracket for d=%d ambiguous at %d bits", d, bits)
    raise PrecisionExhausted(
        f"bracket endpoints for d={d} unresolved at {params.precision.max_bits} bits",
        params.precision.max_bits,
    )


def next_d(
    prev_d: Optional[int],
    exclusions: AbstractSet[int] = frozenset(),
    first_d: int = 2,
    scan_cap: int = 1_000_000,
    jobs: int = 1,
) -> int:
    """Smallest prime >= 2 * prev_d (or >= first_d) outside ``exclusions``."""
    start = 2 * int(prev_d) if prev_d is not None else int(first_d)
    found = smallest_prime_at_least(start, exclusions, scan_cap=scan_cap, jobs=jobs)
    if found is None:
        raise SearchExhausted(f"no eligible prime in [{start}, {start + scan_cap}]")
    return found


def _choose_p(
    d: int, params: ConstructionParams, exclusions: AbstractSet[int]
) -> Tuple[int, Tuple[int, int]]:
    lo, hi = p_interval(d, params)
    found = find_prime_in_interval(lo, hi, exclusions, jobs=params.scan_jobs)
    if found is None:
        raise IntervalExhausted(lo, hi, d)
    return found, (lo, hi)


def next_p(d: int, params: ConstructionParams, exclusions: AbstractSet[int] = frozenset()) -> int:
    """Smallest prime in ``p_interval(d, params)`` outside ``exclusions``."""
    return _choose_p(d, params, exclusions)[0]


def make_level(
    index: int,
    d: int,
    p: int,
    abs_degree: int,
    policy: PrecisionPolicy,
    bracket: Optional[Tuple[int, int]] = None,
) -> TowerLevel:
    """Attach verdicts and certified logarithms to a chosen pair (d, p)."""
    log_p = log_enc(Enclosure.from_int(p, policy.initial_bits), policy)
    log_d = log_enc(Enclosure.from_int(d, policy.initial_bits), policy)
    return TowerLevel(
        index=index,
        d=d,
        p=p,
        p_verdict=is_prime(p),
        d_verdict=is_prime(d),
        log_p=log_p,
        log_d=log_d,
        abs_degree=abs_degree * d,
        generator_height=log_p / d,
        p_bracket=bracket,
    )


def iter_tower(params: ConstructionParams, limit: Optional[int] = None) -> Iterator[TowerLevel]:
    """Yield tower levels 1..limit (default: the horizon) one at a time."""
    limit = params.horizon if limit is None else int(limit)
    used: Set[int] = set()
    prev_d: Optional[int] = None
    abs_degree = 1
    for index in range(1, limit + 1):
        try:
            d = next_d(
                prev_d,
                used,
                first_d=params.first_d,
                scan_cap=params.d_scan_cap,
                jobs=params.scan_jobs,
            )
            used.add(d)
            p, bracket = _choose_p(d, params, used)
            used.add(p)
            level = make_level(index, d, p, abs_degree, params.precision, bracket)
        except HeightTowerError as e:
            if e.level is None:
                e.level = index
            raise
        logger.info("level %d: d=%d, p has %d bits", index, d, p.bit_length())
        abs_degree = level.abs_degree
        prev_d = d
        yield level


def build_tower(params: ConstructionParams) -> List[TowerLevel]:
    """All levels up to ``params.horizon``."""
    return list(iter_tower(params))


def check_admissible(levels: Sequence[TowerLevel], params: ConstructionParams) -> List[str]:
    """Re-verify a tower against the construction rules.

    Bracket membership is recomputed at an escalated precision. Returns a
    list of human-readable violations; an empty list means admissible.
    """
    violations: List[str] = []
    strict = params.with_precision(params.precision.escalated())
    seen = {}
    product = 1
    for position, level in enumerate(levels, start=1):
        tag = f"level {level.index}"
        if level.index != position:
            violations.append(f"{tag}: expected index {position}")
        for name, value in (("d", level.d), ("p", level.p)):
            if not is_prime(value).is_prime:
                violations.append(f"{tag}: {name}={value} is not prime")
            elif value in seen:
                violations.append(f"{tag}: {name}={value} already used at level {seen[value]}")
            else:
                seen[value] = level.index
        if position > 1 and level.d < 2 * levels[position - 2].d:
            violations.append(f"{tag}: d={level.d} < 2 * {levels[position - 2].d}")
        try:
            lo, hi = p_interval(level.d, strict)
            if not lo <= level.p <= hi:
                violations.append(f"{tag}: p={level.p} outside bracket [{lo}, {hi}]")
        except HeightTowerError as e:
            violations.append(f"{tag}: bracket not certified ({e.message})")
        if level.d >= 2 and is_prime(level.p).is_prime:
            if not eisenstein_check(level.minimal_polynomial, level.p):
                violations.append(f"{tag}: x^{level.d} - {level.p} is not Eisenstein at p")
        product *= level.d
        if level.abs_degree != product:
            violations.append(f"{tag}: abs_degree {level.abs_degree} != {product}")
    return violations
