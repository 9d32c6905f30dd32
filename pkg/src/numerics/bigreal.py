"""Certified arbitrary-precision real arithmetic.

Every real quantity in heighttower is carried as an :class:`Enclosure`, a
closed interval ``[lo, hi]`` whose endpoints are binary floats from
``mpmath.libmp``. Each elementary step is evaluated twice, once rounded
toward -inf for the lower endpoint and once toward +inf for the upper one,
so the true value of every computed quantity lies inside its enclosure.

Transcendental endpoints (exp, log) are evaluated with guard bits and then
pushed outward by a relative margin of ``2**-bits``; the libm error of
mpmath at the guarded precision is a few ulps, far inside that margin.

All functions are pure: they never touch the global ``mpmath.mp`` context.
"""

import logging
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from functools import cmp_to_key
from math import ceil, log10
from typing import Callable, Iterator, Optional, Tuple, Union

from mpmath import libmp, mp
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import DomainError, PrecisionExhausted

logger = logging.getLogger(__name__)

FLOOR = libmp.round_floor
CEILING = libmp.round_ceiling
GUARD_BITS = 16
MIN_BITS = 8

RealLike = Union[int, Fraction, Decimal, float, str]


class PrecisionPolicy(BaseModel):
    """How hard the arithmetic may work to meet a width target.

    Args:
        initial_bits: Working precision of the first attempt.
        max_bits: Precision ceiling; exceeding it raises PrecisionExhausted.
        target_width: Width goal, relative to magnitude for exp/pow results
            and absolute for logarithms.
    """

    model_config = ConfigDict(frozen=True)

    initial_bits: int = Field(64, gt=0)
    max_bits: int = Field(65536, gt=0)
    target_width: float = Field(1e-12, gt=0)

    @model_validator(mode="after")
    def _initial_within_max(self) -> "PrecisionPolicy":
        if self.initial_bits > self.max_bits:
            raise ValueError(
                f"initial_bits={self.initial_bits} exceeds max_bits={self.max_bits}"
            )
        return self

    def bit_schedule(self) -> Iterator[int]:
        """Yield initial_bits, doubling until max_bits is reached."""
        bits = self.initial_bits
        while True:
            yield bits
            if bits >= self.max_bits:
                return
            bits = min(2 * bits, self.max_bits)

    def escalated(self) -> "PrecisionPolicy":
        """A stricter policy for one retry after an indeterminate comparison."""
        return PrecisionPolicy(
            initial_bits=min(2 * self.initial_bits, self.max_bits),
            max_bits=self.max_bits,
            target_width=self.target_width * 2.0**-32,
        )


def as_fraction(value: RealLike) -> Fraction:
    """Convert a real-like input to an exact rational.

    Floats go through their shortest repr, so ``0.9`` becomes 9/10.
    """
    try:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise DomainError(f"not a real number: {value!r}")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, Decimal):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(repr(value))
        if isinstance(value, str):
            return Fraction(value.strip())
    except (ValueError, ZeroDivisionError, OverflowError) as e:
        raise DomainError(f"not a finite real number: {value!r}") from e
    raise DomainError(f"unsupported real value type: {type(value).__name__}")


def _is_special(raw: tuple) -> bool:
    # libmp encodes inf and nan with a zero mantissa and nonzero exponent
    return not raw[1] and raw[2] != 0


def _raw_fraction(raw: tuple) -> Fraction:
    num, den = libmp.to_rational(raw)
    return Fraction(int(num), int(den))


def _raw_min(values) -> tuple:
    return min(values, key=cmp_to_key(libmp.mpf_cmp))


def _raw_max(values) -> tuple:
    return max(values, key=cmp_to_key(libmp.mpf_cmp))


def _raw_from_fraction(q: Fraction, bits: int, rnd: str) -> tuple:
    if q.denominator == 1:
        return libmp.from_int(q.numerator)
    return libmp.from_rational(q.numerator, q.denominator, bits, rnd)


def _raw_to_decimal(raw: tuple, digits: int, rounding: str) -> str:
    q = _raw_fraction(raw)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        value = Decimal(q.numerator) / Decimal(q.denominator)
    return str(value)


def _widen_down(raw: tuple, bits: int) -> tuple:
    margin = libmp.mpf_shift(libmp.mpf_abs(raw), -bits)
    return libmp.mpf_sub(raw, margin, bits + GUARD_BITS, FLOOR)


def _widen_up(raw: tuple, bits: int) -> tuple:
    margin = libmp.mpf_shift(libmp.mpf_abs(raw), -bits)
    return libmp.mpf_add(raw, margin, bits + GUARD_BITS, CEILING)


@dataclass(frozen=True)
class Enclosure:
    """A rigorous real interval ``[lo, hi]``.

    Endpoints are ``mpmath.mpf`` values; ``precision_bits`` records the
    working precision the enclosure was produced at and is reused as the
    rounding precision of arithmetic on it.
    """

    lo: object
    hi: object
    precision_bits: int

    def __post_init__(self):
        lo, hi = self.lo._mpf_, self.hi._mpf_
        if _is_special(lo) or _is_special(hi):
            raise DomainError("enclosure endpoints must be finite")
        if libmp.mpf_gt(lo, hi):
            raise DomainError("enclosure lower endpoint exceeds upper endpoint")

    # construction

    @classmethod
    def from_raw(cls, lo: tuple, hi: tuple, bits: int) -> "Enclosure":
        return cls(mp.make_mpf(lo), mp.make_mpf(hi), max(bits, MIN_BITS))

    @classmethod
    def from_value(cls, value: RealLike, bits: int = 64) -> "Enclosure":
        """Tightest enclosure of an exact real at the given precision."""
        q = as_fraction(value)
        return cls.from_raw(
            _raw_from_fraction(q, bits, FLOOR), _raw_from_fraction(q, bits, CEILING), bits
        )

    @classmethod
    def from_int(cls, n: int, bits: int = 64) -> "Enclosure":
        raw = libmp.from_int(int(n))
        return cls.from_raw(raw, raw, bits)

    @classmethod
    def hull(cls, lo: "Enclosure", hi: "Enclosure") -> "Enclosure":
        return cls.from_raw(lo._lo, hi._hi, max(lo.precision_bits, hi.precision_bits))

    # inspection

    @property
    def _lo(self) -> tuple:
        return self.lo._mpf_

    @property
    def _hi(self) -> tuple:
        return self.hi._mpf_

    @property
    def width(self):
        return mp.make_mpf(libmp.mpf_sub(self._hi, self._lo, 53, CEILING))

    @property
    def magnitude(self):
        return mp.make_mpf(_raw_max([libmp.mpf_abs(self._lo), libmp.mpf_abs(self._hi)]))

    @property
    def is_point(self) -> bool:
        return self._lo == self._hi

    @property
    def mid(self) -> float:
        total = libmp.mpf_add(self._lo, self._hi, 53)
        return libmp.to_float(libmp.mpf_shift(total, -1))

    def __float__(self) -> float:
        return self.mid

    def exact_value(self) -> Optional[Fraction]:
        """The rational value of a degenerate enclosure, else None."""
        return _raw_fraction(self._lo) if self.is_point else None

    def contains(self, value: Union["Enclosure", RealLike]) -> bool:
        if isinstance(value, Enclosure):
            return libmp.mpf_le(self._lo, value._lo) and libmp.mpf_le(value._hi, self._hi)
        q = as_fraction(value)
        return _raw_fraction(self._lo) <= q <= _raw_fraction(self._hi)

    def overlaps(self, other: "Enclosure") -> bool:
        return libmp.mpf_le(self._lo, other._hi) and libmp.mpf_le(other._lo, self._hi)

    def compare(self, other: Union["Enclosure", RealLike]) -> Optional[int]:
        """-1 if certainly below ``other``, 1 if certainly above, None if they overlap."""
        other = self._coerce(other)
        if libmp.mpf_lt(self._hi, other._lo):
            return -1
        if libmp.mpf_gt(self._lo, other._hi):
            return 1
        return None

    def to_decimal_strings(self, digits: Optional[int] = None) -> Tuple[str, str]:
        """Endpoints as decimal strings, rounded outward."""
        if digits is None:
            digits = ceil(self.precision_bits * log10(2)) + 2
        return (
            _raw_to_decimal(self._lo, digits, ROUND_FLOOR),
            _raw_to_decimal(self._hi, digits, ROUND_CEILING),
        )

    def __repr__(self) -> str:
        lo, hi = self.to_decimal_strings(20)
        return f"Enclosure([{lo}, {hi}], bits={self.precision_bits})"

    # arithmetic

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.from_value(other, self.precision_bits)

    def _bits(self, other: "Enclosure") -> int:
        return max(self.precision_bits, other.precision_bits)

    def __neg__(self) -> "Enclosure":
        return Enclosure.from_raw(
            libmp.mpf_neg(self._hi), libmp.mpf_neg(self._lo), self.precision_bits
        )

    def __add__(self, other) -> "Enclosure":
        other = self._coerce(other)
        bits = self._bits(other)
        return Enclosure.from_raw(
            libmp.mpf_add(self._lo, other._lo, bits, FLOOR),
            libmp.mpf_add(self._hi, other._hi, bits, CEILING),
            bits,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "Enclosure":
        other = self._coerce(other)
        bits = self._bits(other)
        return Enclosure.from_raw(
            libmp.mpf_sub(self._lo, other._hi, bits, FLOOR),
            libmp.mpf_sub(self._hi, other._lo, bits, CEILING),
            bits,
        )

    def __rsub__(self, other) -> "Enclosure":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Enclosure":
        other = self._coerce(other)
        bits = self._bits(other)
        pairs = [(a, b) for a in (self._lo, self._hi) for b in (other._lo, other._hi)]
        return Enclosure.from_raw(
            _raw_min([libmp.mpf_mul(a, b, bits, FLOOR) for a, b in pairs]),
            _raw_max([libmp.mpf_mul(a, b, bits, CEILING) for a, b in pairs]),
            bits,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Enclosure":
        other = self._coerce(other)
        if libmp.mpf_le(other._lo, libmp.fzero) and libmp.mpf_ge(other._hi, libmp.fzero):
            raise DomainError("division by an enclosure containing zero")
        bits = self._bits(other)
        pairs = [(a, b) for a in (self._lo, self._hi) for b in (other._lo, other._hi)]
        return Enclosure.from_raw(
            _raw_min([libmp.mpf_div(a, b, bits, FLOOR) for a, b in pairs]),
            _raw_max([libmp.mpf_div(a, b, bits, CEILING) for a, b in pairs]),
            bits,
        )

    def __rtruediv__(self, other) -> "Enclosure":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "Enclosure":
        """Nonnegative integer power of a nonnegative enclosure."""
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers are supported")
        if libmp.mpf_lt(self._lo, libmp.fzero):
            raise DomainError("integer powers need a nonnegative enclosure")
        result = Enclosure.from_int(1, self.precision_bits)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def square(self) -> "Enclosure":
        """``x**2`` over the enclosure; tight when it straddles zero."""
        bits = self.precision_bits
        if libmp.mpf_ge(self._lo, libmp.fzero):
            return self * self
        if libmp.mpf_le(self._hi, libmp.fzero):
            return (-self) * (-self)
        top = _raw_max([libmp.mpf_abs(self._lo), libmp.mpf_abs(self._hi)])
        return Enclosure.from_raw(libmp.fzero, libmp.mpf_mul(top, top, bits, CEILING), bits)

    def sqrt(self) -> "Enclosure":
        """Square root, with negative parts of the enclosure clamped to 0."""
        if libmp.mpf_lt(self._hi, libmp.fzero):
            raise DomainError("square root of a negative enclosure")
        bits = self.precision_bits
        lo = _raw_max([self._lo, libmp.fzero])
        return Enclosure.from_raw(
            libmp.mpf_sqrt(lo, bits, FLOOR), libmp.mpf_sqrt(self._hi, bits, CEILING), bits
        )

    def max_with(self, value: int) -> "Enclosure":
        """Pointwise ``max(x, value)`` over the enclosure."""
        floor = libmp.from_int(value)
        return Enclosure.from_raw(
            _raw_max([self._lo, floor]), _raw_max([self._hi, floor]), self.precision_bits
        )


def enclose(value: Union[Enclosure, RealLike], bits: int) -> Enclosure:
    """Pass enclosures through; enclose exact reals at ``bits``."""
    if isinstance(value, Enclosure):
        return value
    return Enclosure.from_value(value, bits)


# fixed-precision kernels


def exp_at(x: Enclosure, bits: int) -> Enclosure:
    """Sound enclosure of exp over ``x`` at a fixed working precision."""
    bits = max(bits, MIN_BITS)
    wp = bits + GUARD_BITS

    def endpoint(raw, rnd, widen):
        if raw == libmp.fzero:
            return libmp.fone
        return widen(libmp.mpf_exp(raw, wp, rnd), bits)

    return Enclosure.from_raw(
        endpoint(x._lo, FLOOR, _widen_down), endpoint(x._hi, CEILING, _widen_up), bits
    )


def log_at(x: Enclosure, bits: int) -> Enclosure:
    """Sound enclosure of the natural logarithm over ``x``."""
    if libmp.mpf_le(x._lo, libmp.fzero):
        raise DomainError("logarithm needs a strictly positive enclosure")
    bits = max(bits, MIN_BITS)
    wp = bits + GUARD_BITS

    def endpoint(raw, rnd, widen):
        if raw == libmp.fone:
            return libmp.fzero
        return widen(libmp.mpf_log(raw, wp, rnd), bits)

    return Enclosure.from_raw(
        endpoint(x._lo, FLOOR, _widen_down), endpoint(x._hi, CEILING, _widen_up), bits
    )


def _integer_power(base: Enclosure, n: int, bits: int) -> Enclosure:
    exact = base.exact_value()
    if exact is not None:
        return Enclosure.from_value(exact**n, bits)
    if n >= 0:
        return base**n
    return 1 / (base ** (-n))


def pow_at(base: Enclosure, exponent: Enclosure, bits: int) -> Enclosure:
    """Sound enclosure of ``b**t`` for b in ``base`` and t in ``exponent``."""
    if libmp.mpf_le(base._lo, libmp.fzero):
        raise DomainError("real powers need a strictly positive base")
    bits = max(bits, MIN_BITS)
    t = exponent.exact_value()
    if t is not None and t.denominator == 1:
        return _integer_power(base, t.numerator, bits)
    return exp_at(exponent * log_at(base, bits), bits)


# adaptive drivers


def _tolerance(result: Enclosure, policy: PrecisionPolicy, relative: bool) -> tuple:
    target = _raw_from_fraction(Fraction(policy.target_width), 53, FLOOR)
    if not relative:
        return target
    scale = result.magnitude._mpf_
    if scale == libmp.fzero:
        return target
    return libmp.mpf_mul(target, scale, 53, FLOOR)


def refine(
    evaluate: Callable[[int], Optional[Enclosure]],
    policy: PrecisionPolicy,
    relative: bool = True,
    what: str = "value",
) -> Enclosure:
    """Re-evaluate at doubling precision until the width target is met.

    ``evaluate(bits)`` returns an enclosure, or None when it could not
    certify anything at that precision. The loop also stops once doubling
    the precision shrinks the width by no more than the target: what is
    left is width inherited from the inputs, not rounding.
    """
    previous_width = None
    for bits in policy.bit_schedule():
        result = evaluate(bits)
        if result is None:
            logger.debug("%s: nothing certified at %d bits", what, bits)
            continue
        width = result.width._mpf_
        tolerance = _tolerance(result, policy, relative)
        if libmp.mpf_le(width, tolerance):
            return result
        if previous_width is not None:
            gain = libmp.mpf_sub(previous_width, width, 53, CEILING)
            if libmp.mpf_le(gain, tolerance):
                return result
        previous_width = width
        logger.debug("%s: width target missed at %d bits, escalating", what, bits)
    raise PrecisionExhausted(
        f"{what}: width target {policy.target_width} unreachable at {policy.max_bits} bits",
        policy.max_bits,
    )


def exp_enc(x: Enclosure, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """Enclosure of ``e**t`` for every t in ``x``, width relative to the result.

    The width target applies to rounding error only. When ``x`` is itself
    wide the result inherits that spread and may stay above the target;
    it is returned rather than raising PrecisionExhausted.
    """
    policy = policy or PrecisionPolicy()
    return refine(lambda bits: exp_at(x, bits), policy, relative=True, what="exp")


def log_enc(x: Enclosure, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """Enclosure of the natural logarithm over ``x``, absolute width target.

    As with :func:`exp_enc`, width carried in from ``x`` is kept: a wide
    input yields a wide result instead of PrecisionExhausted.
    """
    policy = policy or PrecisionPolicy()
    if libmp.mpf_le(x._lo, libmp.fzero):
        raise DomainError("logarithm needs a strictly positive enclosure")
    return refine(lambda bits: log_at(x, bits), policy, relative=False, what="log")


def pow_enc(
    base: Union[Enclosure, RealLike],
    exponent: Union[Enclosure, RealLike],
    policy: Optional[PrecisionPolicy] = None,
) -> Enclosure:
    """Enclosure of ``b**t`` computed as ``exp(t * log b)``.

    Exact (non-Enclosure) arguments are re-enclosed at every precision step,
    so they never limit the achievable width.
    Enclosure arguments keep their own width, which may leave the result
    above the target.
    """
    policy = policy or PrecisionPolicy()
    first = enclose(base, policy.initial_bits)
    if libmp.mpf_le(first._lo, libmp.fzero):
        raise DomainError("real powers need a strictly positive base")
    return refine(
        lambda bits: pow_at(enclose(base, bits), enclose(exponent, bits), bits),
        policy,
        relative=True,
        what="pow",
    )


# integer bracketing


@dataclass(frozen=True)
class IntegerBracket:
    """Ceiling and floor shared by every point of an enclosure."""

    ceiling: int
    floor: int


@dataclass(frozen=True)
class NeedsMorePrecision:
    """The enclosure straddles an integer; refine it and try again."""

    enclosure: Enclosure


def integer_bracket(x: Enclosure) -> Union[IntegerBracket, NeedsMorePrecision]:
    """Return ``(ceil, floor)`` of ``x`` when they are unambiguous."""
    ceil_lo = int(libmp.to_int(x._lo, CEILING))
    ceil_hi = int(libmp.to_int(x._hi, CEILING))
    floor_lo = int(libmp.to_int(x._lo, FLOOR))
    floor_hi = int(libmp.to_int(x._hi, FLOOR))
    if ceil_lo != ceil_hi or floor_lo != floor_hi:
        return NeedsMorePrecision(x)
    return IntegerBracket(ceiling=ceil_lo, floor=floor_lo)
