"""Integer polynomials: parsing, rendering and squarefree decomposition."""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from src.errors import DomainError

_TERM = re.compile(r"([+-]?)(\d+)?(\*)?(?:x(?:\^(\d+))?)?")
_SPLIT = re.compile(r"[+-]?[^+-]+")

RationalPoly = Tuple[Fraction, ...]


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, stored lowest degree first."""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DomainError("the zero polynomial is not allowed")
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def binomial(cls, d: int, p: int) -> "IntPolynomial":
        """The radical minimal polynomial ``x^d - p``."""
        if d < 1:
            raise DomainError(f"degree must be positive, got {d}")
        return cls((-int(p),) + (0,) * (int(d) - 1) + (1,))

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Parse ``"c0,c1,...,cd"`` or a human form such as ``"x^3-2"``."""
        if not isinstance(text, str) or not text.strip():
            raise DomainError("empty polynomial text")
        compact = re.sub(r"\s+", "", text)
        if "x" in compact:
            return cls._parse_human(compact)
        try:
            return cls(tuple(int(part) for part in compact.split(",")))
        except ValueError as e:
            raise DomainError(f"malformed coefficient list: {text!r}") from e

    @classmethod
    def _parse_human(cls, text: str) -> "IntPolynomial":
        terms = _SPLIT.findall(text)
        if "".join(terms) != text:
            raise DomainError(f"malformed polynomial: {text!r}")
        coeffs = {}
        for term in terms:
            match = _TERM.fullmatch(term)
            has_x = "x" in term
            if match is None or (match.group(2) is None and not has_x):
                raise DomainError(f"malformed term {term!r} in {text!r}")
            sign, digits, star, power = match.groups()
            if star and (digits is None or not has_x):
                raise DomainError(f"malformed term {term!r} in {text!r}")
            value = int(digits) if digits is not None else 1
            if sign == "-":
                value = -value
            exponent = (int(power) if power is not None else 1) if has_x else 0
            coeffs[exponent] = coeffs.get(exponent, 0) + value
        degree = max(coeffs)
        return cls(tuple(coeffs.get(k, 0) for k in range(degree + 1)))

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def constant(self) -> int:
        return self.coefficients[0]

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    @property
    def content(self) -> int:
        return reduce(gcd, self.coefficients)

    def evaluate(self, x):
        """Horner evaluation at any value supporting ``*`` and ``+``."""
        result = 0
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def descending(self) -> List[int]:
        return list(reversed(self.coefficients))

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                monomial = "x" if k == 1 else f"x^{k}"
                body = monomial if mag == 1 else f"{mag}*{monomial}"
            if not parts:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f"{sign}{body}")
        return "".join(parts)

    # factorization helpers

    def squarefree_decomposition(self) -> List[Tuple["IntPolynomial", int]]:
        """Yun's algorithm over the rationals.

        Returns:
            ``[(g_k, k), ...]`` with each g_k a primitive integer polynomial
            of positive degree, squarefree and pairwise coprime, whose roots
            are exactly the roots of self of multiplicity k.
        """
        f = tuple(Fraction(c) for c in self.coefficients)
        if len(f) == 1:
            return []
        df = _derivative(f)
        a0 = _gcd(f, df)
        b = _divexact(f, a0)
        c = _divexact(df, a0)
        dpoly = _sub(c, _derivative(b))
        result = []
        k = 1
        while len(b) > 1:
            a = _gcd(b, dpoly)
            b = _divexact(b, a)
            c = _divexact(dpoly, a)
            dpoly = _sub(c, _derivative(b))
            if len(a) > 1:
                result.append((_primitive(a), k))
            k += 1
        return result


# rational polynomial kernels on ascending tuples


def _trim(f: Sequence[Fraction]) -> RationalPoly:
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return tuple(f) if f else (Fraction(0),)


def _is_zero(f: RationalPoly) -> bool:
    return len(f) == 1 and f[0] == 0


def _derivative(f: RationalPoly) -> RationalPoly:
    return _trim([k * f[k] for k in range(1, len(f))])


def _sub(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    n = max(len(f), len(g))
    return _trim(
        [(f[k] if k < len(f) else 0) - (g[k] if k < len(g) else 0) for k in range(n)]
    )


def _divmod(f: RationalPoly, g: RationalPoly) -> Tuple[RationalPoly, RationalPoly]:
    rem = list(f)
    quot = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    lead = g[-1]
    while len(rem) >= len(g) and not _is_zero(_trim(rem)):
        shift = len(rem) - len(g)
        factor = rem[-1] / lead
        quot[shift] = factor
        for i, coeff in enumerate(g):
            rem[shift + i] -= factor * coeff
        rem = list(_trim(rem))
    return _trim(quot), _trim(rem)


def _divexact(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    quot, _ = _divmod(f, g)
    return quot


def _monic(f: RationalPoly) -> RationalPoly:
    return tuple(c / f[-1] for c in f)


def _gcd(f: RationalPoly, g: RationalPoly) -> RationalPoly:
    while not _is_zero(g):
        f, g = g, _divmod(f, g)[1]
    return _monic(f)


def _primitive(f: RationalPoly) -> IntPolynomial:
    scale = reduce(lcm, (c.denominator for c in f))
    ints = [int(c * scale) for c in f]
    content = reduce(gcd, ints)
    if ints[-1] < 0:
        content = -content
    return IntPolynomial(tuple(c // content for c in ints))
