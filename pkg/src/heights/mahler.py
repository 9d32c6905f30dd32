"""Certified Mahler measure of integer polynomials.

Roots of each squarefree factor are approximated with mpmath ``polyroots``
and polished by Newton steps, then certified with Weierstrass inclusion
disks: with ``W_i = g(z_i) / (lead * prod_{j != i} (z_i - z_j))`` the
disks ``|z - z_i| <= n |W_i|`` cover every root of g, and a connected
group of m disks holds exactly m roots. All disk arithmetic runs on
:class:`Enclosure` boxes, so only the root approximations are heuristic.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2
from typing import List, Optional

from mpmath import MPContext, libmp

from src.errors import DomainError
from src.heights.polynomial import IntPolynomial
from src.numerics.bigreal import Enclosure, PrecisionPolicy, refine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComplexBox:
    """Rectangle ``re + i*im`` in the complex plane."""

    re: Enclosure
    im: Enclosure

    def __add__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexBox") -> "ComplexBox":
        return ComplexBox(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def add_int(self, c: int) -> "ComplexBox":
        return ComplexBox(self.re + c, self.im)

    def modulus(self) -> Enclosure:
        return (self.re.square() + self.im.square()).sqrt()


def _point_box(root, bits: int) -> ComplexBox:
    if hasattr(root, "imag"):
        re_raw, im_raw = root.real._mpf_, root.imag._mpf_
    else:
        re_raw, im_raw = root._mpf_, libmp.fzero
    return ComplexBox(
        Enclosure.from_raw(re_raw, re_raw, bits), Enclosure.from_raw(im_raw, im_raw, bits)
    )


def _approximate_roots(g: IntPolynomial, bits: int) -> Optional[list]:
    ctx = MPContext()
    ctx.prec = bits
    coeffs = g.descending()
    try:
        roots = ctx.polyroots(coeffs, maxsteps=50 + 10 * g.degree, extraprec=bits)
        for _ in range(ceil(log2(bits)) + 2):
            polished = []
            for z in roots:
                value, slope = ctx.polyval(coeffs, z, derivative=True)
                polished.append(z - value / slope if slope else z)
            roots = polished
    except (ctx.NoConvergence, ZeroDivisionError):
        return None
    return roots


class _Components:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        self.parent[self.find(i)] = self.find(j)


def _root_factor(g: IntPolynomial, bits: int) -> Optional[Enclosure]:
    """Enclosure of prod max(1, |root|) over the roots of squarefree g."""
    if g.degree == 1:
        root = Fraction(-g.constant, g.leading)
        return Enclosure.from_value(max(Fraction(1), abs(root)), bits)

    roots = _approximate_roots(g, bits)
    if roots is None:
        return None
    n = g.degree
    centers = [_point_box(z, bits) for z in roots]

    radii: List[Enclosure] = []
    for i, z in enumerate(centers):
        value = ComplexBox(Enclosure.from_int(0, bits), Enclosure.from_int(0, bits))
        for c in reversed(g.coefficients):
            value = (value * z).add_int(c)
        denom = Enclosure.from_int(abs(g.leading), bits)
        for j, w in enumerate(centers):
            if j != i:
                denom = denom * (z - w).modulus()
        if denom.compare(0) != 1:
            return None
        radii.append(value.modulus() / denom * n)

    components = _Components(n)
    for i in range(n):
        for j in range(i + 1, n):
            gap = (centers[i] - centers[j]).modulus()
            if libmp.mpf_le(gap.lo._mpf_, (radii[i] + radii[j]).hi._mpf_):
                components.union(i, j)

    groups = {}
    for i in range(n):
        groups.setdefault(components.find(i), []).append(i)

    factor = Enclosure.from_int(1, bits)
    for members in groups.values():
        lows = [(centers[i].modulus() - radii[i]) for i in members]
        highs = [(centers[i].modulus() + radii[i]) for i in members]
        lo = min((e.lo for e in lows))
        hi = max((e.hi for e in highs))
        span = Enclosure(lo, hi, bits).max_with(1)
        lower = Enclosure(span.lo, span.lo, bits) ** len(members)
        upper = Enclosure(span.hi, span.hi, bits) ** len(members)
        factor = factor * Enclosure.hull(lower, upper)
    return factor


def mahler_measure_at(f: IntPolynomial, bits: int) -> Optional[Enclosure]:
    """One certification attempt at a fixed precision; None to retry."""
    total = Enclosure.from_value(abs(f.leading), bits)
    for g, multiplicity in f.squarefree_decomposition():
        factor = _root_factor(g, bits)
        if factor is None:
            logger.debug("root disks for %s not separated at %d bits", g, bits)
            return None
        total = total * factor**multiplicity
    return total


def mahler_measure(f: IntPolynomial, policy: Optional[PrecisionPolicy] = None) -> Enclosure:
    """Sound enclosure of ``M(f) = |lead f| * prod max(1, |root|)``.

    Args:
        f: Integer polynomial of degree at least 1.
        policy: Precision policy; width is measured relative to M(f).

    Returns:
        Enclosure of the Mahler measure.

    Raises:
        DomainError: If f is constant.
        PrecisionExhausted: If the root disks cannot be tightened enough.
    """
    if f.degree < 1:
        raise DomainError("Mahler measure needs a polynomial of degree >= 1")
    policy = policy or PrecisionPolicy()
    return refine(lambda bits: mahler_measure_at(f, bits), policy, relative=True, what="mahler")
