"""Acceptance tests: regressions against independent oracles, timing and determinism.

Oracles used here are deliberately naive: plain trial division and a
sieve for primality, and a fresh mpmath context at several hundred bits
for the real-valued brackets.
"""

import io
import math
import random
import sys
import time
import unittest
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from pathlib import Path

from mpmath import MPContext, libmp

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from src.certify.metrics import CheckOutcome, compute_metrics
from src.certify.report import audit_onsets
from src.certify.witness import witness_index
from src.heights.mahler import mahler_measure
from src.heights.polynomial import IntPolynomial
from src.heights.weil import radical_height, weil_height_from_minpoly
from src.main import main
from src.numerics.bigreal import (
    Enclosure,
    IntegerBracket,
    exp_enc,
    integer_bracket,
    log_enc,
    pow_enc,
)
from src.primes.primality import is_prime
from src.tower.construction import build_tower
from src.tower.params import ConstructionParams


def trial_division(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def sieve(limit: int) -> bytearray:
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return flags


def context(bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = bits
    return ctx


def as_exact(value) -> Fraction:
    num, den = libmp.to_rational(value._mpf_)
    return Fraction(int(num), int(den))


class TestConstructionRegression(unittest.TestCase):
    """Delta and general towers re-verified by independent oracles."""

    def test_delta_tower(self):
        start = time.perf_counter()
        levels = build_tower(ConstructionParams.build(gamma=1, delta=2, horizon=5))
        elapsed = time.perf_counter() - start
        self.assertLess(elapsed, 5.0)
        self.assertEqual(
            [level.pair for level in levels][:4], [(2, 5), (7, 53), (17, 293), (37, 1373)]
        )
        self.assertEqual(levels[4].d, 79)
        used = set()
        previous_d = 1
        for level in levels:
            d, p = level.pair
            self.assertTrue(trial_division(d) and trial_division(p))
            self.assertTrue(d * d <= p <= 2 * d * d)
            # smallest eligible choices
            self.assertFalse(any(trial_division(q) and q not in used for q in range(2 * previous_d, d)))
            used.add(d)
            self.assertFalse(any(trial_division(q) and q not in used for q in range(d * d, p)))
            used.add(p)
            previous_d = d
        self.assertEqual(levels[4].p, 6247)

    def test_general_tower(self):
        start = time.perf_counter()
        levels = build_tower(ConstructionParams.build(gamma=1, epsilon=1, horizon=3))
        self.assertLess(time.perf_counter() - start, 5.0)
        self.assertEqual([level.pair for level in levels], [(2, 5), (7, 17), (19, 79)])
        ctx = context(512)
        for level in levels:
            x = ctx.exp(ctx.sqrt(level.d))
            self.assertTrue(x < level.p < 2 * x, level.pair)
            self.assertTrue(trial_division(level.p))


class TestPrimalityAgreement(unittest.TestCase):
    def test_sieve_to_one_million(self):
        flags = sieve(10**6)
        mismatches = [n for n in range(10**6 + 1) if is_prime(n).is_prime != bool(flags[n])]
        self.assertEqual(mismatches, [])


class TestHeightOracles(unittest.TestCase):
    """Closed-form heights against the Mahler-measure route."""

    def test_radicals_against_minpoly(self):
        for p in (q for q in range(2, 100) if trial_division(q)):
            for d in (2, 3, 5, 7):
                with self.subTest(p=p, d=d):
                    closed = radical_height(p, d)
                    generic = weil_height_from_minpoly(IntPolynomial.binomial(d, p))
                    self.assertTrue(closed.overlaps(generic))
                    self.assertLess(float(closed.width), 1e-10)
                    self.assertLess(float(generic.width), 1e-10)

    def test_mahler_regressions(self):
        self.assertTrue(mahler_measure(IntPolynomial.parse("x^2-2")).contains(2))
        lehmer = IntPolynomial.parse("x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1")
        ctx = context(200)
        reference = max(abs(z) for z in ctx.polyroots(lehmer.descending(), maxsteps=200, extraprec=200))
        m = mahler_measure(lehmer)
        self.assertLess(abs(m.mid - float(reference)), 1e-9)


class TestChainAndWitness(unittest.TestCase):
    """Per-level inequalities and the witness sequence."""

    def test_chain_for_all_gammas(self):
        towers = [
            ConstructionParams.build(gamma=1, delta=2, horizon=5),
            ConstructionParams.build(gamma=1, epsilon=1, horizon=3),
        ]
        for base in towers:
            levels = build_tower(base)
            for gamma in ("0.25", "0.5", "1"):
                params = ConstructionParams.build(gamma=gamma, epsilon=1, horizon=len(levels))
                for metrics in compute_metrics(levels, params):
                    with self.subTest(tower=base.variant, gamma=gamma, level=metrics.index):
                        self.assertIs(metrics.checks["chain"], CheckOutcome.HOLDS)
                        self.assertGreaterEqual(metrics.chain_lhs.lo, metrics.f_floor.hi)

    def test_witness_sequence(self):
        params = ConstructionParams.build(gamma=1, delta=2, epsilon="0.9", horizon=4)
        levels = build_tower(params)
        metrics = compute_metrics(levels, params)
        audit = audit_onsets(levels, metrics, params)
        self.assertEqual(audit.b_decreasing_from, 1)
        self.assertEqual(audit.a_monotone_from, 1)
        self.assertEqual(witness_index(params, "0.5").index, 3)


class TestFeasibility(unittest.TestCase):
    def test_small_gamma_horizon_eight(self):
        start = time.perf_counter()
        params = ConstructionParams.build(gamma="0.5", epsilon="0.5", horizon=8)
        levels = build_tower(params)
        self.assertLess(time.perf_counter() - start, 120.0)
        self.assertEqual([level.d for level in levels], [2, 5, 11, 23, 47, 97, 197, 397])
        for level in levels:
            self.assertTrue(level.p_verdict.is_prime)
            lo, hi = level.p_bracket
            self.assertTrue(lo <= level.p <= hi)
        self.assertTrue(30 <= len(str(levels[-1].p)) <= 50)


class TestSoundness(unittest.TestCase):
    """1000 seeded exp/log/pow checks against 4x precision references."""

    def check_bracket(self, x: Enclosure) -> None:
        result = integer_bracket(x)
        lo, hi = as_exact(x.lo), as_exact(x.hi)
        if isinstance(result, IntegerBracket):
            self.assertTrue(result.ceiling - 1 < lo and hi <= result.ceiling)
            self.assertTrue(result.floor <= lo and hi < result.floor + 1)
        else:
            self.assertTrue(math.floor(lo) != math.floor(hi) or math.ceil(lo) != math.ceil(hi))

    def test_randomized(self):
        rng = random.Random(1000)
        violations = []
        for i in range(1000):
            kind = i % 3
            q = Fraction(rng.randint(-5000, 5000), rng.randint(1, 1000))
            if kind == 0:
                result = exp_enc(Enclosure.from_value(q))
                ctx = context(4 * result.precision_bits)
                expected = ctx.exp(ctx.mpf(q.numerator) / q.denominator)
            elif kind == 1:
                q = abs(q) + Fraction(1, 1000)
                result = log_enc(Enclosure.from_value(q))
                ctx = context(4 * result.precision_bits)
                expected = ctx.log(ctx.mpf(q.numerator) / q.denominator)
            else:
                base = abs(q) + Fraction(1, 7)
                t = Fraction(rng.randint(-40, 40), rng.randint(1, 13))
                result = pow_enc(base, t)
                ctx = context(4 * result.precision_bits)
                expected = ctx.power(ctx.mpf(base.numerator) / base.denominator, ctx.mpf(t.numerator) / t.denominator)
            if not (result.lo <= expected <= result.hi):
                violations.append((kind, q))
            self.check_bracket(result)
        self.assertEqual(violations, [])


class TestCliDeterminism(unittest.TestCase):
    """Every acceptance command yields byte-identical payloads twice."""

    COMMANDS = [
        ["certify", "--gamma", "1", "--delta", "2", "--horizon", "3", "--format", "json"],
        ["construct", "--gamma", "1", "--delta", "2", "--horizon", "5"],
        ["construct", "--gamma", "1", "--epsilon", "1", "--horizon", "3", "--format", "csv"],
        ["height", "--p", "5", "--d", "2"],
        ["witness", "--gamma", "1", "--delta", "2", "--epsilon", "0.9", "--eta", "0.5", "--cap", "10"],
        ["measure", "--poly", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"],
    ]

    def run_once(self, argv):
        out = io.StringIO()
        with redirect_stdout(out), redirect_stderr(io.StringIO()):
            code = main(argv)
        return code, out.getvalue().encode("utf-8")

    def test_byte_identical(self):
        for argv in self.COMMANDS:
            with self.subTest(command=" ".join(argv)):
                first = self.run_once(argv)
                second = self.run_once(argv)
                self.assertEqual(first[0], 0)
                self.assertEqual(first, second)


if __name__ == "__main__":
    unittest.main()
