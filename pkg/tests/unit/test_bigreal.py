"""Unit tests for certified real arithmetic.

Reference values come from a private mpmath context running at four
times the working precision of the enclosure under test.
"""

import random
import sys
import unittest
from fractions import Fraction
from pathlib import Path

from mpmath import MPContext, libmp
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from src.errors import DomainError, PrecisionExhausted
from src.numerics.bigreal import (
    Enclosure,
    IntegerBracket,
    NeedsMorePrecision,
    PrecisionPolicy,
    exp_at,
    exp_enc,
    integer_bracket,
    log_at,
    log_enc,
    pow_at,
    pow_enc,
)


def reference_context(bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = 4 * bits
    return ctx


def encloses(enclosure: Enclosure, value) -> bool:
    raw = value._mpf_
    return libmp.mpf_le(enclosure.lo._mpf_, raw) and libmp.mpf_le(raw, enclosure.hi._mpf_)


def rational(ctx: MPContext, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


class TestEnclosure(unittest.TestCase):
    """Construction and interval arithmetic."""

    def test_rejects_inverted_endpoints(self):
        """lo > hi is never a valid enclosure."""
        with self.assertRaises(DomainError):
            Enclosure.from_raw(libmp.from_int(2), libmp.from_int(1), 64)

    def test_exact_integer_is_point(self):
        """Integers are enclosed exactly."""
        e = Enclosure.from_int(12345678901234567890, 64)
        self.assertTrue(e.is_point)
        self.assertEqual(e.exact_value(), 12345678901234567890)

    def test_float_input_uses_decimal_repr(self):
        """0.1 as a float encloses 1/10, not its binary neighbour."""
        e = Enclosure.from_value(0.1, 64)
        self.assertTrue(e.contains(Fraction(1, 10)))

    def test_arithmetic_contains_exact_result(self):
        """+, -, * and / on enclosures of thirds contain the exact rationals."""
        a = Enclosure.from_value(Fraction(1, 3), 64)
        b = Enclosure.from_value(Fraction(2, 7), 64)
        self.assertTrue((a + b).contains(Fraction(13, 21)))
        self.assertTrue((a - b).contains(Fraction(1, 21)))
        self.assertTrue((a * b).contains(Fraction(2, 21)))
        self.assertTrue((a / b).contains(Fraction(7, 6)))
        self.assertTrue((1 - a).contains(Fraction(2, 3)))

    def test_division_by_zero_enclosure(self):
        """Dividing by an enclosure that contains 0 is a domain error."""
        around_zero = Enclosure.from_raw(libmp.from_int(-1), libmp.from_int(1), 64)
        with self.assertRaises(DomainError):
            Enclosure.from_int(1) / around_zero

    def test_compare(self):
        """compare is -1/1 when separated and None when overlapping."""
        a = Enclosure.from_value(Fraction(1, 3), 64)
        self.assertEqual(a.compare(1), -1)
        self.assertEqual(a.compare(0), 1)
        self.assertIsNone(a.compare(a))

    def test_square_straddling_zero(self):
        """The square of [-1, 2] is [0, 4]."""
        e = Enclosure.from_raw(libmp.from_int(-1), libmp.from_int(2), 64).square()
        self.assertEqual(e.exact_value(), None)
        self.assertEqual(e.lo, 0)
        self.assertEqual(e.hi, 4)

    def test_decimal_strings_round_outward(self):
        """Decimal endpoints bracket the binary endpoints."""
        e = Enclosure.from_value(Fraction(1, 3), 64)
        lo, hi = e.to_decimal_strings()
        self.assertLessEqual(Fraction(lo), Fraction(1, 3))
        self.assertGreaterEqual(Fraction(hi), Fraction(1, 3))


class TestPrecisionPolicy(unittest.TestCase):
    """Validation and escalation of the precision policy."""

    def test_defaults(self):
        policy = PrecisionPolicy()
        self.assertEqual(policy.initial_bits, 64)
        self.assertEqual(policy.max_bits, 65536)
        self.assertEqual(policy.target_width, 1e-12)

    def test_initial_above_max_rejected(self):
        with self.assertRaises(ValidationError):
            PrecisionPolicy(initial_bits=128, max_bits=64)

    def test_nonpositive_target_rejected(self):
        with self.assertRaises(ValidationError):
            PrecisionPolicy(target_width=0)

    def test_bit_schedule_doubles_to_cap(self):
        policy = PrecisionPolicy(initial_bits=64, max_bits=300)
        self.assertEqual(list(policy.bit_schedule()), [64, 128, 256, 300])

    def test_escalated_is_stricter(self):
        policy = PrecisionPolicy().escalated()
        self.assertEqual(policy.initial_bits, 128)
        self.assertLess(policy.target_width, 1e-12)


class TestExpLogPow(unittest.TestCase):
    """Known values of the refining operations."""

    def test_exp_of_zero_is_exactly_one(self):
        e = exp_enc(Enclosure.from_int(0))
        self.assertTrue(e.is_point)
        self.assertEqual(e.exact_value(), 1)

    def test_exp_of_one(self):
        e = exp_enc(Enclosure.from_int(1))
        ctx = reference_context(e.precision_bits)
        self.assertTrue(encloses(e, ctx.e))
        self.assertLessEqual(float(e.width), 1e-12 * 2.72)

    def test_exp_of_sqrt_two(self):
        """e^sqrt(2) = 4.113250378782928..., the d=2 lower endpoint."""
        root = pow_enc(2, Fraction(1, 2))
        e = exp_enc(root)
        ctx = reference_context(256)
        self.assertTrue(encloses(e, ctx.exp(ctx.sqrt(2))))
        self.assertAlmostEqual(e.mid, 4.113250378782928, places=12)

    def test_log_of_one_is_zero(self):
        e = log_enc(Enclosure.from_int(1))
        self.assertTrue(e.is_point)
        self.assertEqual(e.exact_value(), 0)

    def test_log_of_five(self):
        e = log_enc(Enclosure.from_int(5))
        ctx = reference_context(e.precision_bits)
        self.assertTrue(encloses(e, ctx.log(5)))
        self.assertAlmostEqual(e.mid, 1.6094379124341003, places=12)

    def test_log_domain(self):
        """An enclosure touching 0 has no logarithm."""
        with self.assertRaises(DomainError):
            log_enc(Enclosure.from_raw(libmp.fzero, libmp.fone, 64))

    def test_pow_identity_exponent_exact(self):
        e = pow_enc(2, 1)
        self.assertEqual(e.exact_value(), 2)

    def test_pow_square_root(self):
        e = pow_enc(2, Fraction(1, 2))
        ctx = reference_context(e.precision_bits)
        self.assertTrue(encloses(e, ctx.sqrt(2)))

    def test_pow_negative_fractional_exponent(self):
        """17^(-1/4) = 0.49247..., used by the b metric."""
        e = pow_enc(17, Fraction(-1, 4))
        ctx = reference_context(e.precision_bits)
        self.assertTrue(encloses(e, ctx.power(17, ctx.mpf(-1) / 4)))
        self.assertAlmostEqual(e.mid, 0.49247, places=4)

    def test_pow_nonpositive_base(self):
        with self.assertRaises(DomainError):
            pow_enc(0, Fraction(1, 2))

    def test_precision_exhausted(self):
        """An unreachable width target raises once max_bits is spent."""
        policy = PrecisionPolicy(initial_bits=8, max_bits=16, target_width=1e-30)
        with self.assertRaises(PrecisionExhausted) as ctx:
            exp_enc(Enclosure.from_int(1), policy)
        self.assertEqual(ctx.exception.max_bits, 16)
        self.assertEqual(ctx.exception.exit_code, 2)


class TestProperties(unittest.TestCase):
    """Soundness, refinement and round-trip properties."""

    def test_randomized_soundness(self):
        """Seeded random rationals: every enclosure contains the 4x reference."""
        rng = random.Random(20240229)
        for _ in range(200):
            q = Fraction(rng.randint(-400, 400), rng.randint(1, 97))
            e = exp_enc(Enclosure.from_value(q, 64))
            ctx = reference_context(e.precision_bits)
            self.assertTrue(encloses(e, ctx.exp(rational(ctx, q))), f"exp({q})")

            positive = Fraction(rng.randint(1, 10**6), rng.randint(1, 997))
            e = log_enc(Enclosure.from_value(positive, 64))
            ctx = reference_context(e.precision_bits)
            self.assertTrue(encloses(e, ctx.log(rational(ctx, positive))), f"log({positive})")

            t = Fraction(rng.randint(-30, 30), rng.randint(1, 11))
            e = pow_enc(positive, t)
            ctx = reference_context(e.precision_bits)
            expected = ctx.power(rational(ctx, positive), rational(ctx, t))
            self.assertTrue(encloses(e, expected), f"{positive}^{t}")

    def test_doubling_precision_never_widens(self):
        x = Enclosure.from_value(Fraction(1, 3), 64)
        self.assertLessEqual(exp_at(x, 128).width, exp_at(x, 64).width)

    def test_doubling_precision_never_widens_log_and_pow(self):
        seven = Enclosure.from_int(7)
        three_quarters = Enclosure.from_value(Fraction(3, 4))
        schedule = (64, 128, 256, 512)
        cases = {
            "log": lambda bits: log_at(seven, bits),
            "log of 1/3": lambda bits: log_at(Enclosure.from_value(Fraction(1, 3), 512), bits),
            "pow": lambda bits: pow_at(seven, three_quarters, bits),
            "pow negative": lambda bits: pow_at(Enclosure.from_int(1373), -three_quarters, bits),
        }
        for name, evaluate in cases.items():
            widths = [evaluate(bits).width for bits in schedule]
            for coarse, fine in zip(widths, widths[1:]):
                with self.subTest(case=name):
                    self.assertLessEqual(fine, coarse)

    def test_log_exp_round_trip(self):
        """log(exp(x)) encloses every point of x."""
        x = Enclosure.from_value(Fraction(7, 5), 64)
        back = log_enc(exp_enc(x))
        self.assertTrue(back.contains(x))

    def test_round_trips_on_wide_enclosures(self):
        x = Enclosure.hull(Enclosure.from_value(Fraction(1, 3)), Enclosure.from_value(2))
        back = log_enc(exp_enc(x))
        self.assertTrue(back.contains(x))
        self.assertGreater(float(back.width), 1.6)

        y = Enclosure.hull(Enclosure.from_int(2), Enclosure.from_int(5))
        cubed = pow_enc(y, 3)
        self.assertTrue(cubed.contains(8) and cubed.contains(125))
        self.assertTrue(pow_enc(cubed, Fraction(1, 3)).contains(y))

    def test_wide_input_returns_instead_of_raising(self):
        """Width inherited from the input is not a precision failure."""
        unit = Enclosure.hull(Enclosure.from_int(0), Enclosure.from_int(1))
        policy = PrecisionPolicy(initial_bits=64, max_bits=256)
        result = exp_enc(unit, policy)
        self.assertTrue(result.contains(1))
        self.assertAlmostEqual(float(result.width), 1.718281828, places=6)
        self.assertLessEqual(result.precision_bits, 256)


class TestIntegerBracket(unittest.TestCase):
    """Unambiguous ceilings and floors."""

    def enclosure(self, lo: str, hi: str) -> Enclosure:
        return Enclosure.hull(Enclosure.from_value(lo, 64), Enclosure.from_value(hi, 64))

    def test_ceiling_unambiguous(self):
        result = integer_bracket(self.enclosure("4.1132", "4.1133"))
        self.assertIsInstance(result, IntegerBracket)
        self.assertEqual(result.ceiling, 5)
        self.assertEqual(result.floor, 4)

    def test_straddling_integer(self):
        result = integer_bracket(self.enclosure("3.99", "4.01"))
        self.assertIsInstance(result, NeedsMorePrecision)

    def test_upper_endpoint_floor(self):
        """2e^sqrt(2) = 8.2265..."""
        result = integer_bracket(self.enclosure("8.2264", "8.2266"))
        self.assertEqual(result.floor, 8)

    def test_exact_integer(self):
        result = integer_bracket(Enclosure.from_int(8))
        self.assertEqual((result.ceiling, result.floor), (8, 8))


if __name__ == "__main__":
    unittest.main()
