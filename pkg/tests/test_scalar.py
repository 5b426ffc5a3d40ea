"""
Unit tests for hplane.scalar.
Covers exact arithmetic, inverses, limits and the text rendering used in reports.
"""

import unittest
import sys
import os
from fractions import Fraction

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import sympy

from hplane.scalar import H, HP, I, ONE, ZERO, SYMPY_H, Scalar
from hplane.exceptions import ScalarError


class TestScalarArithmetic(unittest.TestCase):
    """Test ring operations on Laurent scalars."""

    def test_addition_collects_terms(self):
        """Test that like powers are added."""
        self.assertEqual(H + H, H * 2)
        self.assertEqual(H - H, ZERO)

    def test_integers_and_fractions_coerce(self):
        """Test mixing ints and fractions with scalars."""
        self.assertEqual(1 + H - 1, H)
        self.assertEqual(H * Fraction(1, 2) * 2, H)
        self.assertEqual(Scalar.const(3), 3)

    def test_gaussian_multiplication(self):
        """Test that i squares to -1."""
        self.assertEqual(I * I, -1)
        self.assertEqual((1 + I) * (1 - I), 2)

    def test_product_with_conjugate(self):
        """Test (1 + ih/2)(1 - ih/2) = 1 + h^2/4."""
        self.assertEqual((1 + I * H / 2) * (1 - I * H / 2), 1 + H * H * Fraction(1, 4))

    def test_independent_parameters(self):
        """Test that h and h' are separate variables."""
        self.assertNotEqual(H, HP)
        self.assertEqual((H * HP).terms, {(1, 1): (Fraction(1), Fraction(0))})

    def test_float_rejected(self):
        """Test that floats are not silently accepted."""
        with self.assertRaisesRegex(ScalarError, "cannot use float"):
            Scalar.coerce(1.5)


class TestScalarInverse(unittest.TestCase):
    """Test inversion of units."""

    def test_monomial_inverse(self):
        """Test inverses of single terms."""
        cases = [(H, H ** -1), (H * 2, H ** -1 * Fraction(1, 2)), (I, -I)]
        for value, expected in cases:
            with self.subTest(value=str(value)):
                self.assertEqual(value.inverse(), expected)
                self.assertEqual(value * value.inverse(), ONE)

    def test_sum_not_invertible(self):
        """Test that 1 + h has no Laurent inverse."""
        with self.assertRaisesRegex(ScalarError, "non-invertible scalar"):
            (1 + H).inverse()

    def test_zero_not_invertible(self):
        """Test that zero has no inverse."""
        with self.assertRaisesRegex(ScalarError, "non-invertible scalar"):
            ZERO.inverse()

    def test_division(self):
        """Test division by a unit."""
        self.assertEqual((H * H + H) / H, H + 1)


class TestScalarLimits(unittest.TestCase):
    """Test h -> 0 and h' substitutions."""

    def test_limit_keeps_constant_term(self):
        """Test that the constant term survives the limit."""
        self.assertEqual((1 + I * H).limit_at_zero(), ONE)
        self.assertEqual((H * 3).limit_at_zero(), ZERO)

    def test_singular_limit(self):
        """Test that negative powers make the limit singular."""
        with self.assertRaisesRegex(ScalarError, "singular limit"):
            (H ** -1 + 1).limit_at_zero()

    def test_substitute_hp(self):
        """Test h' -> n h."""
        self.assertEqual((H * HP + HP).substitute_hp(H * 3), H * H * 3 + H * 3)

    def test_coefficient(self):
        """Test extraction of a single coefficient."""
        value = 2 + H * 5 - HP
        self.assertEqual(value.coefficient(1), Scalar.const(5))
        self.assertEqual(value.coefficient(0, 1), Scalar.const(-1))
        self.assertEqual(value.coefficient(3), ZERO)

    def test_conjugate(self):
        """Test that conjugation flips i only."""
        self.assertEqual((I * H + 1).conjugate(), 1 - I * H)


class TestScalarParsing(unittest.TestCase):
    """Test parsing and the sympy bridge."""

    def test_parse_rational(self):
        """Test p and p/q forms."""
        cases = [("1", 1), ("-3", -3), ("1/2", Fraction(1, 2)), (" 2 / 6 ", Fraction(1, 3))]
        for text, expected in cases:
            with self.subTest(text=text):
                self.assertEqual(Scalar.parse_rational(text), Scalar.const(expected))

    def test_parse_rational_invalid(self):
        """Test that junk and zero denominators are rejected."""
        for text in ("abc", "1/0", ""):
            with self.subTest(text=text):
                with self.assertRaisesRegex(ScalarError, "invalid rational"):
                    Scalar.parse_rational(text)

    def test_from_sympy(self):
        """Test conversion of a Laurent polynomial from sympy."""
        expr = SYMPY_H ** 2 + sympy.I / 2 - 3 / SYMPY_H
        self.assertEqual(Scalar.from_sympy(expr), H * H + I / 2 - H ** -1 * 3)

    def test_to_sympy(self):
        """Test conversion to sympy."""
        self.assertEqual(sympy.expand((H * 2 + I).to_sympy() - (2 * SYMPY_H + sympy.I)), 0)

    def test_from_sympy_rejects_non_laurent(self):
        """Test that non-polynomial expressions are rejected."""
        with self.assertRaisesRegex(ScalarError, "not a Laurent polynomial"):
            Scalar.from_sympy(sympy.sqrt(SYMPY_H))


class TestScalarRendering(unittest.TestCase):
    """Test the report text of scalars."""

    def test_rendering(self):
        """Test ordering by h-power and coefficient placement."""
        cases = [
            (ZERO, "0"),
            (ONE, "1"),
            (H, "h"),
            (-H * 2, "-2h"),
            (H ** -1, "h^-1"),
            (H * HP, "h*hp"),
            (I, "i"),
            (-I, "-i"),
            (I * H, "i*h"),
            (1 + H * H * Fraction(1, 4), "1 + 1/4h^2"),
            (1 - H, "1 - h"),
            (1 + I * H / 2, "1 + 1/2*i*h"),
            (Scalar.const(1, 1), "(1 + i)"),
        ]
        for value, expected in cases:
            with self.subTest(expected=expected):
                self.assertEqual(str(value), expected)

    def test_powers_printed_once(self):
        """Test that each h-power appears once per term."""
        cases = [
            (1 + H, "1 + h"),
            (H + H * H, "h + h^2"),
            (HP * HP, "hp^2"),
            (H * HP * 2, "2h*hp"),
            (H ** -2 - I * H, "h^-2 - i*h"),
        ]
        for value, expected in cases:
            with self.subTest(expected=expected):
                self.assertEqual(str(value), expected)

    def test_hash_consistent_with_equality(self):
        """Test that equal scalars hash alike."""
        self.assertEqual(hash(H + 1), hash(1 + H))
        self.assertEqual(len({H + 1, 1 + H, H}), 2)


if __name__ == '__main__':
    unittest.main()
