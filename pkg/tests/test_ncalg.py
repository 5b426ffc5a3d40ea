"""
Unit tests for hplane.ncalg.
Covers normal forms, invertible generators, homomorphisms and the u, v, w subalgebra.
"""

import unittest
import sys
import os
import random

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from hplane.ncalg import (
    MAX_EXPONENT,
    P_EXT,
    P_PLANE,
    P_PLANE2,
    P_UV,
    Generator,
    Homomorphism,
    Presentation,
    commutator,
    confluence_failures,
    embed_uv,
    ext_uvw,
    letter_swap,
    normalize,
    tensor_presentation,
    uv_generators,
)
from hplane.scalar import H, HP, ONE
from hplane.exceptions import AlgebraError


class TestPlaneNormalForm(unittest.TestCase):
    """Test reduction in the h-deformed plane."""

    def setUp(self):
        self.x, self.y = P_PLANE.gens()

    def test_basic_relation(self):
        """Test y x = x y - h y^2."""
        self.assertEqual(self.y * self.x, self.x * self.y - H * self.y * self.y)
        self.assertEqual(str(self.y * self.x), "x*y - h*y^2")

    def test_higher_power(self):
        """Test y^2 x = x y^2 - 2h y^3."""
        self.assertEqual(str(self.y * self.y * self.x), "x*y^2 - 2h*y^3")

    def test_ordered_words_unchanged(self):
        """Test that words already in normal order are left alone."""
        element = P_PLANE.word([("x", 2), ("y", 3)])
        self.assertEqual(element.terms, {(2, 3): ONE})

    def test_associativity(self):
        """Test (ab)c = a(bc) on a few products."""
        x, y = self.x, self.y
        cases = [(y, x, x), (y * y, x, y), (x + y, y * x, y * y * x)]
        for a, b, c in cases:
            with self.subTest(a=str(a), b=str(b), c=str(c)):
                self.assertEqual((a * b) * c, a * (b * c))

    def test_confluence_on_random_words(self):
        """Test that the reduction order does not change the normal form."""
        self.assertEqual(confluence_failures(P_PLANE, random.Random(3), count=60, max_length=4,
                                             exponent_range=(1, 3)), [])

    def test_limit_is_commutative(self):
        """Test that h -> 0 recovers the commutative product."""
        self.assertEqual((self.y * self.x).limit_at_zero(), self.x * self.y)

    def test_monomial_and_rendering(self):
        """Test monomial construction and text."""
        self.assertEqual(str(P_PLANE.monomial((2, 1), H)), "h*x^2*y")
        self.assertEqual(str(P_PLANE.zero()), "0")

    def test_scalar_sum_coefficients(self):
        """Test that several-term coefficients are parenthesized only before a monomial."""
        self.assertEqual(str(self.x * (1 + H)), "(1 + h)*x")
        self.assertEqual(str(self.y * (H + H * H)), "(h + h^2)*y")
        self.assertEqual(str(P_PLANE.scalar(1 + H)), "1 + h")
        self.assertEqual(str(P_PLANE.scalar(H * H)), "h^2")

    def test_degree_and_scalars(self):
        """Test degree, scalar detection and comparison with ints."""
        self.assertEqual((self.y * self.x).degree(), 2)
        self.assertEqual(P_PLANE.scalar(H).scalar_value(), H)
        self.assertEqual(P_PLANE.one(), 1)
        with self.assertRaisesRegex(AlgebraError, "is not a scalar"):
            self.x.scalar_value()

    def test_normalize_function(self):
        """Test the module level normalize helper."""
        self.assertEqual(normalize([("y", 1), ("x", 1)], P_PLANE, 2),
                         (self.y * self.x) * 2)


class TestInvertibleGenerators(unittest.TestCase):
    """Test the extension with y^-1."""

    def test_inverse_relation(self):
        """Test y^-1 x = x y^-1 + h."""
        x, y = P_EXT.gens()
        y_inv = y.inverse()
        self.assertEqual(y_inv * x, x * y_inv + H)
        self.assertEqual(commutator(x, y_inv), -H * P_EXT.one())

    def test_inverse_cancels(self):
        """Test y y^-1 = y^-1 y = 1."""
        _, y = P_EXT.gens()
        self.assertEqual(y * y.inverse(), 1)
        self.assertEqual(y.inverse() * y, 1)
        self.assertEqual(y ** -2 * y ** 2, 1)

    def test_monomial_inverse(self):
        """Test inversion of a scaled monomial."""
        _, y = P_EXT.gens()
        element = y * y * H * 2
        self.assertEqual(element * element.inverse(), 1)

    def test_non_invertible_generator(self):
        """Test that negative powers of x are rejected."""
        with self.assertRaisesRegex(AlgebraError, "x is not invertible in ext"):
            P_EXT.gen("x", -1)
        with self.assertRaisesRegex(AlgebraError, "y is not invertible in plane"):
            P_PLANE.gen("y", -1)

    def test_sum_not_invertible(self):
        """Test that sums have no inverse."""
        x, y = P_EXT.gens()
        with self.assertRaisesRegex(AlgebraError, "not invertible"):
            (x + y).inverse()

    def test_generator_repr(self):
        """Test generator display."""
        self.assertEqual(repr(Generator("y", invertible=True)), "y^{+-1}")
        self.assertEqual(str(P_EXT.gen("y", -1)), "y^-1")


class TestAlgebraErrors(unittest.TestCase):
    """Test error handling."""

    def test_unknown_generator(self):
        """Test an unknown generator name."""
        with self.assertRaisesRegex(AlgebraError, "unknown generator 'z' in plane"):
            P_PLANE.gen("z")

    def test_algebra_mismatch(self):
        """Test that elements of different algebras do not mix."""
        with self.assertRaisesRegex(AlgebraError, "algebra mismatch"):
            P_PLANE.gens()[0] * P_PLANE2.gens()[0]
        with self.assertRaisesRegex(AlgebraError, "algebra mismatch"):
            P_PLANE.gens()[0] + P_EXT.gens()[0]

    def test_exponent_overflow(self):
        """Test the exponent bound."""
        with self.assertRaisesRegex(AlgebraError, "exponent overflow"):
            P_PLANE.gen("x", MAX_EXPONENT + 1)


class TestUVSubalgebra(unittest.TestCase):
    """Test the u, v, w commutation relations."""

    def test_uv_relations(self):
        """Test [u,v] = -2hv, [u,w] = 2hw, [w,v] = 2hu."""
        u, v, w = uv_generators()
        cases = [
            ("[u,v]", commutator(u, v), -2 * H * v),
            ("[u,w]", commutator(u, w), 2 * H * w),
            ("[w,v]", commutator(w, v), 2 * H * u),
        ]
        for name, actual, expected in cases:
            with self.subTest(relation=name):
                self.assertEqual(actual, expected)

    def test_embedding_is_homomorphism(self):
        """Test that u -> x y^-1 + h/2, v -> y^-2 preserves [u,v]."""
        u, v = P_UV.gens()
        self.assertEqual(commutator(embed_uv(u), embed_uv(v)), embed_uv(commutator(u, v)))
        _, y = P_EXT.gens()
        self.assertEqual(embed_uv(v), y ** -2)
        self.assertEqual(embed_uv(v.inverse()), y * y)

    def test_ext_uvw(self):
        """Test [u,v] = -2hv inside the extended plane."""
        u, v, _ = ext_uvw()
        self.assertEqual(commutator(u, v), -2 * H * v)
        self.assertIs(u.algebra, P_EXT)


class TestPresentationBuilders(unittest.TestCase):
    """Test swap rule builders and homomorphisms."""

    def test_letter_swap_matches_plane(self):
        """Test that a single-letter rule reproduces the plane relation."""
        rules = {(1, 0): [(((0, 1), (1, 1)), ONE), (((1, 2),), -H)]}
        alg = Presentation("plane-letters", [Generator("x"), Generator("y")], letter_swap(rules))
        element = alg.word([("y", 2), ("x", 1)])
        self.assertEqual(element.coefficient((1, 2)), ONE)
        self.assertEqual(element.coefficient((0, 3)), -2 * H)

    def test_tensor_presentation(self):
        """Test that factors commute and keep their own relation."""
        t = tensor_presentation("plane(x)plane", P_PLANE, P_PLANE)
        self.assertEqual(t.rank, 4)
        self.assertEqual(t.word([(2, 1), (0, 1)]).terms, {(1, 0, 1, 0): ONE})
        right = t.word([(3, 1), (2, 1)])
        self.assertEqual(right.coefficient((0, 0, 1, 1)), ONE)
        self.assertEqual(right.coefficient((0, 0, 0, 2)), -H)

    def test_homomorphism(self):
        """Test substitution between presentations."""
        x2, y2 = P_PLANE2.gens()
        phi = Homomorphism(P_PLANE, P_PLANE2, {"x": x2, "y": y2})
        x, y = P_PLANE.gens()
        self.assertEqual(phi(y * x), y2 * x2)
        with self.assertRaisesRegex(AlgebraError, "algebra mismatch"):
            phi(P_EXT.gens()[0])

    def test_substitute_hp(self):
        """Test h' substitution on coefficients."""
        x, _ = P_PLANE2.gens()
        self.assertEqual((x * HP).substitute_hp(H * 2), x * H * 2)

    def test_random_word_respects_invertibility(self):
        """Test that random words never invert x."""
        rng = random.Random(11)
        for _ in range(20):
            for g, e in P_EXT.random_word(rng, 6, (-3, 3)):
                if g == 0:
                    self.assertGreater(e, 0)
                self.assertNotEqual(e, 0)


if __name__ == '__main__':
    unittest.main()
