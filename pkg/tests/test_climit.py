"""
Unit tests for hplane.climit.
Covers the commutative limit, the Poisson bracket, vector fields and the involution.
"""

import unittest
import sys
import os

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import sympy

from hplane.climit import (
    KILLING_FIELDS,
    PHI,
    THETA_TILDE,
    U,
    V,
    X_FIELDS,
    DiffeoMap,
    VectorField,
    canonical,
    classical_limit,
    e_action_table,
    form_in_frame,
    gaussian_curvature_conformal,
    is_killing,
    lift,
    non_symplectic_witness,
    poisson,
    poisson_classical,
    pullback_1form,
    pushforward,
    vector_field_table,
)
from hplane.ncalg import P_UV
from hplane.scalar import H
from hplane.exceptions import GeometryError, ScalarError


class TestClassicalLimit(unittest.TestCase):
    """Test h -> 0 of algebra elements."""

    def test_products_commute_in_the_limit(self):
        """Test lim uv = lim vu = u~ v~."""
        u, v = P_UV.gens()
        self.assertEqual(classical_limit(u * v), U * V)
        self.assertEqual(classical_limit(v * u), U * V)

    def test_inverse_generator(self):
        """Test lim v^-1 = 1/v~."""
        _, v = P_UV.gens()
        self.assertEqual(classical_limit(v.inverse()), 1 / V)

    def test_singular_limit(self):
        """Test that 1/h coefficients have no limit."""
        _, v = P_UV.gens()
        with self.assertRaisesRegex(ScalarError, "singular limit"):
            classical_limit(v * H.inverse())

    def test_lift_orders(self):
        """Test u^a v^b and v^b u^a lifts."""
        u, v = P_UV.gens()
        self.assertEqual(lift(U * V), u * v)
        self.assertEqual(lift(U * V, "vu"), v * u)
        with self.assertRaisesRegex(GeometryError, "unknown lift order"):
            lift(U, "wu")

    def test_lift_rejects_other_symbols(self):
        """Test that only u~ and v~ may appear."""
        with self.assertRaisesRegex(GeometryError, "not a Laurent polynomial"):
            lift(sympy.Symbol("z") * U)


class TestPoissonBracket(unittest.TestCase):
    """Test {f, g} = lim (1/h) [f, g]."""

    def test_generators(self):
        """Test {u~, v~} = -2 v~ and {u~, u~} = 0."""
        self.assertEqual(poisson(U, V), -2 * V)
        self.assertEqual(poisson(U, U), 0)

    def test_square(self):
        """Test {u~^2, v~} = -4 u~ v~."""
        self.assertEqual(poisson(U ** 2, V), -4 * U * V)

    def test_matches_classical_formula(self):
        """Test agreement with -2 v~ (f_u g_v - f_v g_u)."""
        cases = [(U, V), (U ** 2, V ** -1), (U * V, U + V ** 2), (3 * U ** 3 * V, V ** -2)]
        for f, g in cases:
            with self.subTest(f=str(f), g=str(g)):
                self.assertEqual(canonical(poisson(f, g) - poisson_classical(f, g)), 0)

    def test_antisymmetry(self):
        """Test {f, g} = -{g, f}."""
        f, g = U ** 2 * V, U + V ** -1
        self.assertEqual(canonical(poisson(f, g) + poisson(g, f)), 0)


class TestVectorFields(unittest.TestCase):
    """Test the limit vector fields and Killing fields."""

    def test_bracket(self):
        """Test [X1, X2] = X1."""
        X1, X2, _ = X_FIELDS
        self.assertEqual(X1.commutator(X2), X1)

    def test_killing_fields(self):
        """Test that the X'_i are Killing and X_1 is not."""
        for X in KILLING_FIELDS:
            with self.subTest(field=X.name):
                self.assertTrue(is_killing(X))
        self.assertFalse(is_killing(X_FIELDS[0]))

    def test_apply(self):
        """Test a field acting on a function."""
        X = VectorField((V, 0))
        self.assertEqual(X.apply(U ** 2), canonical(2 * U * V))
        self.assertTrue((X - X).is_zero())

    def test_frame_action(self):
        """Test e_1 u = v and e_2 v = -v before the limit."""
        u, v = P_UV.gens()
        table = e_action_table()
        self.assertEqual(table[(0, "u")], v)
        self.assertEqual(table[(1, "v")], -v)
        self.assertEqual(table[(0, "v")], 0)

    def test_table(self):
        """Test the printed field table rows."""
        names = [row[0] for row in vector_field_table()]
        self.assertEqual(names, ["X1", "X2", "X3", "X1'", "X2'", "X3'"])


class TestInvolution(unittest.TestCase):
    """Test phi(u~, v~) = (u~/v~, 1/v~)."""

    def test_phi_is_involution(self):
        """Test phi o phi = id."""
        self.assertTrue(PHI.compose(PHI).is_identity())
        self.assertFalse(PHI.is_identity())

    def test_pushforward(self):
        """Test phi_* X1 = X'1."""
        self.assertEqual(pushforward(PHI, X_FIELDS[0]), KILLING_FIELDS[0])

    def test_pullback(self):
        """Test phi^* theta~2 = -theta~2."""
        pulled = pullback_1form(PHI, THETA_TILDE[1])
        self.assertEqual(form_in_frame(pulled), (0, -1))

    def test_not_symplectic(self):
        """Test that phi does not preserve the bracket."""
        self.assertNotEqual(non_symplectic_witness(PHI), 0)

    def test_non_invertible_map(self):
        """Test that a collapsing map has no inverse."""
        with self.assertRaisesRegex(GeometryError, "non-invertible map"):
            DiffeoMap((U, U)).inverse()

    def test_curvature(self):
        """Test that v~^-2 (du~^2 + dv~^2) has curvature -1."""
        self.assertEqual(gaussian_curvature_conformal(V ** -2), -1)


if __name__ == '__main__':
    unittest.main()
