"""
Unit tests for hplane.calculus.
Covers the bimodule rules, wedge relations, the exterior derivative and frame calculi.
"""

import unittest
import sys
import os
from fractions import Fraction

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from hplane.calculus import (
    C_EXT2,
    C_EXT_XY,
    C_PLANE,
    C_PLANE2,
    Derivation,
    as_form,
    as_tensor,
    plane_rmatrix,
    wedge_projection,
)
from hplane.ncalg import P_EXT, P_PLANE, ext_uvw
from hplane.scalar import H, HP, ONE
from hplane.exceptions import CalculusError


class TestPlaneBimodule(unittest.TestCase):
    """Test moving functions through xi = dx and eta = dy."""

    def setUp(self):
        self.x, self.y = P_PLANE.gens()
        self.xi = C_PLANE.basis("xi")
        self.eta = C_PLANE.basis("eta")

    def test_x_xi(self):
        """Test x xi = xi (x - hy) + eta (hx + h^2 y)."""
        x, y = self.x, self.y
        expected = C_PLANE.basis("xi", x - H * y) + C_PLANE.basis("eta", H * x + H * H * y)
        self.assertEqual(x * self.xi, expected)
        self.assertEqual(str(x * self.xi), "xi*(x - h*y) + eta*(h*x + h^2*y)")

    def test_single_letter_rules(self):
        """Test the remaining generator / cogenerator rules."""
        x, y = self.x, self.y
        cases = [
            ("y xi", y * self.xi, C_PLANE.basis("xi", y) - C_PLANE.basis("eta", H * y)),
            ("x eta", x * self.eta, C_PLANE.basis("eta", x + H * y)),
            ("y eta", y * self.eta, C_PLANE.basis("eta", y)),
        ]
        for name, actual, expected in cases:
            with self.subTest(rule=name):
                self.assertEqual(actual, expected)

    def test_action_respects_relation(self):
        """Test (yx) xi = y (x xi), so the rules respect y x = x y - h y^2."""
        x, y = self.x, self.y
        for form in (self.xi, self.eta):
            with self.subTest(form=str(form)):
                self.assertEqual((y * x) * form, y * (x * form))
                self.assertEqual((x * y - H * y * y) * form, y * (x * form))

    def test_normalize_form(self):
        """Test normalization of a formal word."""
        form = C_PLANE.normalize_form([(self.x, ["xi"], P_PLANE.one())])
        self.assertEqual(form, self.x * self.xi)
        self.assertEqual(C_PLANE.normalize_form([]), C_PLANE.zero(0))
        with self.assertRaisesRegex(CalculusError, "unsupported degree 3"):
            C_PLANE.normalize_form([(self.x, ["xi", "eta", "xi"], self.y)])


class TestWedge(unittest.TestCase):
    """Test the degree 2 relations."""

    def test_plane_relations(self):
        """Test xi xi = h xi eta, eta xi = -xi eta, eta eta = 0."""
        xi, eta = C_PLANE.basis("xi"), C_PLANE.basis("eta")
        cases = [
            ("xi xi", xi * xi, C_PLANE.basis2(0, H)),
            ("xi eta", xi * eta, C_PLANE.basis2(0)),
            ("eta xi", eta * xi, -C_PLANE.basis2(0)),
            ("eta eta", eta * eta, C_PLANE.zero(2)),
        ]
        for name, actual, expected in cases:
            with self.subTest(product=name):
                self.assertEqual(actual, expected)

    def test_two_parameter_relation(self):
        """Test xi xi = h' xi eta on the two-parameter plane."""
        xi = C_PLANE2.basis("xi")
        self.assertEqual(xi * xi, C_PLANE2.basis2(0, HP))

    def test_projection_of_tensor(self):
        """Test pi(xi (x) xi) = h xi eta."""
        xi = C_PLANE.basis("xi")
        t = C_PLANE.tensor(as_tensor(xi), as_tensor(xi))
        self.assertEqual(t.shape, (1, 1))
        self.assertEqual(wedge_projection(t), C_PLANE.basis2(0, H))

    def test_degree_overflow(self):
        """Test that degree 3 is rejected."""
        xi = C_PLANE.basis("xi")
        with self.assertRaisesRegex(CalculusError, "unsupported degree 3"):
            C_PLANE.wedge(C_PLANE.basis2(0), xi)

    def test_tensor_views(self):
        """Test conversions between 1-forms and rank 1 tensors."""
        xi = C_PLANE.basis("xi", P_PLANE.gens()[1])
        self.assertEqual(as_form(as_tensor(xi)), xi)
        with self.assertRaisesRegex(CalculusError, "only 1-forms"):
            as_tensor(C_PLANE.basis2(0))


class TestExteriorDerivative(unittest.TestCase):
    """Test d on the coordinate calculi."""

    def setUp(self):
        self.x, self.y = P_PLANE.gens()

    def test_generators(self):
        """Test dx = xi, dy = eta and d of scalars."""
        self.assertEqual(C_PLANE.d(self.x), C_PLANE.basis("xi"))
        self.assertEqual(C_PLANE.d(self.y), C_PLANE.basis("eta"))
        self.assertEqual(C_PLANE.d(P_PLANE.scalar(H)), 0)

    def test_well_defined_on_relation(self):
        """Test d(yx) = d(xy - h y^2)."""
        x, y = self.x, self.y
        self.assertEqual(C_PLANE.d(y * x), C_PLANE.d(x * y - H * y * y))

    def test_leibniz(self):
        """Test d(fg) = (df) g + f dg."""
        x, y = self.x, self.y
        pairs = [(x, y), (y, x), (x * y, y * y), (y * y * x, x + H * y)]
        for f, g in pairs:
            with self.subTest(f=str(f), g=str(g)):
                self.assertEqual(C_PLANE.d(f * g), C_PLANE.d(f) * g + f * C_PLANE.d(g))

    def test_d_squared(self):
        """Test d(df) = 0."""
        x, y = self.x, self.y
        for f in (x * y, y * x * x, x * x * y * y - H * x):
            with self.subTest(f=str(f)):
                self.assertEqual(C_PLANE.d(C_PLANE.d(f)), 0)

    def test_degree_two_rejected(self):
        """Test that d stops at 2-forms."""
        with self.assertRaisesRegex(CalculusError, "unsupported degree 3"):
            C_PLANE.d(C_PLANE.basis2(0))

    def test_inverse_generator(self):
        """Test y^-1 xi and d(y^-1) on the extended plane."""
        _, y = P_EXT.gens()
        y_inv = y.inverse()
        xi = C_EXT_XY.basis("xi")
        self.assertEqual(y_inv * xi, C_EXT_XY.basis("xi", y_inv) + C_EXT_XY.basis("eta", y_inv * H))
        self.assertEqual(y_inv * (y * xi), xi)
        self.assertEqual(C_EXT_XY.d(y_inv), -C_EXT_XY.basis("eta", y_inv * y_inv))

    def test_rmatrix_rows(self):
        """Test the R-matrix entries used by the swap rules."""
        R = plane_rmatrix()
        self.assertEqual(R[(0, 0)][(1, 1)], H * H)
        self.assertEqual(R[(1, 0)][(1, 1)], -H)
        self.assertNotIn((0, 0), R[(0, 1)])


class TestDerivations(unittest.TestCase):
    """Test derivations, evaluation and interior products."""

    def test_tabulated_derivation(self):
        """Test a d/dx-like derivation extended by Leibniz."""
        x, y = P_PLANE.gens()
        e = Derivation(P_PLANE, "dx", table={"x": P_PLANE.one()})
        self.assertEqual(e(y * x), y)
        self.assertEqual(e(x * x), 2 * x)
        self.assertEqual(C_PLANE.evaluate(C_PLANE.basis("xi"), e), 1)
        self.assertEqual(C_PLANE.evaluate(C_PLANE.basis("eta"), e), 0)

    def test_tabulated_derivation_on_inverse(self):
        """Test Leibniz through y^-1."""
        x, y = P_EXT.gens()
        e = Derivation(P_EXT, "dx", table={"x": P_EXT.one()})
        self.assertEqual(e(y.inverse() * x), y.inverse())

    def test_derivation_needs_one_kind(self):
        """Test that inner and tabulated are exclusive."""
        with self.assertRaisesRegex(CalculusError, "either inner or tabulated"):
            Derivation(P_PLANE, "e")
        x, _ = P_PLANE.gens()
        with self.assertRaisesRegex(CalculusError, "either inner or tabulated"):
            Derivation(P_PLANE, "e", inner=x, table={"x": x})

    def test_evaluate_errors(self):
        """Test evaluation and interior product on bad degrees."""
        e = Derivation(P_PLANE, "dx", table={"x": P_PLANE.one()})
        with self.assertRaisesRegex(CalculusError, "evaluation needs a 1-form"):
            C_PLANE.evaluate(C_PLANE.basis2(0), e)
        with self.assertRaisesRegex(CalculusError, "degree 0"):
            C_PLANE.interior(e, C_PLANE.function(P_PLANE.one()))

    def test_unknown_cogenerator(self):
        """Test an unknown basis name."""
        with self.assertRaisesRegex(CalculusError, "unknown cogenerator 'zeta' in plane"):
            C_PLANE.basis("zeta")

    def test_no_frame(self):
        """Test that coordinate calculi have no Dirac operator."""
        with self.assertRaisesRegex(CalculusError, "has no frame"):
            C_PLANE.dirac_operator()


class TestFrameCalculus(unittest.TestCase):
    """Test the two-dimensional frame calculus on the extended plane."""

    def setUp(self):
        self.u, self.v, self.w = ext_uvw()
        self.t1 = C_EXT2.basis("t1")
        self.t2 = C_EXT2.basis("t2")

    def test_frame_is_dual(self):
        """Test theta^i(e_j) = delta^i_j."""
        for i, name in enumerate(("t1", "t2")):
            for j, e in enumerate(C_EXT2.frame):
                with self.subTest(form=name, derivation=e.name):
                    expected = 1 if i == j else 0
                    self.assertEqual(C_EXT2.evaluate(C_EXT2.basis(name), e), expected)

    def test_du_dv(self):
        """Test du = theta^1 v and dv = -theta^2 v."""
        self.assertEqual(C_EXT2.d(self.u), C_EXT2.basis("t1", self.v))
        self.assertEqual(C_EXT2.d(self.v), -C_EXT2.basis("t2", self.v))

    def test_frame_commutes_with_functions(self):
        """Test f theta = theta f."""
        self.assertEqual(self.u * self.t1, C_EXT2.basis("t1", self.u))

    def test_structure_equation(self):
        """Test d theta^1 = -theta^1 theta^2 and d theta^2 = 0."""
        self.assertEqual(C_EXT2.d(self.t1), -(self.t1 * self.t2))
        self.assertEqual(C_EXT2.d(self.t2), 0)

    def test_dirac_operator(self):
        """Test df = -[theta, f]."""
        theta = C_EXT2.dirac_operator()
        for f in (self.u, self.v, self.u * self.v + H):
            with self.subTest(f=str(f)):
                self.assertEqual(C_EXT2.d(f), -(theta * f - f * theta))

    def test_lie_derivative_of_frame(self):
        """Test L_e1 theta^1 = -theta^2 and L_e2 theta^1 = theta^1."""
        e1, e2 = C_EXT2.frame
        self.assertEqual(C_EXT2.lie_derivative(e1, self.t1), -self.t2)
        self.assertEqual(C_EXT2.lie_derivative(e2, self.t1), self.t1)

    def test_lie_derivative_of_function(self):
        """Test L_e f = e(f)."""
        e1 = C_EXT2.frame[0]
        self.assertEqual(C_EXT2.lie_derivative(e1, C_EXT2.function(self.u)),
                         C_EXT2.function(e1(self.u)))

    def test_interior_product(self):
        """Test i_e1 (theta^1 theta^2) = theta^2."""
        e1 = C_EXT2.frame[0]
        self.assertEqual(C_EXT2.interior(e1, self.t1 * self.t2), self.t2)

    def test_inner_derivation(self):
        """Test e = ad lambda on the u, v generators."""
        e1, e2 = C_EXT2.frame
        self.assertEqual(e2(self.v), self.v * Fraction(-1))
        self.assertEqual(e1(self.v), 0)


if __name__ == '__main__':
    unittest.main()
