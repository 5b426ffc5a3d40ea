"""
The commutative limit h -> 0 of the extended plane.

In the limit the generators u, v become coordinates u~, v~ of the Poincare
half-plane with metric v~^-2 (du~^2 + dv~^2). Commutative functions are
sympy Laurent polynomials in the symbols U, V (printed ``u~``, ``v~``);
vector fields and maps are built on top of them.

Contents:
    - classical_limit: h = 0 substitution of an algebra element
    - poisson, poisson_classical: the bracket lim (1/h)[f, g]
    - VectorField, X_FIELDS (limits of e_i), KILLING_FIELDS (X'_i)
    - killing_defect, metric_from_forms
    - DiffeoMap with pushforward and pullback; PHI, the involution
    - gaussian_curvature_conformal, e_action_table

Example:
    >>> from hplane.climit import poisson, U, V
    >>> poisson(U, V)
    -2*v~
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import sympy

from .calculus import Derivation
from .exceptions import GeometryError, HPlaneError, ScalarError
from .ncalg import P_UV, AlgebraElement, commutator, uv_generators
from .scalar import H, Scalar

logger = logging.getLogger(__name__)

OneForm = Tuple[sympy.Expr, sympy.Expr]

_SYMBOLS: Dict[str, sympy.Symbol] = {}


def tilde(name: str) -> sympy.Symbol:
    """The commutative coordinate for a generator name."""
    if name not in _SYMBOLS:
        _SYMBOLS[name] = sympy.Symbol(f"{name}~")
    return _SYMBOLS[name]


U, V = tilde("u"), tilde("v")
W_TILDE = -(U ** 2 + 1) / (2 * V)
COORDS = (U, V)


def canonical(expr) -> sympy.Expr:
    """Expanded Laurent form, so equal functions compare equal structurally."""
    return sympy.expand(sympy.cancel(sympy.sympify(expr)))


def classical_limit(a: AlgebraElement) -> sympy.Expr:
    """
    Set h = 0 and replace every generator g by the commuting symbol g~.

    Raises:
        ScalarError: "singular limit" if a coefficient has a negative power of h
    """
    names = [tilde(g.name) for g in a.algebra.generators]
    total = sympy.Integer(0)
    for mono, coeff in a.terms.items():
        term = coeff.limit_at_zero().to_sympy()
        for sym, e in zip(names, mono):
            term = term * sym ** e
        total += term
    return canonical(total)


def _laurent_terms(expr) -> List[Tuple[sympy.Expr, int, int]]:
    out = []
    for term in sympy.Add.make_args(canonical(expr)):
        if term == 0:
            continue
        powers = term.as_powers_dict()
        a = powers.pop(U, 0)
        b = powers.pop(V, 0)
        coeff = sympy.Mul(*[base ** e for base, e in powers.items()])
        if coeff.free_symbols or not (sympy.sympify(a).is_integer and sympy.sympify(b).is_integer):
            raise GeometryError(f"not a Laurent polynomial in u~, v~: {expr}")
        out.append((coeff, int(a), int(b)))
    return out


def lift(expr, order: str = "uv") -> AlgebraElement:
    """
    Lift a Laurent polynomial in u~, v~ to P_UV.

    Args:
        expr: Commutative function
        order: "uv" for u^a v^b (normal order) or "vu" for v^b u^a

    Returns:
        Element of P_UV
    """
    if order not in ("uv", "vu"):
        raise GeometryError(f"unknown lift order '{order}'")
    total = P_UV.zero()
    for coeff, a, b in _laurent_terms(expr):
        letters = [(0, a), (1, b)] if order == "uv" else [(1, b), (0, a)]
        total = total + P_UV.word(letters, Scalar.from_sympy(coeff))
    return total


def poisson(f, g, order: str = "uv") -> sympy.Expr:
    """
    {f, g} = lim (1/h) [f^, g^] with f^, g^ lifts to P_UV.

    Raises:
        ScalarError: If the commutator is not O(h)
    """
    comm = commutator(lift(f, order), lift(g, order))
    total = sympy.Integer(0)
    for mono, coeff in comm.terms.items():
        if coeff.coefficient(0):
            raise ScalarError(f"commutator of lifts is not O(h): {comm}")
        for (a, b) in coeff.terms:
            if a < 0:
                raise ScalarError(f"singular limit: {coeff}")
        total += coeff.coefficient(1).to_sympy() * U ** mono[0] * V ** mono[1]
    return canonical(total)


def poisson_classical(f, g) -> sympy.Expr:
    """-2 v~ (f_u g_v - f_v g_u)."""
    f, g = sympy.sympify(f), sympy.sympify(g)
    return canonical(-2 * V * (sympy.diff(f, U) * sympy.diff(g, V)
                               - sympy.diff(f, V) * sympy.diff(g, U)))


def jacobi_defect(f, g, k) -> sympy.Expr:
    """{f, {g, k}} + {g, {k, f}} + {k, {f, g}}."""
    return canonical(poisson(f, poisson(g, k)) + poisson(g, poisson(k, f))
                     + poisson(k, poisson(f, g)))


def random_laurent(rng: random.Random, terms: int = 2) -> sympy.Expr:
    """Small random Laurent polynomial with integer coefficients."""
    total = sympy.Integer(0)
    for _ in range(terms):
        coeff = 0
        while coeff == 0:
            coeff = rng.randint(-3, 3)
        total += coeff * U ** rng.randint(0, 3) * V ** rng.randint(-2, 2)
    return canonical(total)


# -- vector fields --------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    """a_u d/du~ + a_v d/dv~."""

    components: Tuple[sympy.Expr, sympy.Expr]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(canonical(c) for c in self.components))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return all(canonical(a - b) == 0 for a, b in zip(self.components, other.components))

    def __hash__(self) -> int:
        return hash(self.components)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)

    def apply(self, f) -> sympy.Expr:
        f = sympy.sympify(f)
        return canonical(sum(c * sympy.diff(f, x) for c, x in zip(self.components, COORDS)))

    def commutator(self, other: "VectorField") -> "VectorField":
        """[X, Y]^c = X(Y^c) - Y(X^c)."""
        return VectorField(tuple(
            self.apply(b) - other.apply(a) for a, b in zip(self.components, other.components)
        ))

    def __str__(self) -> str:
        return f"({self.components[0]})*d_u~ + ({self.components[1]})*d_v~"


def vf_apply(X: VectorField, f) -> sympy.Expr:
    return X.apply(f)


def vf_commutator(X: VectorField, Y: VectorField) -> VectorField:
    return X.commutator(Y)


X_FIELDS = [
    VectorField((V, 0), "X1"),
    VectorField((0, -V), "X2"),
    VectorField((-W_TILDE, U), "X3"),
]

KILLING_FIELDS = [
    VectorField((1, 0), "X1'"),
    VectorField((U, V), "X2'"),
    VectorField(((V ** 2 - U ** 2) / 2, -U * V), "X3'"),
]

POINCARE_METRIC = sympy.Matrix([[V ** -2, 0], [0, V ** -2]])

# theta~1 = v~^-1 du~, theta~2 = -v~^-1 dv~
THETA_TILDE: List[OneForm] = [(1 / V, sympy.Integer(0)), (sympy.Integer(0), -1 / V)]


def killing_defect(X: VectorField, metric: sympy.Matrix = POINCARE_METRIC) -> sympy.Matrix:
    """(L_X g)_ab = X^c d_c g_ab + g_cb d_a X^c + g_ac d_b X^c."""
    out = sympy.zeros(2, 2)
    for a in range(2):
        for b in range(2):
            value = X.apply(metric[a, b])
            for c in range(2):
                value += metric[c, b] * sympy.diff(X.components[c], COORDS[a])
                value += metric[a, c] * sympy.diff(X.components[c], COORDS[b])
            out[a, b] = canonical(value)
    return out


def is_killing(X: VectorField, metric: sympy.Matrix = POINCARE_METRIC) -> bool:
    return killing_defect(X, metric).is_zero_matrix


def metric_from_forms(forms: Sequence[OneForm]) -> sympy.Matrix:
    """g = sum_k omega^k (x) omega^k."""
    out = sympy.zeros(2, 2)
    for a in range(2):
        for b in range(2):
            out[a, b] = canonical(sum(w[a] * w[b] for w in forms))
    return out


def gaussian_curvature_conformal(lam) -> sympy.Expr:
    """Gaussian curvature of lam (du~^2 + dv~^2): (|grad lam|^2 - lam Lap lam) / (2 lam^3)."""
    lam = sympy.sympify(lam)
    grad2 = sympy.diff(lam, U) ** 2 + sympy.diff(lam, V) ** 2
    lap = sympy.diff(lam, U, 2) + sympy.diff(lam, V, 2)
    return sympy.simplify((grad2 - lam * lap) / (2 * lam ** 3))


# -- maps -------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffeoMap:
    """A map of the chart given by the images of u~ and v~."""

    images: Tuple[sympy.Expr, sympy.Expr]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(canonical(c) for c in self.images))

    def pull(self, f) -> sympy.Expr:
        """f o map."""
        subs = dict(zip(COORDS, self.images))
        return canonical(sympy.sympify(f).subs(subs, simultaneous=True))

    def compose(self, other: "DiffeoMap") -> "DiffeoMap":
        """self o other."""
        return DiffeoMap(tuple(other.pull(c) for c in self.images))

    def is_identity(self) -> bool:
        return all(canonical(img - x) == 0 for img, x in zip(self.images, COORDS))

    def jacobian(self) -> sympy.Matrix:
        """J[i, j] = d_i image^j."""
        return sympy.Matrix(2, 2, lambda i, j: sympy.diff(self.images[j], COORDS[i]))

    def inverse(self) -> "DiffeoMap":
        """
        Solve for the inverse map.

        Raises:
            GeometryError: "non-invertible map" without a unique inverse
        """
        p, q = sympy.symbols("p q")
        try:
            solutions = sympy.solve(
                [sympy.Eq(p, self.images[0]), sympy.Eq(q, self.images[1])], COORDS, dict=True
            )
        except Exception as e:
            raise GeometryError(f"non-invertible map: {str(e)}") from e
        if len(solutions) != 1 or sympy.simplify(self.jacobian().det()) == 0:
            raise GeometryError(f"non-invertible map {self.images}")
        sol = solutions[0]
        back = {p: U, q: V}
        return DiffeoMap(tuple(sol[x].subs(back, simultaneous=True) for x in COORDS),
                         f"{self.name}^-1")


PHI = DiffeoMap((U / V, 1 / V), "phi")


def pushforward(phi: DiffeoMap, X: VectorField) -> VectorField:
    """(phi_* X)^j = (sum_i X^i d_i phi^j) o phi^-1."""
    inv = phi.inverse()
    jac = phi.jacobian()
    comps = []
    for j in range(2):
        value = sum(X.components[i] * jac[i, j] for i in range(2))
        comps.append(inv.pull(value))
    return VectorField(tuple(comps), f"{phi.name}_*{X.name}")


def pullback_1form(phi: DiffeoMap, omega: OneForm) -> OneForm:
    """(phi^* omega)_i = sum_j (omega_j o phi) d_i phi^j."""
    jac = phi.jacobian()
    return tuple(
        canonical(sum(phi.pull(omega[j]) * jac[i, j] for j in range(2))) for i in range(2)
    )


def form_in_frame(omega: OneForm) -> Tuple[sympy.Expr, sympy.Expr]:
    """Coefficients (c1, c2) with omega = c1 theta~1 + c2 theta~2."""
    return canonical(omega[0] * V), canonical(-omega[1] * V)


def non_symplectic_witness(phi: DiffeoMap = PHI) -> sympy.Expr:
    """{phi(u~), phi(v~)} - phi({u~, v~}); nonzero when phi is not a symplectomorphism."""
    return canonical(poisson(phi.images[0], phi.images[1]) - phi.pull(poisson(U, V)))


# -- limits of the frame derivations ------------------------------------------------


def uv_frame() -> List[Derivation]:
    """e_i = ad lambda_i in P_UV with lambda = (v, u, w) / 2h."""
    u, v, w = uv_generators()
    half_inv_h = H.inverse() / 2
    return [Derivation.ad(lam * half_inv_h, f"e{i + 1}") for i, lam in enumerate((v, u, w))]


def e_action_table() -> Dict[Tuple[int, str], AlgebraElement]:
    """e_i applied to u, v and w."""
    u, v, w = uv_generators()
    table = {}
    for i, e in enumerate(uv_frame()):
        for name, f in (("u", u), ("v", v), ("w", w)):
            table[(i, name)] = e(f)
    return table


def limit_defects() -> Dict[Tuple[int, str], sympy.Expr]:
    """classical_limit(e_i f) - X_i f~ for f in u, v, w."""
    targets = {"u": U, "v": V, "w": W_TILDE}
    out = {}
    for (i, name), value in e_action_table().items():
        try:
            out[(i, name)] = canonical(classical_limit(value) - X_FIELDS[i].apply(targets[name]))
        except HPlaneError:
            raise
        except Exception as e:
            raise GeometryError(f"Failed to take the limit of e{i + 1}{name}: {str(e)}") from e
    logger.debug("limit defects computed for %d entries", len(out))
    return out


def vector_field_table() -> List[Tuple[str, sympy.Expr, sympy.Expr]]:
    """(name, d_u~ component, d_v~ component) for X_i and X'_i."""
    return [(X.name, X.components[0], X.components[1]) for X in X_FIELDS + KILLING_FIELDS]
