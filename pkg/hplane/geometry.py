"""
Linear connections on the h-deformed plane and its extension.

Contents:
    - BraidMap: sigma on Omega^1 (x) Omega^1 from an R-matrix or the flip
    - Connection: D with the left and sigma-twisted right Leibniz rules,
      its extension to rank 2 tensors, torsion, curvature, Riemann and
      Ricci coefficients on frames
    - BilinearForm: Lambda, g, g', H and metric compatibility
    - ComplexStructure and the vartheta basis
    - SkewDerivativeSystem: skew derivatives from the symplectic form
    - FrameData: the frame (Stehbein) consistency conditions
    - varpi_check for the two-parameter connection families
    - unique_connection_solver for constant-coefficient frame connections

Example:
    >>> from hplane.geometry import plane_connection, torsion
    >>> D = plane_connection(1, 0)
    >>> torsion(D, D.calculus.basis("xi")).is_zero()
    True
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from .calculus import (
    C_EXT2,
    C_EXT_XY,
    C_PLANE,
    Calculus,
    FormElement,
    RMatrix,
    TensorElement,
    as_tensor,
    plane_calculus,
    plane_rmatrix,
)
from .exceptions import GeometryError, HPlaneError
from .ncalg import P_PLANE2, AlgebraElement
from .report import CheckRecord, compare, truth, vanishes
from .scalar import H, I, ONE, ZERO, Scalar, ScalarLike

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Triple = Tuple[int, int, int]


# -- braid maps ---------------------------------------------------------------


class BraidMap:
    """
    sigma(theta^i (x) theta^j) = S^{ij}_{kl} theta^k (x) theta^l, extended
    by right linearity on right-normal tensors.
    """

    def __init__(self, calculus: Calculus, S: Mapping[Pair, Mapping[Pair, ScalarLike]],
                 name: str = "sigma", rmatrix: Optional[RMatrix] = None):
        self.calculus = calculus
        self.name = name
        self.rmatrix = rmatrix
        self.S: Dict[Pair, Dict[Pair, Scalar]] = {}
        for pair, row in S.items():
            clean = {kl: Scalar.coerce(v) for kl, v in row.items()}
            self.S[pair] = {kl: v for kl, v in clean.items() if v}

    @classmethod
    def from_rmatrix(cls, calculus: Calculus, R: RMatrix, name: str = "sigma") -> "BraidMap":
        return cls(calculus, R, name, rmatrix=R)

    @classmethod
    def flip(cls, calculus: Calculus) -> "BraidMap":
        n = calculus.dimension
        S = {(i, j): {(j, i): ONE} for i in range(n) for j in range(n)}
        return cls(calculus, S, "flip")

    @classmethod
    def identity(cls, calculus: Calculus) -> "BraidMap":
        n = calculus.dimension
        S = {(i, j): {(i, j): ONE} for i in range(n) for j in range(n)}
        return cls(calculus, S, "identity", rmatrix=S)

    def apply(self, t: Union[TensorElement, FormElement], slot: int = 0) -> TensorElement:
        """
        Apply sigma to tensor slots (slot, slot + 1).

        Raises:
            GeometryError: If the slot is outside the tensor rank
        """
        t = as_tensor(t)
        if slot < 0 or slot + 1 >= t.rank:
            raise GeometryError(f"slot {slot} out of range for a rank {t.rank} tensor")
        if t.shape[slot] != 1 or t.shape[slot + 1] != 1:
            raise GeometryError(f"sigma acts on 1-form slots, got shape {t.shape}")
        zero = self.calculus.algebra.zero()
        out: Dict[Tuple[int, ...], AlgebraElement] = {}
        for key, coeff in t.terms.items():
            for (k, l), s in self.S.get((key[slot], key[slot + 1]), {}).items():
                new = key[:slot] + (k, l) + key[slot + 2:]
                out[new] = out.get(new, zero) + coeff * s
        return TensorElement(self.calculus, out, t.shape)

    def __call__(self, t, slot: int = 0) -> TensorElement:
        return self.apply(t, slot)


def sigma_apply(s: BraidMap, t: TensorElement, slot: int = 0) -> TensorElement:
    return s.apply(t, slot)


def sigma_action_table(s: BraidMap) -> Dict[Pair, TensorElement]:
    """sigma on every basis pair."""
    calc = s.calculus
    n = calc.dimension
    return {
        (i, j): s.apply(calc.tensor_basis((i, j)))
        for i in range(n) for j in range(n)
    }


def _apply_matrix(R: Mapping[Pair, Mapping[Pair, Scalar]], vec: Dict[Triple, Scalar],
                  slot: int) -> Dict[Triple, Scalar]:
    out: Dict[Triple, Scalar] = {}
    for key, coeff in vec.items():
        pair = key[slot:slot + 2]
        for kl, r in R.get(pair, {}).items():
            new = key[:slot] + kl + key[slot + 2:]
            out[new] = out.get(new, ZERO) + coeff * Scalar.coerce(r)
    return {k: v for k, v in out.items() if v}


def ybe_defects(R: Mapping[Pair, Mapping[Pair, ScalarLike]], n: int = 2) -> List[Triple]:
    """
    Basis triples where R_12 R_23 R_12 and R_23 R_12 R_23 disagree.

    Args:
        R: Matrix keyed R[(a, b)][(c, d)]
        n: Index range

    Returns:
        Failing triples (empty when the Yang-Baxter equation holds)
    """
    failing = []
    for triple in itertools.product(range(n), repeat=3):
        start = {triple: ONE}
        lhs = _apply_matrix(R, _apply_matrix(R, _apply_matrix(R, start, 0), 1), 0)
        rhs = _apply_matrix(R, _apply_matrix(R, _apply_matrix(R, start, 1), 0), 1)
        if lhs != rhs:
            failing.append(triple)
    return failing


def braid_defects(s: BraidMap) -> List[Triple]:
    """Basis triples where sigma_12 sigma_23 sigma_12 != sigma_23 sigma_12 sigma_23."""
    calc = s.calculus
    failing = []
    for triple in itertools.product(range(calc.dimension), repeat=3):
        t = calc.tensor_basis(triple)
        lhs = s.apply(s.apply(s.apply(t, 0), 1), 0)
        rhs = s.apply(s.apply(s.apply(t, 1), 0), 1)
        if lhs != rhs:
            failing.append(triple)
    return failing


def check_braid(s: BraidMap) -> bool:
    """True iff the braid relation holds and, for R-matrix braids, the YBE holds."""
    if braid_defects(s):
        return False
    if s.rmatrix is not None and ybe_defects(s.rmatrix, s.calculus.dimension):
        return False
    return True


# -- kappa ----------------------------------------------------------------------


def kappa(calculus: Calculus = C_PLANE) -> FormElement:
    """kappa = x eta - y xi - h y eta."""
    x, y = calculus.algebra.gens()
    xi, eta = calculus.basis("xi"), calculus.basis("eta")
    return x * eta - y * xi - (y * H) * eta


def kappa_sigma_table(s: BraidMap) -> Dict[str, Tuple[TensorElement, TensorElement]]:
    """sigma on xi (x) kappa, kappa (x) xi, ... paired with the expected flips."""
    calc = s.calculus
    k = kappa(calc)
    xi, eta = calc.basis("xi"), calc.basis("eta")
    table = {}
    for label, a, b in (("xi-kappa", xi, k), ("kappa-xi", k, xi), ("eta-kappa", eta, k),
                        ("kappa-eta", k, eta), ("kappa-kappa", k, k)):
        table[label] = (s.apply(calc.tensor(a, b)), calc.tensor(b, a))
    return table


# -- connections ----------------------------------------------------------------


@dataclass(frozen=True)
class ConnectionParams:
    """
    Parameters of a connection family.

    family is one of "plane", "plane2", "ext_flat", "ext_levicivita" or
    "frame" (constant coefficients from the solver). For "plane2" the case is
    "n" (h' = n h) or "n/2" (h' = n h / 2).
    """

    family: str
    mu: Scalar = ZERO
    rho: Scalar = ZERO
    n: Optional[int] = None
    case: Optional[str] = None


class Connection:
    """A linear connection D given by its values on the cogenerators."""

    def __init__(self, params: ConnectionParams, sigma: BraidMap,
                 values: Mapping[int, TensorElement]):
        self.params = params
        self.sigma = sigma
        self.calculus = sigma.calculus
        self.values = dict(values)

    def __repr__(self) -> str:
        return f"Connection({self.params.family} on {self.calculus.name})"

    def value(self, c: int) -> TensorElement:
        v = self.values.get(c)
        if v is None:
            return TensorElement(self.calculus, {}, (1, 1))
        return v


def connection_apply(D: Connection, omega: FormElement) -> TensorElement:
    """
    D(xi^a c) = sigma(xi^a (x) dc) + (D xi^a) c.

    Args:
        D: Connection
        omega: 1-form in D's calculus

    Returns:
        Rank 2 tensor
    """
    calc = D.calculus
    if omega.calculus is not calc or omega.degree != 1:
        raise GeometryError(f"connection on {calc.name} needs a 1-form of that calculus")
    total = TensorElement(calc, {}, (1, 1))
    for (a,), c in omega.terms.items():
        total = total + D.sigma.apply(calc.tensor(calc.basis(a), calc.d(c)))
        total = total + D.value(a) * c
    return total


def connection_extend(D: Connection, t: TensorElement) -> TensorElement:
    """D(xi (x) beta) = D xi (x) beta + sigma_12(xi (x) D beta)."""
    calc = D.calculus
    if t.shape != (1, 1):
        raise GeometryError(f"connection extension needs rank 2, got shape {t.shape}")
    total = TensorElement(calc, {}, (1, 1, 1))
    for (i, j), c in t.terms.items():
        beta = calc.basis(j, c)
        total = total + calc.tensor(D.value(i), beta)
        total = total + D.sigma.apply(calc.tensor(calc.basis(i), connection_apply(D, beta)), 0)
    return total


def torsion(D: Connection, omega: FormElement) -> FormElement:
    """Theta = d - pi D."""
    calc = D.calculus
    return calc.d(omega) - calc.wedge_projection(connection_apply(D, omega))


def curvature(D: Connection, omega: FormElement) -> TensorElement:
    """pi_12 D^2 omega, an element of Omega^2 (x) Omega^1."""
    calc = D.calculus
    return calc.project_first_pair(connection_extend(D, connection_apply(D, omega)))


def two_form_tensor(calculus: Calculus, b: int, omega: FormElement) -> TensorElement:
    """beta_b (x) omega for a wedge basis element beta_b and a 1-form omega."""
    return TensorElement(calculus, {(b, l): c for (l,), c in omega.terms.items()}, (2, 1))


def _require_frame(calculus: Calculus) -> None:
    if not calculus.is_frame:
        raise GeometryError(f"{calculus.name} is not a frame calculus")


def riemann_coeffs(D: Connection) -> Dict[Tuple[int, int, int, int], Scalar]:
    """
    R^i_{jkl} from pi_12 D^2 theta^i = -1/2 R^i_{jkl} theta^k theta^l (x) theta^j.

    Raises:
        GeometryError: For non-frame calculi or non-constant coefficients
    """
    calc = D.calculus
    _require_frame(calc)
    n = calc.dimension
    R = {key: ZERO for key in itertools.product(range(n), repeat=4)}
    for i in range(n):
        for (b, j), coeff in curvature(D, calc.basis(i)).terms.items():
            if not coeff.is_scalar():
                raise GeometryError(f"curvature coefficient {coeff} is not constant")
            value = coeff.scalar_value()
            k, l = calc.wedge_basis[b]
            R[(i, j, k, l)] = -value
            R[(i, j, l, k)] = value
    return R


# -- bilinear forms ---------------------------------------------------------------


@dataclass
class BilinearForm:
    """B(theta^i (x) theta^j) = B^{ij}, extended by right linearity."""

    calculus: Calculus
    matrix: Dict[Pair, AlgebraElement]
    symmetry: str = "none"
    name: str = "B"

    @classmethod
    def constant(cls, calculus: Calculus, rows: Sequence[Sequence[ScalarLike]],
                 symmetry: str = "none", name: str = "B") -> "BilinearForm":
        alg = calculus.algebra
        matrix = {
            (i, j): alg.scalar(value)
            for i, row in enumerate(rows) for j, value in enumerate(row)
        }
        return cls(calculus, matrix, symmetry, name)

    def entry(self, i: int, j: int) -> AlgebraElement:
        return self.matrix.get((i, j), self.calculus.algebra.zero())

    def apply(self, t: TensorElement) -> AlgebraElement:
        """Sum of B^{ij} c over the terms theta^i (x) theta^j c."""
        t = as_tensor(t)
        if t.shape != (1, 1):
            raise GeometryError(f"bilinear form needs a rank 2 tensor, got shape {t.shape}")
        total = self.calculus.algebra.zero()
        for (i, j), c in t.terms.items():
            total = total + self.entry(i, j) * c
        return total

    def apply_last(self, t: TensorElement) -> FormElement:
        """(1 (x) B) on a rank 3 tensor."""
        out: Dict[Tuple[int, ...], AlgebraElement] = {}
        zero = self.calculus.algebra.zero()
        for (i, j, k), c in t.terms.items():
            out[(i,)] = out.get((i,), zero) + self.entry(j, k) * c
        return FormElement(self.calculus, 1, out)

    def scalar_rows(self) -> List[List[Scalar]]:
        n = self.calculus.dimension
        try:
            return [[self.entry(i, j).scalar_value() for j in range(n)] for i in range(n)]
        except HPlaneError as e:
            raise GeometryError(f"{self.name} has non-constant entries: {str(e)}") from e

    def sympy_matrix(self) -> sympy.Matrix:
        return sympy.Matrix([[s.to_sympy() for s in row] for row in self.scalar_rows()])

    def is_nondegenerate(self) -> bool:
        """Invertible over the field of fractions of the scalars."""
        return sympy.simplify(self.sympy_matrix().det()) != 0

    def inverse_rows(self) -> List[List[Scalar]]:
        """
        Inverse of a constant matrix.

        Raises:
            GeometryError: If the inverse leaves the Laurent scalars
        """
        try:
            inv = self.sympy_matrix().inv()
            return [[Scalar.from_sympy(sympy.simplify(v)) for v in inv.row(i)]
                    for i in range(inv.rows)]
        except HPlaneError:
            raise
        except Exception as e:
            raise GeometryError(f"cannot invert {self.name}: {str(e)}") from e


def bilinear_apply(B: BilinearForm, t: TensorElement) -> AlgebraElement:
    return B.apply(t)


def compat_defect(D: Connection, B: BilinearForm) -> Dict[Pair, FormElement]:
    """
    (1 (x) B) D(xi^a (x) xi^b) - d B(xi^a (x) xi^b) for every basis pair.

    All values zero means D is compatible with B.
    """
    calc = D.calculus
    n = calc.dimension
    out = {}
    for a in range(n):
        for b in range(n):
            lhs = B.apply_last(connection_extend(D, calc.tensor_basis((a, b))))
            out[(a, b)] = lhs - calc.d(B.entry(a, b))
    return out


def lower_riemann(R: Mapping[Tuple[int, int, int, int], Scalar],
                  g: BilinearForm) -> Dict[Tuple[int, int, int, int], Scalar]:
    """R_{abcd} = g_{ae} R^e_{bcd}, g_{ae} the inverse of the matrix g^{ae}."""
    lower = g.inverse_rows()
    n = len(lower)
    out = {}
    for a, b, c, d in itertools.product(range(n), repeat=4):
        out[(a, b, c, d)] = sum((lower[a][e] * R[(e, b, c, d)] for e in range(n)), ZERO)
    return out


def ricci(D: Connection, g: BilinearForm) -> Dict[Pair, Scalar]:
    """R^a_b = sum R^c_{abd} g^{dc}: the upper index contracts the last lower one."""
    R = riemann_coeffs(D)
    upper = g.scalar_rows()
    n = len(upper)
    out = {}
    for a in range(n):
        for b in range(n):
            out[(a, b)] = sum(
                (R[(c, a, b, d)] * upper[d][c] for c in range(n) for d in range(n)), ZERO
            )
    return out


def lambda_sigma_triples(s: BraidMap, B: BilinearForm) -> Dict[Triple, FormElement]:
    """(1 (x) B) sigma_12 sigma_23 on every basis triple."""
    calc = s.calculus
    out = {}
    for triple in itertools.product(range(calc.dimension), repeat=3):
        t = s.apply(s.apply(calc.tensor_basis(triple), 1), 0)
        out[triple] = B.apply_last(t)
    return out


def symplectic_plane(calculus: Calculus = C_PLANE) -> BilinearForm:
    """Lambda(xi^a (x) xi^b) = [[h, 1], [-1, 0]]."""
    return BilinearForm.constant(calculus, [[H, 1], [-1, 0]], "skew", "Lambda")


# -- complex structure ----------------------------------------------------------


class ComplexStructure:
    """J theta^c = phase_c theta^c; on the plane J xi = i xi, J eta = -i eta."""

    def __init__(self, calculus: Calculus = C_PLANE, phases: Sequence[Scalar] = (I, -I)):
        self.calculus = calculus
        self.phases = [Scalar.coerce(p) for p in phases]

    def apply(self, omega: FormElement) -> FormElement:
        return FormElement(
            self.calculus, 1, {(c,): a * self.phases[c] for (c,), a in omega.terms.items()}
        )

    def metric(self, symplectic: BilinearForm) -> BilinearForm:
        """g with g(J xi^a (x) xi^b) = Lambda(xi^a (x) xi^b)."""
        n = self.calculus.dimension
        matrix = {
            (a, b): symplectic.entry(a, b) * self.phases[a].inverse()
            for a in range(n) for b in range(n)
        }
        return BilinearForm(self.calculus, matrix, "symmetric", "g")

    def metric_prime(self, symplectic: BilinearForm) -> BilinearForm:
        """g' with g'(xi^a (x) xi^b) = Lambda(xi^a (x) J xi^b)."""
        n = self.calculus.dimension
        matrix = {
            (a, b): symplectic.entry(a, b) * self.phases[b]
            for a in range(n) for b in range(n)
        }
        return BilinearForm(self.calculus, matrix, "symmetric", "g'")

    def vartheta(self) -> List[FormElement]:
        """sqrt(2) vartheta^1 = xi + i eta and sqrt(2) vartheta^2 = i xi + eta."""
        calc = self.calculus
        xi, eta = calc.basis("xi"), calc.basis("eta")
        return [xi + eta * I, xi * I + eta]


def vartheta_matrix(J: ComplexStructure, B: BilinearForm) -> List[List[AlgebraElement]]:
    """B(vartheta^a (x) vartheta^b); the 1/sqrt(2) factors give an overall 1/2."""
    calc = J.calculus
    basis = J.vartheta()
    half = Scalar.const(Fraction(1, 2))
    return [[B.apply(calc.tensor(a, b)) * half for b in basis] for a in basis]


def hermitian_form(J: ComplexStructure, symplectic: BilinearForm) -> BilinearForm:
    """H = g' + i Lambda."""
    gp = J.metric_prime(symplectic)
    n = J.calculus.dimension
    matrix = {
        (a, b): gp.entry(a, b) + symplectic.entry(a, b) * I
        for a in range(n) for b in range(n)
    }
    return BilinearForm(J.calculus, matrix, "none", "H")


# -- skew derivatives -------------------------------------------------------------


class SkewDerivativeSystem:
    """partial_a f = Lambda(eta_a (x) df) with eta_a = (-eta, xi + h eta)."""

    def __init__(self, calculus: Calculus = C_PLANE, symplectic: Optional[BilinearForm] = None):
        self.calculus = calculus
        self.symplectic = symplectic or symplectic_plane(calculus)
        xi, eta = calculus.basis("xi"), calculus.basis("eta")
        self.covectors = [-eta, xi + eta * H]

    def derivative(self, a: int, f: AlgebraElement) -> AlgebraElement:
        calc = self.calculus
        return self.symplectic.apply(calc.tensor(self.covectors[a], calc.d(f)))


def skew_derivative(system: SkewDerivativeSystem, a: int, f: AlgebraElement) -> AlgebraElement:
    return system.derivative(a, f)


def wess_zumino_defect(system: SkewDerivativeSystem, a: int, b: int,
                       f: AlgebraElement) -> AlgebraElement:
    """partial_a(x^b f) - delta_a^b f - R^{bd}_{ac} x^c partial_d f."""
    R = plane_rmatrix()
    gens = system.calculus.algebra.gens()
    lhs = system.derivative(a, gens[b] * f)
    rhs = f if a == b else system.calculus.algebra.zero()
    for c in range(2):
        for d in range(2):
            r = R.get((b, d), {}).get((a, c))
            if r:
                rhs = rhs + gens[c] * system.derivative(d, f) * r
    return lhs - rhs


# -- frames ---------------------------------------------------------------------------


def antisymmetrizer(n: int) -> Dict[Tuple[int, int, int, int], Scalar]:
    """P^{ij}_{kl} = 1/2 (delta^i_k delta^j_l - delta^i_l delta^j_k)."""
    half = Scalar.const(Fraction(1, 2))
    out = {}
    for i, j, k, l in itertools.product(range(n), repeat=4):
        value = (1 if (i, j) == (k, l) else 0) - (1 if (i, j) == (l, k) else 0)
        out[(i, j, k, l)] = half * value
    return out


@dataclass
class FrameData:
    """lambda_i with the arrays P^{ij}_{kl}, F^k_{ij} (keyed (k, i, j)) and K_{ij}."""

    lambdas: List[AlgebraElement]
    P: Dict[Tuple[int, int, int, int], Scalar]
    F: Dict[Triple, Scalar]
    K: Dict[Pair, Scalar] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.lambdas)

    def structure(self) -> Dict[Triple, AlgebraElement]:
        """C^i_{jk} = F^i_{jk} - 2 lambda_l P^{(li)}_{jk}."""
        n = self.size
        alg = self.lambdas[0].algebra
        C = {}
        for i, j, k in itertools.product(range(n), repeat=3):
            value = alg.scalar(self.F.get((i, j, k), ZERO))
            for l in range(n):
                sym = (self.P[(l, i, j, k)] + self.P[(i, l, j, k)]) * Fraction(1, 2)
                if sym:
                    value = value - self.lambdas[l] * (sym * 2)
            C[(i, j, k)] = value
        return C


def frame_data(calculus: Calculus) -> FrameData:
    _require_frame(calculus)
    return FrameData(list(calculus.lambdas), antisymmetrizer(calculus.dimension),
                     dict(calculus.structure))


def stehbein_check(fd: FrameData, calculus: Optional[Calculus] = None,
                   prefix: str = "frame") -> List[CheckRecord]:
    """
    Frame consistency conditions.

    Checks 2 lambda_k lambda_l P^{kl}_{ij} - lambda_k F^k_{ij} - K_{ij} = 0,
    P^2 = P, P C = C, P K = K, (S + 1) P = 0 for the flip, and, when a calculus
    is given, C against its structure constants and against d of the
    represented frame.
    """
    n = fd.size
    alg = fd.lambdas[0].algebra
    records = []
    for i, j in itertools.product(range(n), repeat=2):
        value = alg.zero()
        for k, l in itertools.product(range(n), repeat=2):
            p = fd.P[(k, l, i, j)]
            if p:
                value = value + fd.lambdas[k] * fd.lambdas[l] * (p * 2)
        for k in range(n):
            f = fd.F.get((k, i, j), ZERO)
            if f:
                value = value - fd.lambdas[k] * f
        value = value - fd.K.get((i, j), ZERO)
        records.append(vanishes(f"{prefix}.quadratic.{i + 1}{j + 1}",
                                "2 lambda lambda P - lambda F - K = 0", value))

    def p_times(arr, key_fn):
        return {
            key: sum((fd.P[(a, b) + key[-2:]] * arr.get(key_fn(key, a, b), ZERO)
                      for a in range(n) for b in range(n)), ZERO)
            for key in arr
        }

    square = {
        key: sum((fd.P[key[:2] + (a, b)] * fd.P[(a, b) + key[2:]]
                  for a in range(n) for b in range(n)), ZERO)
        for key in fd.P
    }
    records.append(truth(f"{prefix}.projector", "P^2 = P", square == fd.P))

    C = fd.structure()
    constant = all(c.is_scalar() for c in C.values())
    records.append(truth(f"{prefix}.structure.constant", "C^i_jk are numbers", constant))
    if constant:
        C_scalar = {key: c.scalar_value() for key, c in C.items()}
        PC = p_times(C_scalar, lambda key, a, b: (key[0], a, b))
        records.append(truth(f"{prefix}.projector.C", "P C = C",
                             all(PC[key] == C_scalar[key] for key in C_scalar)))
        K_full = {(i, j): fd.K.get((i, j), ZERO) for i in range(n) for j in range(n)}
        PK = p_times(K_full, lambda key, a, b: (a, b))
        records.append(truth(f"{prefix}.projector.K", "P K = K",
                             all(PK[key] == K_full[key] for key in K_full)))
        if calculus is not None:
            same = all(calculus.structure.get(key, ZERO) == C_scalar[key] for key in C_scalar)
            records.append(truth(f"{prefix}.structure.calculus",
                                 "C matches the calculus structure constants", same))

    flip_ok = True
    for i, j, m, q in itertools.product(range(n), repeat=4):
        if fd.P[(j, i, m, q)] + fd.P[(i, j, m, q)]:
            flip_ok = False
    records.append(truth(f"{prefix}.flip", "(S + 1) P = 0 for the flip", flip_ok))

    if calculus is not None:
        for c, rep in sorted(calculus.representations.items()):
            lhs = calculus.zero(2)
            for f, g in rep:
                lhs = lhs + calculus.wedge(calculus.d(f), calculus.d(g))
            records.append(compare(f"{prefix}.dtheta.{c + 1}",
                                   "d theta^i = -1/2 C^i_jk theta^j theta^k",
                                   lhs, calculus.d_cogenerator(c)))
    return records


# -- concrete connections --------------------------------------------------------


def plane_braid(calculus: Calculus = C_PLANE, hp: Optional[Scalar] = None) -> BraidMap:
    return BraidMap.from_rmatrix(calculus, plane_rmatrix(H, hp))


def plane_connection(mu: ScalarLike, rho: ScalarLike, calculus: Calculus = C_PLANE) -> Connection:
    """D xi^a = mu x^a kappa (x) kappa + rho (xi^a (x) kappa + kappa (x) xi^a)."""
    mu, rho = Scalar.coerce(mu), Scalar.coerce(rho)
    k = kappa(calculus)
    kk = calculus.tensor(k, k)
    values = {}
    for a, x_a in enumerate(calculus.algebra.gens()):
        xi_a = calculus.basis(a)
        value = calculus.left_mul(x_a, kk) * mu
        value = value + (calculus.tensor(xi_a, k) + calculus.tensor(k, xi_a)) * rho
        values[a] = value
    return Connection(ConnectionParams("plane", mu, rho), plane_braid(calculus), values)


def plane_curvature_forms(mu: ScalarLike, calculus: Calculus = C_PLANE) -> List[List[AlgebraElement]]:
    """Omega^a_b = 4 mu [[xy, -x^2 + hxy], [y^2, -yx + hy^2]] as coefficients of xi eta."""
    mu = Scalar.coerce(mu)
    x, y = calculus.algebra.gens()
    rows = [[x * y, -(x * x) + x * y * H], [y * y, -(y * x) + y * y * H]]
    return [[entry * (mu * 4) for entry in row] for row in rows]


def expected_plane_curvature(mu: ScalarLike, a: int, calculus: Calculus = C_PLANE) -> TensorElement:
    """-Omega^a_b (x) xi^b."""
    total = TensorElement(calculus, {}, (2, 1))
    for b, omega in enumerate(plane_curvature_forms(mu, calculus)[a]):
        total = total - two_form_tensor(calculus, 0, calculus.left_mul(omega, calculus.basis(b)))
    return total


def ext_flat_connection(calculus: Calculus = C_EXT2) -> Connection:
    """D theta^a = 0 with the flip."""
    return Connection(ConnectionParams("ext_flat"), BraidMap.flip(calculus), {})


def ext_levicivita_connection(calculus: Calculus = C_EXT2) -> Connection:
    """D theta^1 = -theta^1 (x) theta^2, D theta^2 = theta^1 (x) theta^1."""
    values = {
        0: -calculus.tensor_basis((0, 1)),
        1: calculus.tensor_basis((0, 0)),
    }
    return Connection(ConnectionParams("ext_levicivita"), BraidMap.flip(calculus), values)


def frame_connection(calculus: Calculus, omega: Mapping[Triple, ScalarLike],
                     sigma: Optional[BraidMap] = None) -> Connection:
    """D theta^a = -omega^a_{bc} theta^b (x) theta^c."""
    values: Dict[int, TensorElement] = {}
    for (a, b, c), w in omega.items():
        w = Scalar.coerce(w)
        if w:
            term = calculus.tensor_basis((b, c)) * (-w)
            values[a] = values[a] + term if a in values else term
    return Connection(ConnectionParams("frame"), sigma or BraidMap.flip(calculus), values)


def make_connection(params: ConnectionParams) -> Connection:
    """
    Build a connection from its family parameters.

    Raises:
        GeometryError: For unknown families or invalid n
    """
    if params.family == "plane":
        return plane_connection(params.mu, params.rho)
    if params.family == "plane2":
        return plane2_connection(params.n, params.case, params.mu, params.rho)
    if params.family == "ext_flat":
        return ext_flat_connection()
    if params.family == "ext_levicivita":
        return ext_levicivita_connection()
    raise GeometryError(f"unknown connection family '{params.family}'")


def ext_metric(calculus: Calculus = C_EXT2) -> BilinearForm:
    """g(theta^a (x) theta^b) = delta^{ab}."""
    n = calculus.dimension
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return BilinearForm.constant(calculus, rows, "symmetric", "g")


def ext_symplectic_frame(calculus: Calculus = C_EXT2) -> BilinearForm:
    """Lambda(theta^1 (x) theta^2) = 1 = -Lambda(theta^2 (x) theta^1)."""
    return BilinearForm.constant(calculus, [[0, 1], [-1, 0]], "skew", "Lambda")


def xi_eta_in_frame(calculus: Calculus = C_EXT2) -> Tuple[FormElement, FormElement]:
    """xi = dx and eta = dy computed in the frame calculus."""
    x, y = calculus.algebra.gens()
    return calculus.d(x), calculus.d(y)


def frame_in_xi_eta(calculus: Calculus = C_EXT_XY) -> Tuple[FormElement, FormElement]:
    """theta^1 = y xi - (x - h y) eta and theta^2 = 2 y^-1 eta."""
    x, y = calculus.algebra.gens()
    xi, eta = calculus.basis("xi"), calculus.basis("eta")
    theta1 = y * xi - (x - y * H) * eta
    theta2 = (y.inverse() * 2) * eta
    return theta1, theta2


def transported_symplectic(calculus: Calculus = C_EXT_XY) -> List[List[AlgebraElement]]:
    """Lambda of the (xi, eta) basis evaluated on theta^a (x) theta^b."""
    lam = symplectic_plane(calculus)
    thetas = frame_in_xi_eta(calculus)
    return [[lam.apply(calculus.tensor(a, b)) for b in thetas] for a in thetas]


# -- two-parameter families ------------------------------------------------------


@lru_cache(maxsize=None)
def plane2_calculus(n: int, case: str) -> Calculus:
    """C_plane2 with h' = n h (case "n") or h' = n h / 2 (case "n/2")."""
    hp = H * n if case == "n" else H * Fraction(n, 2)
    label = f"{n}h" if case == "n" else f"{n}h/2"
    return plane_calculus(f"plane2[h'={label}]", P_PLANE2, hp=hp)


def _validate_n(n: int, case: str) -> None:
    if case == "n":
        if not isinstance(n, int) or n < 2:
            raise GeometryError(f"invalid n = {n} for h' = n h (need n >= 2)")
    elif case == "n/2":
        if not isinstance(n, int) or n < 3 or n % 2 == 0:
            raise GeometryError(f"invalid n = {n} for h' = n h / 2 (need odd n >= 3)")
    else:
        raise GeometryError(f"unknown case '{case}' (use 'n' or 'n/2')")


def varpi(n: int, case: str) -> TensorElement:
    """
    The 1-forms varpi of the two-parameter families.

    h' = n h:      y^(n-2) (kappa (x) eta + eta (x) kappa)
    h' = n h / 2:  y^(n-2) kappa (x) kappa - (n-2)/2 h y^(n-1) eta (x) kappa
    """
    _validate_n(n, case)
    calc = plane2_calculus(n, case)
    _, y = calc.algebra.gens()
    k = kappa(calc)
    eta = calc.basis("eta")
    if case == "n":
        return calc.left_mul(y ** (n - 2), calc.tensor(k, eta) + calc.tensor(eta, k))
    first = calc.left_mul(y ** (n - 2), calc.tensor(k, k))
    second = calc.left_mul(y ** (n - 1), calc.tensor(eta, k)) * (H * Fraction(n - 2, 2))
    return first - second


def plane2_connection(n: int, case: str, mu: ScalarLike, rho: ScalarLike = 0) -> Connection:
    """
    The torsion-free families claimed for the two-parameter calculus.

    h' = n h:      mu x^a (y^(2n-2) kappa (x) kappa - (n-1) h y^(2n-1) eta (x) kappa)
                   + rho x^a y^(n-2) (kappa (x) eta + eta (x) kappa)
    h' = n h / 2:  mu x^a varpi
    """
    _validate_n(n, case)
    mu, rho = Scalar.coerce(mu), Scalar.coerce(rho)
    calc = plane2_calculus(n, case)
    _, y = calc.algebra.gens()
    k = kappa(calc)
    eta = calc.basis("eta")
    if case == "n":
        mu_part = calc.left_mul(y ** (2 * n - 2), calc.tensor(k, k))
        mu_part = mu_part - calc.left_mul(y ** (2 * n - 1), calc.tensor(eta, k)) * (H * (n - 1))
        rho_part = varpi(n, case)
    else:
        mu_part = varpi(n, case)
        rho_part = TensorElement(calc, {}, (1, 1))
        if rho:
            raise GeometryError("the h' = n h / 2 family has no rho parameter")
    values = {}
    for a, x_a in enumerate(calc.algebra.gens()):
        values[a] = calc.left_mul(x_a, mu_part) * mu + calc.left_mul(x_a, rho_part) * rho
    hp = H * n if case == "n" else H * Fraction(n, 2)
    return Connection(ConnectionParams("plane2", mu, rho, n, case), plane_braid(calc, hp), values)


def varpi_check(n: int, case: str) -> List[CheckRecord]:
    """
    Check pi(varpi) = 0, x^a varpi = varpi x^a and torsion-freeness of the families.

    Every mismatch is emitted with status "reported". The one-parameter kappa
    is not central once h' != h (x kappa - kappa x = (h' - h)(xi y^2 - eta (x y + h y^2))),
    so its centrality is reported alongside.

    Raises:
        GeometryError: "invalid n" outside the family's range
    """
    _validate_n(n, case)
    calc = plane2_calculus(n, case)
    tag = f"plane2.{'n' if case == 'n' else 'half'}.n{n}"
    w = varpi(n, case)
    k = kappa(calc)
    records = [vanishes(f"{tag}.varpi.pi", "pi(varpi) = 0", calc.wedge_projection(w), True)]
    for a, x_a in enumerate(calc.algebra.gens()):
        records.append(compare(f"{tag}.varpi.central.{x_a}", "x^a varpi = varpi x^a",
                               calc.left_mul(x_a, w), w * x_a, True))
        records.append(compare(f"{tag}.kappa.central.{x_a}", "x^a kappa = kappa x^a",
                               calc.left_mul(x_a, k), k * x_a, True))
    parts = [("mu", 1, 0)]
    if case == "n":
        parts.append(("rho", 0, 1))
    for label, mu, rho in parts:
        D = plane2_connection(n, case, mu, rho)
        for a in range(2):
            name = calc.cogenerators[a]
            records.append(vanishes(f"{tag}.torsion.{label}.{name}", "Theta(xi^a) = 0",
                                    torsion(D, calc.basis(a)), True))
    logger.debug("varpi check %s: %d records", tag, len(records))
    return records


# -- unique connection solver ----------------------------------------------------------


@dataclass
class SolverResult:
    """Solutions of the constant-coefficient connection equations."""

    unknowns: List[Triple]
    rank: int
    consistent: bool
    particular: Dict[Triple, Scalar] = field(default_factory=dict)

    @property
    def nullity(self) -> int:
        return len(self.unknowns) - self.rank

    @property
    def count(self) -> Union[int, float]:
        """Number of solutions: 0, 1 or infinity."""
        if not self.consistent:
            return 0
        return 1 if self.nullity == 0 else float("inf")


def _frame_residual(calculus: Calculus, sigma: BraidMap, metric: BilinearForm,
                    omega: Mapping[Triple, Scalar], structure_zero: bool) -> List[Scalar]:
    D = frame_connection(calculus, omega, sigma)
    n = calculus.dimension
    out: List[Scalar] = []
    for a in range(n):
        theta = calculus.basis(a)
        value = -calculus.wedge_projection(connection_apply(D, theta))
        if not structure_zero:
            value = value + calculus.d(theta)
        for b in range(len(calculus.wedge_basis)):
            out.append(value.coefficient((b,)).scalar_value())
    defects = compat_defect(D, metric)
    for pair in sorted(defects):
        for c in range(n):
            out.append(defects[pair].coefficient((c,)).scalar_value())
    return out


def unique_connection_solver(calculus: Calculus = C_EXT2, sigma: Optional[BraidMap] = None,
                             metric: Optional[BilinearForm] = None,
                             structure_zero: bool = False) -> SolverResult:
    """
    Solve torsion-freeness and metric compatibility for constant omega^a_{bc}.

    Args:
        calculus: Frame calculus
        sigma: Braid map (flip by default)
        metric: Metric (delta by default)
        structure_zero: Solve against d theta = 0 instead of the calculus structure

    Returns:
        Rank, consistency and the particular solution (free parameters set to 0)
    """
    _require_frame(calculus)
    sigma = sigma or BraidMap.flip(calculus)
    metric = metric or ext_metric(calculus)
    n = calculus.dimension
    unknowns = list(itertools.product(range(n), repeat=3))
    base = _frame_residual(calculus, sigma, metric, {}, structure_zero)
    columns = []
    for u in unknowns:
        values = _frame_residual(calculus, sigma, metric, {u: ONE}, structure_zero)
        columns.append([v - b for v, b in zip(values, base)])
    A = sympy.Matrix([[columns[j][i].to_sympy() for j in range(len(unknowns))]
                      for i in range(len(base))])
    rhs = sympy.Matrix([(-b).to_sympy() for b in base])
    rank = A.rank()
    logger.debug("connection solver on %s: %d equations, rank %d", calculus.name, len(base), rank)
    try:
        solution, params = A.gauss_jordan_solve(rhs)
    except ValueError:
        return SolverResult(unknowns, rank, False)
    solution = solution.subs({p: 0 for p in params})
    particular = {
        u: Scalar.from_sympy(sympy.simplify(solution[k])) for k, u in enumerate(unknowns)
    }
    return SolverResult(unknowns, rank, True, {u: v for u, v in particular.items() if v})
