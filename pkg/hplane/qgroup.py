"""
The quantum group GL_h(2) and its coaction on the h-plane.

The matrix T = [[A, B], [C, D]] has entries subject to six relations,
oriented as rewrite rules for the order A < B < C < D:

    B A -> A B + h A^2 - h A D + h B C - h^2 A C
    C A -> A C - h C^2
    D A -> A D - h C D + h A C - h^2 C^2
    C B -> B C - h C D - h A C
    D B -> B D - h D^2 + h A D - h B C + h^2 A C
    D C -> C D + h C^2

The quantum determinant delta = A D - B C + h A C is not a generator; its
centrality is checked, not assumed.

Example:
    >>> from hplane.qgroup import reduce_qgroup
    >>> str(reduce_qgroup("CA"))
    'A*C - h*C^2'
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .calculus import Calculus, FormElement, plane_rmatrix
from .ncalg import (
    P_PLANE,
    AlgebraElement,
    Generator,
    Homomorphism,
    Presentation,
    commutator,
    letter_swap,
    tensor_presentation,
)
from .report import CheckRecord, compare, vanishes
from .scalar import H, ONE, Scalar

logger = logging.getLogger(__name__)

A, B, C, D = 0, 1, 2, 3

# (j, i) -> words replacing g_j g_i, j > i
QGROUP_RULES = {
    (B, A): [
        (((A, 1), (B, 1)), ONE),
        (((A, 2),), H),
        (((A, 1), (D, 1)), -H),
        (((B, 1), (C, 1)), H),
        (((A, 1), (C, 1)), -(H * H)),
    ],
    (C, A): [
        (((A, 1), (C, 1)), ONE),
        (((C, 2),), -H),
    ],
    (D, A): [
        (((A, 1), (D, 1)), ONE),
        (((C, 1), (D, 1)), -H),
        (((A, 1), (C, 1)), H),
        (((C, 2),), -(H * H)),
    ],
    (C, B): [
        (((B, 1), (C, 1)), ONE),
        (((C, 1), (D, 1)), -H),
        (((A, 1), (C, 1)), -H),
    ],
    (D, B): [
        (((B, 1), (D, 1)), ONE),
        (((D, 2),), -H),
        (((A, 1), (D, 1)), H),
        (((B, 1), (C, 1)), -H),
        (((A, 1), (C, 1)), H * H),
    ],
    (D, C): [
        (((C, 1), (D, 1)), ONE),
        (((C, 2),), H),
    ],
}

P_QGROUP = Presentation("qgroup", [Generator(n) for n in "ABCD"], letter_swap(QGROUP_RULES))
P_QPLANE = tensor_presentation("qgroup_plane", P_QGROUP, P_PLANE)

SYMPLECTIC_MATRIX = [[H, ONE], [-ONE, Scalar()]]


def reduce_qgroup(word: Union[str, Iterable[Tuple[Union[str, int], int]]]) -> AlgebraElement:
    """
    Normal form of a word in A, B, C, D.

    Args:
        word: A string of letters ("BA") or (generator, exponent) pairs

    Returns:
        The reduced element
    """
    if isinstance(word, str):
        word = [(letter, 1) for letter in word.replace(" ", "").replace("*", "")]
    return P_QGROUP.word(word)


def matrix_entries(algebra: Presentation = P_QGROUP) -> List[List[AlgebraElement]]:
    """T = [[A, B], [C, D]] in ``algebra`` (P_QGROUP or P_QPLANE)."""
    a, b, c, d = (algebra.gen(n) for n in "ABCD")
    return [[a, b], [c, d]]


def delta(algebra: Presentation = P_QGROUP) -> AlgebraElement:
    """delta = A D - B C + h A C."""
    (a, b), (c, d) = matrix_entries(algebra)
    return a * d - b * c + a * c * H


def rule_element(j: int, i: int) -> AlgebraElement:
    """Right-hand side of the rule for g_j g_i as an element."""
    total = P_QGROUP.zero()
    for word, coeff in QGROUP_RULES[(j, i)]:
        total = total + P_QGROUP.word(word, coeff)
    return total


def check_determinant_central() -> List[CheckRecord]:
    """[delta, g] = 0 for every generator and the two delta expressions agree."""
    dlt = delta()
    (a, b), (c, d) = matrix_entries()
    records = []
    for name, g in zip("ABCD", (a, b, c, d)):
        records.append(vanishes(f"qgroup.delta.central.{name}", "[delta, g] = 0",
                                commutator(dlt, g)))
    records.append(vanishes("qgroup.delta.central.delta", "[delta, delta] = 0",
                            commutator(dlt, dlt)))
    first = a * d - c * b - c * d * H
    second = d * a - c * b - c * a * H
    records.append(compare("qgroup.delta.forms", "AD - CB - hCD = DA - CB - hCA",
                           first, second))
    records.append(compare("qgroup.delta.expanded", "AD - CB - hCD = AD - BC + hAC",
                           first, dlt))
    return records


def check_relations_stable() -> List[CheckRecord]:
    """
    Every relation survives multiplication by generators on both sides.

    g (g_j g_i) g' and g (rhs) g' are reduced independently and compared.
    """
    gens = P_QGROUP.gens()
    records = []
    for (j, i) in sorted(QGROUP_RULES):
        rhs = rule_element(j, i)
        lhs_word = P_QGROUP.gen("ABCD"[j]) * P_QGROUP.gen("ABCD"[i])
        worst = P_QGROUP.zero()
        for left in gens:
            for right in gens:
                defect = left * lhs_word * right - left * rhs * right
                if defect:
                    worst = defect
        label = "ABCD"[j] + "ABCD"[i]
        records.append(vanishes(f"qgroup.relation.{label}",
                                f"g ({label}) g' reduces consistently", worst))
    return records


# -- coaction -------------------------------------------------------------------


def coaction_images(algebra: Presentation = P_QPLANE) -> Tuple[AlgebraElement, AlgebraElement]:
    """x' = A x + B y and y' = C x + D y in the tensor algebra."""
    (a, b), (c, d) = matrix_entries(algebra)
    x, y = algebra.gen("x"), algebra.gen("y")
    return a * x + b * y, c * x + d * y


def plane_relation(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """x y - y x - h y^2."""
    return x * y - y * x - y * y * H


def specialize(element: AlgebraElement, values: Dict[str, AlgebraElement]) -> AlgebraElement:
    """Substitute elements of P_PLANE for A, B, C, D in a P_QPLANE element."""
    images = dict(values)
    images.update({"x": P_PLANE.gen("x"), "y": P_PLANE.gen("y")})
    return Homomorphism(P_QPLANE, P_PLANE, images)(element)


@lru_cache(maxsize=None)
def qplane_calculus() -> Calculus:
    """
    The plane calculus over GL_h(2) (x) plane.

    A, B, C, D have zero differential and commute with xi and eta.
    """
    alg = P_QPLANE
    rules = {}
    for g in range(4):
        letter = alg.word([(g, 1)])
        for c in range(2):
            rules[(g, 1, c)] = {c: letter}
    coords = [alg.gen("x"), alg.gen("y")]
    for (a, b), row in plane_rmatrix().items():
        entry: Dict[int, AlgebraElement] = {}
        for (c, dd), s in row.items():
            entry[c] = entry.get(c, alg.zero()) + coords[dd] * s
        rules[(4 + a, 1, b)] = entry
    wedge_table = {(0, 0): {0: H}, (0, 1): {0: 1}, (1, 0): {0: -1}, (1, 1): {}}
    return Calculus("qgroup_plane", alg, ["xi", "eta"], wedge_table, [(0, 1)],
                    swap_rules=rules, differentials={"x": 0, "y": 1},
                    constants=("A", "B", "C", "D"))


def coaction_forms(calculus: Calculus) -> Tuple[FormElement, FormElement]:
    """xi' = A xi + B eta and eta' = C xi + D eta."""
    (a, b), (c, d) = matrix_entries(calculus.algebra)
    xi, eta = calculus.basis("xi"), calculus.basis("eta")
    return a * xi + b * eta, c * xi + d * eta


def coaction_check() -> List[CheckRecord]:
    """
    The coaction preserves x y - y x = h y^2.

    Also checks the unit matrix specialization and computes kappa' against
    delta kappa (reported only).
    """
    xp, yp = coaction_images()
    records = [vanishes("qgroup.coaction.plane", "x'y' - y'x' - h y'^2 = 0",
                        plane_relation(xp, yp))]
    one, zero = P_PLANE.one(), P_PLANE.zero()
    unit = {"A": one, "B": zero, "C": zero, "D": one}
    x, y = P_PLANE.gens()
    records.append(compare("qgroup.coaction.unit.x", "T = 1 gives x' = x", specialize(xp, unit), x))
    records.append(compare("qgroup.coaction.unit.y", "T = 1 gives y' = y", specialize(yp, unit), y))
    records.append(vanishes("qgroup.coaction.unit.relation",
                            "T = 1 preserves the plane relation",
                            plane_relation(specialize(xp, unit), specialize(yp, unit))))

    calc = qplane_calculus()
    xi_p, eta_p = coaction_forms(calc)
    xi, eta = calc.basis("xi"), calc.basis("eta")
    kappa = calc.algebra.gen("x") * eta - calc.algebra.gen("y") * xi \
        - (calc.algebra.gen("y") * H) * eta
    kappa_p = xp * eta_p - yp * xi_p - (yp * H) * eta_p
    records.append(compare("qgroup.coaction.kappa", "kappa' = delta kappa",
                           kappa_p, kappa * delta(calc.algebra), report_only=True))
    return records


def coaction_form_check() -> List[CheckRecord]:
    """The 1-form coaction preserves xi^2 = h xi eta, xi eta = -eta xi, eta^2 = 0."""
    calc = qplane_calculus()
    xi_p, eta_p = coaction_forms(calc)
    records = [
        compare("qgroup.forms.xi-xi", "xi'xi' = h xi'eta'",
                calc.wedge(xi_p, xi_p), calc.wedge(xi_p, eta_p) * H),
        vanishes("qgroup.forms.eta-eta", "eta'eta' = 0", calc.wedge(eta_p, eta_p)),
        vanishes("qgroup.forms.anticommute", "xi'eta' + eta'xi' = 0",
                 calc.wedge(xi_p, eta_p) + calc.wedge(eta_p, xi_p)),
        compare("qgroup.forms.determinant", "xi'eta' = delta xi eta",
                calc.wedge(xi_p, eta_p), calc.basis2(0, delta(calc.algebra))),
    ]
    return records


# -- Sp_h(1) = SL_h(2) ---------------------------------------------------------


def twisted_symplectic(T: Sequence[Sequence[AlgebraElement]],
                       symplectic: Sequence[Sequence[Scalar]] = SYMPLECTIC_MATRIX
                       ) -> List[List[AlgebraElement]]:
    """(T Lambda T^t)^{ab} = sum T^a_c Lambda^{cd} T^b_d."""
    alg = T[0][0].algebra
    out = []
    for a in range(2):
        row = []
        for b in range(2):
            total = alg.zero()
            for c in range(2):
                for d in range(2):
                    if symplectic[c][d]:
                        total = total + T[a][c] * T[b][d] * symplectic[c][d]
            row.append(total)
        out.append(row)
    return out


def check_symplectic_group() -> List[CheckRecord]:
    """T Lambda T^t = delta Lambda entrywise, so Sp_h(1) = SL_h(2)."""
    twisted = twisted_symplectic(matrix_entries())
    dlt = delta()
    records = []
    for a in range(2):
        for b in range(2):
            records.append(compare(f"qgroup.symplectic.{a + 1}{b + 1}",
                                   "T Lambda T^t = delta Lambda",
                                   twisted[a][b], dlt * SYMPLECTIC_MATRIX[a][b]))
    one, zero = P_PLANE.one(), P_PLANE.zero()
    unit = twisted_symplectic([[one, zero], [zero, one]])
    for a in range(2):
        for b in range(2):
            records.append(compare(f"qgroup.symplectic.unit.{a + 1}{b + 1}", "T = 1 gives Lambda",
                                   unit[a][b], P_PLANE.scalar(SYMPLECTIC_MATRIX[a][b])))
    logger.debug("symplectic group check: %d records", len(records))
    return records
