"""
Verification suites.

A suite is a list of check groups; each group is a function that receives a
SuiteContext and returns CheckRecords. Groups are independent, so they may run
on a thread pool, and every group draws its random numbers from its own
generator seeded by (seed, group id). The final report is sorted by check_id,
which makes the output independent of scheduling.

Suites:
    plane-calculus   normal forms, wedge, d and engine health on every calculus
    sigma-braid      R-matrices, braid maps and the kappa identities
    connections      the (mu, rho) family and the two-parameter families
    symplectic       Lambda, g, g', J, H and the skew derivatives
    qgroup           GL_h(2), its determinant and coaction
    extended         frame, metric and connections of the extended plane
    three-calculus   the three-frame calculus and the Lie derivatives
    climit           the commutative limit
    all              every group above

Configuration (hplane/config.json):
    {"suite_settings": {"seed": 1729, "jobs": 1},
     "random_cases": {...sample counts...},
     "connections": {"parameters": [["1", "0"], ...], "varpi_n": [...], ...}}

Example:
    >>> from hplane.suites import run_suite
    >>> report = run_suite("sigma-braid")
    >>> report.ok
    True
"""

import json
import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import climit
from .calculus import (
    C_EXT2,
    C_EXT3,
    C_EXT_XY,
    C_PLANE,
    C_PLANE2,
    Calculus,
    Derivation,
    TensorElement,
    ext_frame_lambdas,
    plane_rmatrix,
)
from .exceptions import ScalarError, SuiteError
from .geometry import (
    BraidMap,
    ComplexStructure,
    FrameData,
    SkewDerivativeSystem,
    antisymmetrizer,
    braid_defects,
    compat_defect,
    connection_apply,
    connection_extend,
    curvature,
    expected_plane_curvature,
    ext_flat_connection,
    ext_levicivita_connection,
    ext_metric,
    ext_symplectic_frame,
    frame_data,
    frame_in_xi_eta,
    hermitian_form,
    kappa,
    kappa_sigma_table,
    lambda_sigma_triples,
    lower_riemann,
    plane_braid,
    plane_connection,
    ricci,
    riemann_coeffs,
    sigma_action_table,
    skew_derivative,
    stehbein_check,
    symplectic_plane,
    torsion,
    transported_symplectic,
    two_form_tensor,
    unique_connection_solver,
    varpi_check,
    vartheta_matrix,
    wess_zumino_defect,
    xi_eta_in_frame,
    ybe_defects,
)
from .ncalg import P_EXT, P_PLANE, P_PLANE2, P_UV, AlgebraElement, commutator, confluence_failures, ext_uvw
from .qgroup import (
    P_QGROUP,
    check_determinant_central,
    check_relations_stable,
    check_symplectic_group,
    coaction_check,
    coaction_form_check,
    reduce_qgroup,
)
from .report import (
    FAIL,
    PASS,
    CheckRecord,
    Report,
    compare,
    error_record,
    nonzero,
    truth,
    vanishes,
)
from .scalar import H, HP, I, Scalar

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = Path(__file__).with_name("config.json")
SEED_ENV = "HPLANE_SEED"


@dataclass
class SuiteContext:
    """Seed and settings shared by the check groups of one run."""

    seed: int
    random_cases: Dict[str, Any] = field(default_factory=dict)
    connections: Dict[str, Any] = field(default_factory=dict)

    def rng(self, group: str) -> random.Random:
        return random.Random(f"{self.seed}:{group}")

    def cases(self, key: str) -> int:
        try:
            return int(self.random_cases[key])
        except (KeyError, TypeError, ValueError) as e:
            raise SuiteError(f"missing or invalid random_cases.{key} in configuration") from e

    def parameters(self) -> List[Tuple[Scalar, Scalar]]:
        return [(Scalar.parse_rational(str(mu)), Scalar.parse_rational(str(rho)))
                for mu, rho in self.connections.get("parameters", [])]


CheckGroup = Callable[[SuiteContext], List[CheckRecord]]


def sampled(check_id: str, identity: str, samples: Iterable[Tuple[Any, Any]]) -> CheckRecord:
    """One record for many sampled (lhs, rhs) pairs; the first mismatch is kept."""
    count = 0
    for lhs, rhs in samples:
        count += 1
        if lhs != rhs:
            return compare(check_id, identity, lhs, rhs)
    text = f"{count} cases"
    return CheckRecord(check_id, identity, PASS, text, text, "0")


def matrix_records(prefix: str, identity: str, actual: Sequence[Sequence[Any]],
                   expected: Sequence[Sequence[Any]], report_only: bool = False) -> List[CheckRecord]:
    return [
        compare(f"{prefix}.{i + 1}{j + 1}", identity, actual[i][j], expected[i][j], report_only)
        for i in range(len(expected)) for j in range(len(expected[i]))
    ]


def raises(check_id: str, identity: str, fn: Callable[[], Any], exc_type, phrase: str) -> CheckRecord:
    """Record asserting that fn raises exc_type with phrase in the message."""
    try:
        value = fn()
    except exc_type as e:
        holds = phrase in str(e)
        return truth(check_id, identity, holds, f"message was '{e}'")
    return CheckRecord(check_id, identity, FAIL, str(value), exc_type.__name__,
                       "no exception raised")


def _plane_poly(rng: random.Random, max_degree: int) -> AlgebraElement:
    total = P_PLANE.zero()
    for _ in range(3):
        a = rng.randint(0, max_degree)
        b = rng.randint(0, max_degree - a)
        total = total + P_PLANE.monomial((a, b), rng.randint(-3, 3))
    return total


# -- plane-calculus ----------------------------------------------------------------


def plane_normal_forms(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    x, y = calc.algebra.gens()
    xi, eta = calc.basis("xi"), calc.basis("eta")
    xi_eta = calc.basis2(0)
    return [
        compare("calculus.plane.normal.x-xi", "x xi = xi x - h xi y + h eta x + h^2 eta y",
                x * xi, xi * (x - y * H) + eta * (x * H + y * (H * H))),
        compare("calculus.plane.normal.y-eta", "y eta = eta y", y * eta, eta * y),
        compare("calculus.plane.d.x", "dx = xi", calc.d(x), xi),
        compare("calculus.plane.d.xy", "d(xy) = xi y + x eta", calc.d(x * y), xi * y + x * eta),
        vanishes("calculus.plane.d.one", "d(1) = 0", calc.d(calc.algebra.one())),
        compare("calculus.plane.wedge.xi-xi", "xi^2 = h xi eta", xi * xi, xi_eta * H),
        vanishes("calculus.plane.wedge.anticommute", "xi eta + eta xi = 0", xi * eta + eta * xi),
        vanishes("calculus.plane.wedge.eta-eta", "eta^2 = 0", eta * eta),
        compare("calculus.plane.pi.xi-eta", "pi(xi (x) eta) = xi eta",
                calc.wedge_projection(calc.tensor(xi, eta)), xi_eta),
    ]


def _calculus_properties(calc: Calculus, ctx: SuiteContext, group: str) -> List[CheckRecord]:
    rng = ctx.rng(group)
    n = ctx.cases("calculus_samples")
    alg = calc.algebra
    sample = [(alg.random_element(rng, terms=2, max_length=3),
               alg.random_element(rng, terms=2, max_length=3),
               calc.random_form(rng, terms=1, max_length=2)) for _ in range(n)]
    prefix = f"calculus.{calc.name}"
    return [
        sampled(f"{prefix}.d-squared", "d(df) = 0",
                ((calc.d(calc.d(f)), calc.zero(2)) for f, _, _ in sample)),
        sampled(f"{prefix}.leibniz", "d(fg) = (df) g + f dg",
                ((calc.d(f * g), calc.d(f) * g + f * calc.d(g)) for f, g, _ in sample)),
        sampled(f"{prefix}.bimodule", "f (g omega) = (fg) omega",
                ((f * (g * w), (f * g) * w) for f, g, w in sample)),
    ]


def calculus_properties(ctx: SuiteContext) -> List[CheckRecord]:
    records = []
    for calc in (C_PLANE, C_PLANE2, C_EXT_XY, C_EXT2, C_EXT3):
        records.extend(_calculus_properties(calc, ctx, f"properties.{calc.name}"))
    return records


def engine_confluence(ctx: SuiteContext) -> List[CheckRecord]:
    records = []
    lo, hi = ctx.random_cases.get("confluence_exponent_range", [-3, 3])
    for algebra in (P_PLANE, P_EXT, P_UV, P_PLANE2):
        failures = confluence_failures(
            algebra, ctx.rng(f"confluence.{algebra.name}"), ctx.cases("confluence_words"),
            ctx.cases("confluence_max_length"), (lo, hi),
        )
        records.append(truth(f"engine.confluence.{algebra.name}",
                             "normal form independent of reduction order", not failures,
                             f"first failing word {failures[0]}" if failures else ""))
    return records


# -- sigma-braid -------------------------------------------------------------------


def rmatrix_checks(ctx: SuiteContext) -> List[CheckRecord]:
    identity_R = BraidMap.identity(C_PLANE).rmatrix
    return [
        truth("braid.ybe.plane", "R12 R23 R12 = R23 R12 R23", not ybe_defects(plane_rmatrix())),
        truth("braid.ybe.plane2", "R12 R23 R12 = R23 R12 R23 with h, h' independent",
              not ybe_defects(plane_rmatrix(H, HP))),
        truth("braid.ybe.identity", "identity solves the Yang-Baxter equation",
              not ybe_defects(identity_R)),
    ]


def braid_checks(ctx: SuiteContext) -> List[CheckRecord]:
    records = []
    braids = [
        ("plane", plane_braid(C_PLANE)),
        ("plane2", plane_braid(C_PLANE2, HP)),
        ("ext2", BraidMap.flip(C_EXT2)),
    ]
    for label, s in braids:
        calc = s.calculus
        records.append(truth(f"sigma.{label}.braid", "sigma12 sigma23 sigma12 = sigma23 sigma12 sigma23",
                             not braid_defects(s)))
        for (i, j), _ in sigma_action_table(s).items():
            t = calc.tensor_basis((i, j))
            pair = f"{calc.cogenerators[i]}-{calc.cogenerators[j]}"
            records.append(compare(f"sigma.{label}.square.{pair}", "sigma^2 = 1", s(s(t)), t))
            records.append(vanishes(f"sigma.{label}.pi.{pair}", "pi (sigma + 1) = 0",
                                    calc.wedge_projection(s(t) + t)))
    return records


def sigma_table_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    table = sigma_action_table(plane_braid(calc))

    def tb(*keys_coeffs):
        total = TensorElement(calc, {}, (1, 1))
        for key, coeff in keys_coeffs:
            total = total + calc.tensor_basis(key, coeff)
        return total

    expected = {
        (0, 0): tb(((0, 0), 1), ((0, 1), -H), ((1, 0), H), ((1, 1), H * H)),
        (0, 1): tb(((1, 0), 1), ((1, 1), H)),
        (1, 0): tb(((0, 1), 1), ((1, 1), -H)),
        (1, 1): tb(((1, 1), 1)),
    }
    return [
        compare(f"sigma.plane.table.{calc.cogenerators[i]}-{calc.cogenerators[j]}",
                "sigma acts as R-hat", table[(i, j)], expected[(i, j)])
        for (i, j) in sorted(expected)
    ]


def kappa_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    k = kappa(calc)
    x, y = calc.algebra.gens()
    xi, eta = calc.basis("xi"), calc.basis("eta")
    records = [
        compare("kappa.central.x", "x kappa = kappa x", x * k, k * x),
        compare("kappa.central.y", "y kappa = kappa y", y * k, k * y),
        vanishes("kappa.anticommute.xi", "xi kappa + kappa xi = 0", xi * k + k * xi),
        vanishes("kappa.anticommute.eta", "eta kappa + kappa eta = 0", eta * k + k * eta),
        vanishes("kappa.square", "kappa^2 = 0", k * k),
        vanishes("kappa.pi", "pi(kappa (x) kappa) = 0", calc.wedge_projection(calc.tensor(k, k))),
    ]
    for label, (lhs, rhs) in sorted(kappa_sigma_table(plane_braid(calc)).items()):
        records.append(compare(f"kappa.sigma.{label}", "sigma(a (x) b) = b (x) a", lhs, rhs))
    return records


# -- connections ---------------------------------------------------------------------


def _param_tag(mu: Scalar, rho: Scalar) -> str:
    return f"mu={mu},rho={rho}"


def plane_connection_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    k = kappa(calc)
    records = []
    rng = ctx.rng("connection.leibniz")
    for mu, rho in ctx.parameters():
        tag = _param_tag(mu, rho)
        D = plane_connection(mu, rho, calc)
        for a in range(2):
            name = calc.cogenerators[a]
            records.append(vanishes(f"connection.plane[{tag}].torsion.{name}", "Theta(xi^a) = 0",
                                    torsion(D, calc.basis(a))))
        records.append(vanishes(f"connection.plane[{tag}].d2kappa", "pi12 D^2 kappa = 0",
                                curvature(D, k), report_only=bool(rho)))
        f = _plane_poly(rng, 2)
        records.append(compare(f"connection.plane[{tag}].leibniz.left", "D(f xi) = df (x) xi + f D xi",
                               connection_apply(D, f * calc.basis(0)),
                               calc.tensor(calc.d(f), calc.basis(0)) + f * D.value(0)))
        if not rho:
            for a in range(2):
                records.append(compare(
                    f"connection.plane[{tag}].curvature.{calc.cogenerators[a]}",
                    "pi12 D^2 xi^a = -Omega^a_b (x) xi^b",
                    curvature(D, calc.basis(a)), expected_plane_curvature(mu, a, calc),
                ))
    return records


def varpi_checks(ctx: SuiteContext) -> List[CheckRecord]:
    records = []
    for n in ctx.connections.get("varpi_n", []):
        records.extend(varpi_check(int(n), "n"))
    for n in ctx.connections.get("varpi_half_n", []):
        records.extend(varpi_check(int(n), "n/2"))
    return records


# -- symplectic ------------------------------------------------------------------------


def symplectic_compat_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    lam = symplectic_plane(calc)
    J = ComplexStructure(calc)
    g = J.metric(lam)
    records = [truth("symplectic.nondegenerate", "det Lambda != 0", lam.is_nondegenerate())]
    for mu, _ in ctx.parameters():
        if not mu:
            continue
        D = plane_connection(mu, 0, calc)
        tag = f"mu={mu}"
        for (a, b), defect in sorted(compat_defect(D, lam).items()):
            pair = f"{calc.cogenerators[a]}-{calc.cogenerators[b]}"
            records.append(vanishes(f"symplectic.compat[{tag}].{pair}",
                                    "(1 (x) Lambda) D(xi^a (x) xi^b) = d Lambda^ab", defect))
        g_defects = compat_defect(D, g)
        records.append(nonzero(f"symplectic.metric-incompatible[{tag}]",
                               "(1 (x) g) D != d g", any(bool(v) for v in g_defects.values())))
    return records


def symplectic_triple_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    lam = symplectic_plane(calc)
    s = plane_braid(calc)
    xi, eta = calc.basis("xi"), calc.basis("eta")
    zero = calc.zero(1)
    expected = {
        (0, 0, 0): xi * H, (0, 0, 1): eta * H, (0, 1, 0): xi, (0, 1, 1): eta,
        (1, 0, 0): -xi, (1, 0, 1): -eta, (1, 1, 0): zero, (1, 1, 1): zero,
    }
    records = []
    for triple, value in sorted(lambda_sigma_triples(s, lam).items()):
        label = "".join(calc.cogenerators[i][0] for i in triple)
        records.append(compare(f"symplectic.triple.{label}", "(1 (x) Lambda) sigma12 sigma23",
                               value, expected[triple]))
    for (i, j), t in sorted(sigma_action_table(s).items()):
        pair = f"{calc.cogenerators[i]}-{calc.cogenerators[j]}"
        records.append(compare(f"symplectic.skew.{pair}", "Lambda sigma = -Lambda",
                               lam.apply(t), -lam.entry(i, j)))
    return records


def complex_structure_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_PLANE
    lam = symplectic_plane(calc)
    J = ComplexStructure(calc)
    g, gp = J.metric(lam), J.metric_prime(lam)
    basis = [calc.basis(0), calc.basis(1)]
    records = []
    records.extend(matrix_records("symplectic.g", "g = [[-ih, -i], [-i, 0]]",
                                  [[g.entry(a, b) for b in range(2)] for a in range(2)],
                                  [[-(I * H), -I], [-I, 0]]))
    records.extend(matrix_records("symplectic.g-prime", "g' = [[ih, -i], [-i, 0]]",
                                  [[gp.entry(a, b) for b in range(2)] for a in range(2)],
                                  [[I * H, -I], [-I, 0]]))
    for a in range(2):
        for b in range(2):
            pair = f"{calc.cogenerators[a]}-{calc.cogenerators[b]}"
            records.append(compare(f"symplectic.g-J.{pair}", "g(J xi^a (x) xi^b) = Lambda^ab",
                                   g.apply(calc.tensor(J.apply(basis[a]), basis[b])), lam.entry(a, b)))
            records.append(compare(f"symplectic.g-prime-J.{pair}", "g'(xi^a (x) xi^b) = Lambda(xi^a (x) J xi^b)",
                                   gp.entry(a, b), lam.apply(calc.tensor(basis[a], J.apply(basis[b])))))
            records.append(compare(f"symplectic.g-JJ.{pair}", "g(J xi^a (x) J xi^b) = g'^ab",
                                   g.apply(calc.tensor(J.apply(basis[a]), J.apply(basis[b]))),
                                   gp.entry(a, b)))
    for a in range(2):
        records.append(compare(f"symplectic.J-square.{calc.cogenerators[a]}", "J^2 = -1",
                               J.apply(J.apply(basis[a])), -basis[a]))
    t1, t2 = J.vartheta()
    records.append(compare("symplectic.vartheta.J1", "J vartheta^1 = vartheta^2", J.apply(t1), t2))
    records.append(compare("symplectic.vartheta.J2", "J vartheta^2 = -vartheta^1", J.apply(t2), -t1))
    half = Fraction(1, 2)
    records.extend(matrix_records(
        "symplectic.vartheta.g", "g in the vartheta basis",
        vartheta_matrix(J, g),
        [[1 - I * H * half, H * half], [H * half, 1 + I * H * half]],
    ))
    records.extend(matrix_records(
        "symplectic.vartheta.g-prime", "g' in the vartheta basis",
        vartheta_matrix(J, gp),
        [[1 + I * H * half, -(H * half)], [-(H * half), 1 - I * H * half]],
    ))
    records.extend(matrix_records(
        "symplectic.vartheta.lambda", "Lambda in the vartheta basis",
        vartheta_matrix(J, lam),
        [[H * half, 1 + I * H * half], [-1 + I * H * half, -(H * half)]],
    ))
    herm = vartheta_matrix(J, hermitian_form(J, lam))
    records.extend(matrix_records(
        "symplectic.vartheta.hermitian", "H = g' + i Lambda in the vartheta basis",
        herm, [[1 + I * H, I - H], [-I - H, 1 - I * H]],
    ))
    records.extend(matrix_records(
        "symplectic.hermitian.limit", "H -> identity as h -> 0",
        [[entry.limit_at_zero() for entry in row] for row in herm], [[1, 0], [0, 1]],
        report_only=True,
    ))
    return records


def skew_derivative_checks(ctx: SuiteContext) -> List[CheckRecord]:
    system = SkewDerivativeSystem(C_PLANE)
    x, y = P_PLANE.gens()
    one = P_PLANE.one()
    records = [
        compare("symplectic.skew-derivative.1x", "d_1 x = 1", skew_derivative(system, 0, x), 1),
        compare("symplectic.skew-derivative.2y", "d_2 y = 1", skew_derivative(system, 1, y), 1),
        vanishes("symplectic.skew-derivative.1y", "d_1 y = 0", skew_derivative(system, 0, y)),
        vanishes("symplectic.skew-derivative.2x", "d_2 x = 0", skew_derivative(system, 1, x)),
        vanishes("symplectic.skew-derivative.1one", "d_1 1 = 0", skew_derivative(system, 0, one)),
    ]
    rng = ctx.rng("wess-zumino")
    degree = ctx.cases("wess_zumino_max_degree")
    cases = [_plane_poly(rng, degree) for _ in range(ctx.cases("wess_zumino_cases"))]
    records.append(sampled(
        "symplectic.wess-zumino", "d_a(x^b f) = delta_a^b f + R^bd_ac x^c d_d f",
        ((wess_zumino_defect(system, a, b, f), P_PLANE.zero())
         for f in cases for a in range(2) for b in range(2)),
    ))
    return records


# -- qgroup ------------------------------------------------------------------------------


def qgroup_checks(ctx: SuiteContext) -> List[CheckRecord]:
    A, _, C, _ = P_QGROUP.gens()
    records = [
        compare("qgroup.reduce.CA", "C A = A C - h C^2", reduce_qgroup("CA"), A * C - C * C * H),
        compare("qgroup.reduce.A-one", "A 1 = A", reduce_qgroup([("A", 1)]) * P_QGROUP.one(), A),
    ]
    records.extend(check_determinant_central())
    records.extend(check_relations_stable())
    records.extend(check_symplectic_group())
    return records


def qgroup_coaction_checks(ctx: SuiteContext) -> List[CheckRecord]:
    return coaction_check() + coaction_form_check()


def qgroup_confluence(ctx: SuiteContext) -> List[CheckRecord]:
    failures = confluence_failures(P_QGROUP, ctx.rng("confluence.qgroup"),
                                   ctx.cases("confluence_words"),
                                   ctx.cases("confluence_max_length"), (1, 1))
    return [truth("qgroup.confluence", "normal form independent of reduction order", not failures,
                  f"first failing word {failures[0]}" if failures else "")]


# -- extended ----------------------------------------------------------------------------


def extended_frame_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT2
    records = stehbein_check(frame_data(calc), calc, "ext2.frame")
    _, y = P_EXT.gens()
    abelian = FrameData([y, y * y], antisymmetrizer(2), {})
    records.extend(stehbein_check(abelian, None, "ext2.abelian-frame"))
    lam1, lam2 = calc.lambdas
    records.append(compare("ext2.lie.12", "[lambda_1, lambda_2] = lambda_1",
                           commutator(lam1, lam2), lam1))
    t1, t2 = calc.basis(0), calc.basis(1)
    records.append(vanishes("ext2.wedge.11", "theta^1 theta^1 = 0", t1 * t1))
    records.append(vanishes("ext2.wedge.22", "theta^2 theta^2 = 0", t2 * t2))
    records.append(vanishes("ext2.wedge.12", "theta^1 theta^2 + theta^2 theta^1 = 0", t1 * t2 + t2 * t1))
    records.append(compare("ext2.d.theta1", "d theta^1 = -theta^1 theta^2", calc.d(t1), -(t1 * t2)))
    for a in range(2):
        for b in range(2):
            records.append(compare(f"ext2.dual.{a + 1}{b + 1}", "theta^a(e_b) = delta^a_b",
                                   calc.evaluate(calc.basis(a), calc.frame[b]), 1 if a == b else 0))
    rng = ctx.rng("ext2.centrality")
    samples = [P_EXT.random_element(rng, terms=2, max_length=3)
               for _ in range(ctx.cases("centrality_samples"))]
    records.append(sampled("ext2.central", "f theta^a = theta^a f",
                           ((f * calc.basis(a), calc.basis(a) * f) for f in samples for a in range(2))))
    return records


def dirac_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT2
    theta = calc.dirac_operator()
    rng = ctx.rng("ext2.dirac")
    samples = [P_EXT.random_element(rng, terms=2, max_length=3)
               for _ in range(ctx.cases("dirac_samples"))]
    records = [
        sampled("ext2.dirac.df", "df = -[theta, f]",
                ((calc.d(f), -(theta * f - f * theta)) for f in samples)),
        vanishes("ext2.dirac.maurer-cartan", "d theta + theta^2 = 0", calc.d(theta) + theta * theta),
    ]
    u, v, _ = ext_uvw()
    half_inv_h = H.inverse() / 2
    uv_form = (calc.d(u) - (u * v.inverse()) * calc.d(v)) * (-half_inv_h)
    records.append(compare("ext2.dirac.uv", "theta = -(1/2h)(du - u v^-1 dv)", theta, uv_form))
    x, y = P_EXT.gens()
    xi, eta = xi_eta_in_frame(calc)
    y_inv = y.inverse()
    xy_form = (y_inv * xi) * (-half_inv_h) - ((x - y * H) * y_inv * y_inv * eta) * half_inv_h
    records.append(compare("ext2.dirac.xy", "theta = -(1/2h) y^-1 xi - (1/2h)(x - hy) y^-2 eta",
                           theta, xy_form, report_only=True))
    return records


def extended_metric_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT2
    g = ext_metric(calc)
    x, y = P_EXT.gens()
    u, v, _ = ext_uvw()
    y_inv = y.inverse()
    t1, t2 = calc.basis(0), calc.basis(1)
    xi, eta = xi_eta_in_frame(calc)
    quarter = Fraction(1, 4)
    records = [
        compare("ext2.basis.xi", "xi = theta^1 y^-1 + theta^2 x / 2", xi,
                t1 * y_inv + t2 * (x * Fraction(1, 2))),
        compare("ext2.basis.eta", "eta = theta^2 y / 2", eta, t2 * (y * Fraction(1, 2))),
        compare("ext2.metric.xi-xi", "g(xi (x) xi) = y^-2 + x^2/4", g.apply(calc.tensor(xi, xi)),
                y_inv * y_inv + x * x * quarter),
        compare("ext2.metric.xi-eta", "g(xi (x) eta) = xy/4", g.apply(calc.tensor(xi, eta)),
                x * y * quarter),
        compare("ext2.metric.eta-xi", "g(eta (x) xi) = yx/4", g.apply(calc.tensor(eta, xi)),
                y * x * quarter),
        compare("ext2.metric.eta-eta", "g(eta (x) eta) = y^2/4", g.apply(calc.tensor(eta, eta)),
                y * y * quarter),
    ]
    du, dv = calc.d(u), calc.d(v)
    records.extend([
        compare("ext2.metric.du-du", "g(du (x) du) = v^2", g.apply(calc.tensor(du, du)), v * v),
        compare("ext2.metric.dv-dv", "g(dv (x) dv) = v^2", g.apply(calc.tensor(dv, dv)), v * v),
        vanishes("ext2.metric.du-dv", "g(du (x) dv) = 0", g.apply(calc.tensor(du, dv))),
        vanishes("ext2.metric.dv-du", "g(dv (x) du) = 0", g.apply(calc.tensor(dv, du))),
    ])
    xy = C_EXT_XY
    xy_x, xy_y = xy.algebra.gens()
    th1, th2 = frame_in_xi_eta(xy)
    records.extend([
        compare("ext-xy.basis.xi", "xi = theta^1 y^-1 + theta^2 x / 2", xy.basis("xi"),
                th1 * xy_y.inverse() + th2 * (xy_x * Fraction(1, 2))),
        compare("ext-xy.basis.eta", "eta = theta^2 y / 2", xy.basis("eta"),
                th2 * (xy_y * Fraction(1, 2))),
        compare("ext-xy.theta1-kappa", "theta^1 = -kappa", th1, -kappa(xy)),
    ])
    for name, th in (("theta1", th1), ("theta2", th2)):
        for gen, f in (("x", xy_x), ("y", xy_y)):
            records.append(compare(f"ext-xy.central.{name}.{gen}", "f theta^a = theta^a f",
                                   f * th, th * f))
    records.extend(matrix_records("ext-xy.lambda-transport", "Lambda(theta^a (x) theta^b) = 2 Lambda_frame",
                                  transported_symplectic(xy), [[0, 2], [-2, 0]]))
    return records


def extended_connection_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT2
    g = ext_metric(calc)
    lam = ext_symplectic_frame(calc)
    t1, t2 = calc.basis(0), calc.basis(1)
    flat = ext_flat_connection(calc)
    lc = ext_levicivita_connection(calc)
    records = [
        compare("ext2.flat.torsion.theta1", "Theta(theta^1) = -theta^1 theta^2",
                torsion(flat, t1), -(t1 * t2)),
        vanishes("ext2.flat.torsion.theta2", "Theta(theta^2) = 0", torsion(flat, t2)),
        truth("ext2.flat.riemann", "R^a_bcd = 0",
              all(not value for value in riemann_coeffs(flat).values())),
        compare("ext2.levicivita.D.theta1", "D theta^1 = -theta^1 (x) theta^2",
                connection_apply(lc, t1), -calc.tensor_basis((0, 1))),
        compare("ext2.levicivita.D.theta2", "D theta^2 = theta^1 (x) theta^1",
                connection_apply(lc, t2), calc.tensor_basis((0, 0))),
        compare("ext2.levicivita.D.theta11", "D(theta^1 (x) theta^1)",
                connection_extend(lc, calc.tensor_basis((0, 0))),
                -calc.tensor_basis((0, 1, 0)) - calc.tensor_basis((0, 0, 1))),
        compare("ext2.levicivita.curvature.theta1", "pi12 D^2 theta^1 = theta^1 theta^2 (x) theta^2",
                curvature(lc, t1), two_form_tensor(calc, 0, t2)),
    ]
    for a in range(2):
        records.append(vanishes(f"ext2.flat.curvature.theta{a + 1}", "pi12 D^2 theta^a = 0",
                                curvature(flat, calc.basis(a))))
        records.append(vanishes(f"ext2.levicivita.torsion.theta{a + 1}", "Theta(theta^a) = 0",
                                torsion(lc, calc.basis(a))))
    for label, B in (("metric", g), ("symplectic", lam)):
        for (a, b), defect in sorted(compat_defect(lc, B).items()):
            records.append(vanishes(f"ext2.levicivita.compat.{label}.{a + 1}{b + 1}",
                                    "(1 (x) B) D = d B", defect))
    R = riemann_coeffs(lc)
    low = lower_riemann(R, g)
    records.append(compare("ext2.levicivita.R1212", "R_1212 = -1", low[(0, 1, 0, 1)], -1))
    symmetric = all(
        low[(a, b, c, d)] == -low[(a, b, d, c)] == -low[(b, a, c, d)] == low[(c, d, a, b)]
        for (a, b, c, d) in low
    )
    records.append(truth("ext2.levicivita.riemann-symmetries",
                         "R_abcd = -R_abdc = -R_bacd = R_cdab", symmetric))
    ric = ricci(lc, g)
    records.extend(matrix_records("ext2.levicivita.ricci", "R^a_b = delta^a_b",
                                  [[ric[(a, b)] for b in range(2)] for a in range(2)],
                                  [[1, 0], [0, 1]]))
    return records


def solver_checks(ctx: SuiteContext) -> List[CheckRecord]:
    result = unique_connection_solver(C_EXT2)
    flat = unique_connection_solver(C_EXT2, structure_zero=True)
    expected = {(0, 0, 1): Scalar.const(1), (1, 0, 0): Scalar.const(-1)}
    return [
        compare("ext2.solver.count", "exactly one constant solution", result.count, 1),
        compare("ext2.solver.rank", "rank of the 8-unknown system", result.rank, 8),
        truth("ext2.solver.levicivita", "omega^1_12 = 1, omega^2_11 = -1",
              result.particular == expected, f"got {result.particular}"),
        truth("ext2.solver.flat", "d theta = 0 gives the zero connection",
              flat.consistent and not flat.particular, f"got {flat.particular}"),
    ]


# -- three-calculus ------------------------------------------------------------------------


def three_frame_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT3
    records = stehbein_check(frame_data(calc), calc, "ext3.frame")
    lam1, lam2, lam3 = calc.lambdas
    records.extend([
        compare("ext3.lie.12", "[lambda_1, lambda_2] = lambda_1", commutator(lam1, lam2), lam1),
        compare("ext3.lie.23", "[lambda_2, lambda_3] = lambda_3", commutator(lam2, lam3), lam3),
        compare("ext3.lie.31", "[lambda_3, lambda_1] = lambda_2", commutator(lam3, lam1), lam2),
    ])
    u, v, w = ext_uvw()
    e = calc.frame
    gens = {"u": u, "v": v, "w": w}
    table = {
        (0, "u"): v, (0, "v"): 0, (0, "w"): -u,
        (1, "u"): 0, (1, "v"): -v, (1, "w"): w,
        (2, "u"): -w, (2, "v"): u, (2, "w"): 0,
    }
    for (i, name), value in sorted(table.items()):
        records.append(compare(f"ext3.action.e{i + 1}{name}", f"e{i + 1} {name}", e[i](gens[name]), value))
    brackets = {(0, 1): (0, 1), (1, 2): (2, 1), (2, 0): (1, 1)}
    for (i, j), (k, sign) in sorted(brackets.items()):
        for name, f in gens.items():
            records.append(compare(f"ext3.derivation.{i + 1}{j + 1}.{name}", "[e_i, e_j] = F^k_ij e_k",
                                   e[i](e[j](f)) - e[j](e[i](f)), e[k](f) * sign))
    return records


def three_calculus_relations(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT3
    u, v, w = ext_uvw()
    t1, t2, t3 = (calc.basis(c) for c in range(3))
    du, dv, dw = calc.d(u), calc.d(v), calc.d(w)
    two_h = H * 2
    return [
        compare("ext3.d.u", "du = v theta^1 - w theta^3", du, t1 * v - t3 * w),
        compare("ext3.d.v", "dv = -v theta^2 + u theta^3", dv, -(t2 * v) + t3 * u),
        compare("ext3.d.w", "dw = -u theta^1 + w theta^2", dw, -(t1 * u) + t2 * w),
        compare("ext3.module.u-du", "u du - du u = -2h du - 4h w theta^3",
                u * du - du * u, du * (-two_h) - (w * t3) * (H * 4)),
        compare("ext3.module.v-du", "v du - du v = 2h u theta^3", v * du - du * v, (u * t3) * two_h),
        compare("ext3.module.u-dv", "u dv - dv u = -2h dv + 2h u theta^3",
                u * dv - dv * u, dv * (-two_h) + (u * t3) * two_h),
        compare("ext3.module.v-dv", "v dv - dv v = 2h v theta^3", v * dv - dv * v, (v * t3) * two_h),
        vanishes("ext3.cubic.1", "u v dv - u dv v - v du v + du v^2 = 0",
                 (u * v) * dv - (u * dv) * v - (v * du) * v + du * (v * v)),
        vanishes("ext3.cubic.2", "v u du - v du u + 2h v du + 2 v dv w - 2 dv v w = 0",
                 (v * u) * du - (v * du) * u + (v * du) * two_h + ((v * dv) * w) * 2
                 - (dv * (v * w)) * 2),
        compare("ext3.inversion.theta1", "[w, du] = 2h u theta^1", w * du - du * w, (u * t1) * two_h),
        compare("ext3.inversion.theta2", "[u, dv] = 2h v theta^2", u * dv - dv * u, (v * t2) * two_h),
        compare("ext3.inversion.theta3", "[v, du] = 2h u theta^3", v * du - du * v, (u * t3) * two_h),
    ]


def lie_derivative_checks(ctx: SuiteContext) -> List[CheckRecord]:
    calc = C_EXT2
    u, v, w = ext_uvw()
    v_inv = v.inverse()
    e3 = Derivation.ad(ext_frame_lambdas(three=True)[2], "e3")
    derivations = [calc.frame[0], calc.frame[1], e3]
    t1, t2 = calc.basis(0), calc.basis(1)
    zero = calc.zero(1)
    forms = {
        (0, 0): -t2, (0, 1): zero,
        (1, 0): t1, (1, 1): zero,
        (2, 0): calc.basis(1, -(v_inv * w)), (2, 1): -t1 - calc.basis(1, v_inv * u),
    }
    records = [
        compare(f"lie.L{i + 1}.theta{a + 1}", f"L_{i + 1} theta^{a + 1}",
                calc.lie_derivative(derivations[i], calc.basis(a)), value)
        for (i, a), value in sorted(forms.items())
    ]
    g = calc.tensor_basis((0, 0)) + calc.tensor_basis((1, 1))
    sym = calc.tensor_basis((0, 1)) + calc.tensor_basis((1, 0))
    expected = [
        -sym,
        calc.tensor_basis((0, 0), 2),
        -(sym * (calc.algebra.one() + v_inv * w)) - calc.tensor_basis((1, 1), v_inv * u * 2),
    ]
    for i, value in enumerate(expected):
        actual = calc.lie_derivative(derivations[i], g)
        records.append(compare(f"lie.L{i + 1}.metric", f"L_{i + 1} g", actual, value))
        records.append(nonzero(f"lie.L{i + 1}.not-killing", f"e_{i + 1} is not Killing", actual))
    return records


# -- climit ----------------------------------------------------------------------------------


def poisson_checks(ctx: SuiteContext) -> List[CheckRecord]:
    U, V = climit.U, climit.V
    u, v = P_UV.gens()
    records = [
        compare("climit.limit.uv", "lim uv = u~ v~", climit.classical_limit(u * v), U * V),
        compare("climit.limit.vu", "lim vu = u~ v~", climit.classical_limit(v * u), U * V),
        raises("climit.limit.singular", "lim v/2h is singular",
               lambda: climit.classical_limit(v * H.inverse()), ScalarError, "singular limit"),
        compare("climit.poisson.uv", "{u~, v~} = -2 v~", climit.poisson(U, V), -2 * V),
        compare("climit.poisson.uu", "{u~, u~} = 0", climit.poisson(U, U), 0),
        compare("climit.poisson.u2v", "{u~^2, v~} = -4 u~ v~", climit.poisson(U ** 2, V), -4 * U * V),
    ]
    rng = ctx.rng("climit.poisson")
    pairs = [(climit.random_laurent(rng), climit.random_laurent(rng))
             for _ in range(ctx.cases("poisson_samples"))]
    records.extend([
        sampled("climit.poisson.classical", "{f, g} = -2 v~ (f_u g_v - f_v g_u)",
                ((climit.poisson(f, g), climit.poisson_classical(f, g)) for f, g in pairs)),
        sampled("climit.poisson.lift-order", "{f, g} does not depend on the lift order",
                ((climit.poisson(f, g, "uv"), climit.poisson(f, g, "vu")) for f, g in pairs)),
        sampled("climit.poisson.antisymmetry", "{f, g} = -{g, f}",
                ((climit.poisson(f, g), -climit.poisson(g, f)) for f, g in pairs)),
        sampled("climit.poisson.leibniz", "{f, g k} = {f, g} k + g {f, k}",
                ((climit.poisson(f, g * k),
                  climit.canonical(climit.poisson(f, g) * k + g * climit.poisson(f, k)))
                 for (f, g), (k, _) in zip(pairs, reversed(pairs)))),
    ])
    jrng = ctx.rng("climit.jacobi")
    triples = [tuple(climit.random_laurent(jrng, terms=1) for _ in range(3))
               for _ in range(ctx.cases("jacobi_triples"))]
    records.append(sampled("climit.poisson.jacobi", "{f, {g, k}} + cyclic = 0",
                           ((climit.jacobi_defect(f, g, k), 0) for f, g, k in triples)))
    return records


def vector_field_checks(ctx: SuiteContext) -> List[CheckRecord]:
    X1, X2, X3 = climit.X_FIELDS
    records = [
        compare("climit.fields.12", "[X1, X2] = X1", X1.commutator(X2), X1),
        compare("climit.fields.23", "[X2, X3] = X3", X2.commutator(X3), X3),
        compare("climit.fields.31", "[X3, X1] = X2", X3.commutator(X1), X2),
    ]
    for i, (X, Xp) in enumerate(zip(climit.X_FIELDS, climit.KILLING_FIELDS)):
        records.append(truth(f"climit.killing.X{i + 1}-prime", "L_X' g = 0", climit.is_killing(Xp),
                             str(climit.killing_defect(Xp))))
        records.append(nonzero(f"climit.killing.X{i + 1}", "L_X g != 0",
                               not climit.killing_defect(X).is_zero_matrix))
    for (i, name), defect in sorted(climit.limit_defects().items()):
        records.append(compare(f"climit.limit.e{i + 1}{name}", f"lim e{i + 1} {name} = X{i + 1} {name}~",
                               defect, 0))
    return records


def involution_checks(ctx: SuiteContext) -> List[CheckRecord]:
    phi = climit.PHI
    U, V = climit.U, climit.V
    records = [truth("climit.phi.involution", "phi o phi = id", phi.compose(phi).is_identity())]
    for i, (X, Xp) in enumerate(zip(climit.X_FIELDS, climit.KILLING_FIELDS)):
        records.append(compare(f"climit.phi.push.X{i + 1}", "phi_* X_i = X'_i",
                               climit.pushforward(phi, X), Xp))
    pulled = [climit.pullback_1form(phi, form) for form in climit.THETA_TILDE]
    records.append(compare("climit.phi.pull.theta1", "phi^* theta~1 = v~ theta~1 + u~ theta~2",
                           climit.form_in_frame(pulled[0]), (V, U)))
    records.append(compare("climit.phi.pull.theta2", "phi^* theta~2 = -theta~2",
                           climit.form_in_frame(pulled[1]), (0, -1)))
    metric = climit.metric_from_forms(pulled)
    for i, X in enumerate(climit.X_FIELDS):
        records.append(truth(f"climit.phi.killing.X{i + 1}", "X_i is Killing for phi^* g",
                             climit.is_killing(X, metric), str(climit.killing_defect(X, metric))))
    records.append(nonzero("climit.phi.not-symplectic", "{phi u~, phi v~} != phi {u~, v~}",
                           climit.non_symplectic_witness(phi)))
    records.append(compare("climit.curvature", "Gaussian curvature of v~^-2 (du~^2 + dv~^2) = -1",
                           climit.gaussian_curvature_conformal(V ** -2), -1))
    return records


# -- registry ----------------------------------------------------------------------------------


SUITES: Dict[str, List[Tuple[str, CheckGroup]]] = {
    "plane-calculus": [
        ("plane-normal-forms", plane_normal_forms),
        ("calculus-properties", calculus_properties),
        ("engine-confluence", engine_confluence),
    ],
    "sigma-braid": [
        ("rmatrix", rmatrix_checks),
        ("braid", braid_checks),
        ("sigma-table", sigma_table_checks),
        ("kappa", kappa_checks),
    ],
    "connections": [
        ("plane-connection", plane_connection_checks),
        ("varpi", varpi_checks),
    ],
    "symplectic": [
        ("symplectic-compat", symplectic_compat_checks),
        ("symplectic-triples", symplectic_triple_checks),
        ("complex-structure", complex_structure_checks),
        ("skew-derivatives", skew_derivative_checks),
    ],
    "qgroup": [
        ("qgroup-relations", qgroup_checks),
        ("qgroup-coaction", qgroup_coaction_checks),
        ("qgroup-confluence", qgroup_confluence),
    ],
    "extended": [
        ("extended-frame", extended_frame_checks),
        ("dirac", dirac_checks),
        ("extended-metric", extended_metric_checks),
        ("extended-connections", extended_connection_checks),
        ("solver", solver_checks),
    ],
    "three-calculus": [
        ("three-frame", three_frame_checks),
        ("three-relations", three_calculus_relations),
        ("lie-derivatives", lie_derivative_checks),
    ],
    "climit": [
        ("poisson", poisson_checks),
        ("vector-fields", vector_field_checks),
        ("involution", involution_checks),
    ],
}

SUITE_NAMES = tuple(SUITES) + ("all",)


class VerificationSuite:
    """Runs named suites with settings from a JSON configuration file."""

    def __init__(self, config_path: Optional[str] = None, seed: Optional[int] = None,
                 jobs: Optional[int] = None):
        """
        Initialize the runner.

        Args:
            config_path: JSON configuration (defaults to the packaged config.json)
            seed: Overrides HPLANE_SEED and the configured seed
            jobs: Worker threads (defaults to the configured value)

        Raises:
            SuiteError: If the configuration cannot be read or is malformed
        """
        path = Path(config_path) if config_path else DEFAULT_CONFIG
        try:
            with open(path, "r", encoding="utf-8") as f:
                self.config = json.load(f)
            settings = self.config["suite_settings"]
            self.random_cases = dict(self.config["random_cases"])
            self.connections = dict(self.config.get("connections", {}))
            self.seed = self._resolve_seed(seed, settings)
            self.jobs = int(jobs if jobs is not None else settings.get("jobs", 1))
        except SuiteError:
            raise
        except Exception as e:
            raise SuiteError(f"Failed to load configuration {path}: {str(e)}") from e
        if self.jobs < 1:
            raise SuiteError(f"jobs must be at least 1, got {self.jobs}")

    @staticmethod
    def _resolve_seed(seed: Optional[int], settings: Dict[str, Any]) -> int:
        if seed is not None:
            return int(seed)
        env = os.environ.get(SEED_ENV)
        if env:
            try:
                return int(env)
            except ValueError as e:
                raise SuiteError(f"{SEED_ENV} must be an integer, got '{env}'") from e
        return int(settings["seed"])

    def context(self) -> SuiteContext:
        return SuiteContext(self.seed, self.random_cases, self.connections)

    def groups(self, name: str) -> List[Tuple[str, CheckGroup]]:
        """
        Check groups of a suite.

        Raises:
            SuiteError: For an unknown suite name
        """
        if name == "all":
            return [group for suite in SUITES.values() for group in suite]
        if name not in SUITES:
            raise SuiteError(f"unknown suite '{name}' (choose from {', '.join(SUITE_NAMES)})")
        return list(SUITES[name])

    def _run_group(self, group_id: str, fn: CheckGroup, ctx: SuiteContext) -> List[CheckRecord]:
        start = time.time()
        try:
            records = fn(ctx)
        except Exception as e:
            logger.warning("check group %s raised %s", group_id, e)
            return [error_record(f"{group_id}.error", group_id, e)]
        logger.info("%s: %d checks in %.2fs", group_id, len(records), time.time() - start)
        return records

    def run(self, name: str) -> Report:
        """
        Run a suite.

        Args:
            name: Suite name or "all"

        Returns:
            Report with checks sorted by check_id
        """
        groups = self.groups(name)
        ctx = self.context()
        report = Report(name)
        start = time.time()
        logger.info("suite %s: %d groups, seed %d, %d jobs", name, len(groups), self.seed, self.jobs)
        if self.jobs == 1:
            for group_id, fn in groups:
                report.extend(self._run_group(group_id, fn, ctx))
        else:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                futures = [pool.submit(self._run_group, gid, fn, ctx) for gid, fn in groups]
                for future in futures:
                    report.extend(future.result())
        report.checks = report.sorted_checks()
        report.wall_time = time.time() - start
        return report


def run_suite(name: str, config_path: Optional[str] = None, seed: Optional[int] = None,
              jobs: Optional[int] = None) -> Report:
    """
    Convenience function to run one suite.

    Args:
        name: Suite name or "all"
        config_path: Optional configuration file
        seed: Optional seed override
        jobs: Optional worker count

    Returns:
        The report

    Raises:
        SuiteError: For unknown suites or bad configuration
    """
    return VerificationSuite(config_path, seed, jobs).run(name)
