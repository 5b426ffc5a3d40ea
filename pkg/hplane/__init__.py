"""
hplane: the h-deformed quantum plane, symbolically

An exact engine for the noncommutative differential geometry of the
h-deformed (Jordanian) quantum plane xy - yx = h y^2 and its extension by
y^-1, together with verification suites that check every identity of the
theory mechanically and report the outcome per identity.

Coefficients live in Q(i)[h, h^-1, h', h'^-1] and are compared exactly;
algebra elements, forms and tensors are kept in a unique normal form, so
equality of normal forms is equality in the algebra.

Usage:
    Normal forms:
    >>> from hplane import reduce_expr
    >>> str(reduce_expr("y*x", "plane"))
    'x*y - h*y^2'

    Differential calculus:
    >>> from hplane import C_PLANE
    >>> x, y = C_PLANE.algebra.gens()
    >>> C_PLANE.d(x * y) == C_PLANE.basis("xi") * y + x * C_PLANE.basis("eta")
    True

    Verification:
    >>> from hplane import run_suite, emit_report
    >>> report = run_suite("sigma-braid")
    >>> print(emit_report(report))

Modules:
- scalar: Laurent polynomial coefficients in h, h' over Q(i)
- ncalg: presented algebras and normal-form rewriting
- calculus: differential calculi, forms, tensors, derivations
- geometry: braid maps, connections, curvature, metrics, frames
- qgroup: GL_h(2), its determinant and coaction
- climit: the commutative limit and the Poisson structure
- parser: expression parser for the CLI
- report / suites / cli: verification surface
- exceptions: Custom exception classes

For more information, see README.md
"""

from .scalar import H, HP, I, Scalar
from .ncalg import (
    P_EXT,
    P_PLANE,
    P_PLANE2,
    P_UV,
    AlgebraElement,
    Generator,
    Presentation,
    commutator,
    normalize,
)
from .calculus import (
    C_EXT2,
    C_EXT3,
    C_EXT_XY,
    C_PLANE,
    C_PLANE2,
    Calculus,
    Derivation,
    FormElement,
    TensorElement,
)
from .geometry import (
    BilinearForm,
    BraidMap,
    Connection,
    curvature,
    make_connection,
    plane_connection,
    torsion,
    unique_connection_solver,
)
from .qgroup import P_QGROUP, reduce_qgroup
from .climit import classical_limit, poisson
from .parser import parse_expr, print_expr, reduce_expr
from .report import CheckRecord, Report, emit_report
from .suites import VerificationSuite, run_suite
from .exceptions import (
    HPlaneError,
    ScalarError,
    AlgebraError,
    CalculusError,
    GeometryError,
    ExprParseError,
    SuiteError,
)

__version__ = "0.1.0"
__all__ = [
    # Convenience functions (recommended API)
    "reduce_expr",
    "parse_expr",
    "print_expr",
    "run_suite",
    "emit_report",
    "normalize",
    "commutator",
    "reduce_qgroup",
    "classical_limit",
    "poisson",

    # Geometry
    "plane_connection",
    "make_connection",
    "torsion",
    "curvature",
    "unique_connection_solver",

    # Classes for advanced usage
    "Scalar",
    "Presentation",
    "Generator",
    "AlgebraElement",
    "Calculus",
    "Derivation",
    "FormElement",
    "TensorElement",
    "BraidMap",
    "Connection",
    "BilinearForm",
    "CheckRecord",
    "Report",
    "VerificationSuite",

    # Constants
    "H",
    "HP",
    "I",
    "P_PLANE",
    "P_PLANE2",
    "P_EXT",
    "P_UV",
    "P_QGROUP",
    "C_PLANE",
    "C_PLANE2",
    "C_EXT_XY",
    "C_EXT2",
    "C_EXT3",

    # Exceptions
    "HPlaneError",
    "ScalarError",
    "AlgebraError",
    "CalculusError",
    "GeometryError",
    "ExprParseError",
    "SuiteError",
]
