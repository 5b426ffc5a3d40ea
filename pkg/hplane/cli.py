"""
Command-line interface.

Subcommands:
    reduce       parse an expression and print its normal form
    verify       run a verification suite and print the report
    table        print the X_i / X'_i, e_i action or sigma action table
    connection   check one property of the plane (mu, rho) connection

Exit codes: 0 when nothing failed, 1 when a check failed or errored,
2 for usage, parse and configuration errors.
"""

import argparse
import logging
import sys
from typing import List, Optional

from . import __version__, climit
from .exceptions import ExprParseError, HPlaneError, SuiteError
from .geometry import (
    compat_defect,
    curvature,
    expected_plane_curvature,
    plane_braid,
    plane_connection,
    sigma_action_table,
    symplectic_plane,
    torsion,
)
from .parser import CONTEXTS, reduce_expr
from .report import Report, compare, emit_report, vanishes
from .scalar import Scalar
from .suites import SUITE_NAMES, VerificationSuite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

TABLES = ("vector-fields", "e-action", "sigma")
CONNECTION_CHECKS = ("torsion", "curvature", "compat")


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def cmd_reduce(args: argparse.Namespace) -> int:
    value = reduce_expr(args.expr, args.context)
    print(value)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    suite = VerificationSuite(config_path=args.config, seed=args.seed, jobs=args.jobs)
    report = suite.run(args.suite)
    print(emit_report(report, args.format, show_timing=args.format == "text"))
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_table(args: argparse.Namespace) -> int:
    if args.table == "vector-fields":
        print(f"{'field':<8} {'d/du~':<24} {'d/dv~':<24}")
        for name, a_u, a_v in climit.vector_field_table():
            print(f"{name:<8} {str(a_u):<24} {str(a_v):<24}")
    elif args.table == "e-action":
        for (i, name), value in sorted(climit.e_action_table().items()):
            print(f"e{i + 1}({name}) = {value}")
    else:
        s = plane_braid()
        calc = s.calculus
        for (i, j), value in sorted(sigma_action_table(s).items()):
            print(f"sigma({calc.cogenerators[i]} (x) {calc.cogenerators[j]}) = {value}")
    return EXIT_OK


def cmd_connection(args: argparse.Namespace) -> int:
    try:
        mu = Scalar.parse_rational(args.mu)
        rho = Scalar.parse_rational(args.rho)
    except HPlaneError as e:
        raise ExprParseError(f"invalid connection parameter: {str(e)}") from e
    D = plane_connection(mu, rho)
    calc = D.calculus
    tag = f"connection.plane[mu={mu},rho={rho}]"
    report = Report(f"connection-{args.check}")
    for a in range(2):
        name = calc.cogenerators[a]
        if args.check == "torsion":
            report.add(vanishes(f"{tag}.torsion.{name}", "Theta(xi^a) = 0", torsion(D, calc.basis(a))))
        elif args.check == "curvature":
            report.add(compare(f"{tag}.curvature.{name}", "pi12 D^2 xi^a = -Omega^a_b (x) xi^b",
                               curvature(D, calc.basis(a)), expected_plane_curvature(mu, a),
                               report_only=bool(rho)))
    if args.check == "compat":
        for (a, b), defect in sorted(compat_defect(D, symplectic_plane(calc)).items()):
            pair = f"{calc.cogenerators[a]}-{calc.cogenerators[b]}"
            report.add(vanishes(f"{tag}.compat.{pair}", "(1 (x) Lambda) D = d Lambda", defect))
    print(emit_report(report, "text", show_timing=False))
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hplane",
        description="Symbolic engine and verification suites for the h-deformed quantum plane",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  hplane reduce "y*x"
  hplane reduce --context uv "[u,v]"
  hplane verify sigma-braid
  hplane verify all --format json --seed 7 --jobs 4
  hplane table vector-fields
  hplane connection --mu 1/2 --rho 0 --check curvature
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="Log progress to stderr (-vv for debug output)")
    sub = parser.add_subparsers(dest="command", required=True)

    reduce_p = sub.add_parser("reduce", help="Print the normal form of an expression")
    reduce_p.add_argument("expr", help="Expression, e.g. 'y*x' or 'xi (x) eta'")
    reduce_p.add_argument("--context", choices=CONTEXTS, default="plane",
                          help="Algebra and calculus to evaluate in (default: plane)")
    reduce_p.set_defaults(handler=cmd_reduce)

    verify_p = sub.add_parser("verify", help="Run a verification suite")
    verify_p.add_argument("suite", choices=SUITE_NAMES, help="Suite name")
    verify_p.add_argument("--format", choices=("text", "json"), default="text",
                          help="Report format (default: text)")
    verify_p.add_argument("--seed", type=int, default=None,
                          help="Seed for randomized checks (overrides HPLANE_SEED)")
    verify_p.add_argument("--config", default=None,
                          help="Path to configuration file (default: packaged config.json)")
    verify_p.add_argument("--jobs", type=int, default=None,
                          help="Worker threads for the check groups")
    verify_p.set_defaults(handler=cmd_verify)

    table_p = sub.add_parser("table", help="Print a reference table")
    table_p.add_argument("table", choices=TABLES, help="Table to print")
    table_p.set_defaults(handler=cmd_table)

    conn_p = sub.add_parser("connection", help="Check the plane (mu, rho) connection")
    conn_p.add_argument("--mu", required=True, help="Rational mu, e.g. 1/2")
    conn_p.add_argument("--rho", required=True, help="Rational rho, e.g. 0")
    conn_p.add_argument("--check", choices=CONNECTION_CHECKS, required=True,
                        help="Property to check")
    conn_p.set_defaults(handler=cmd_connection)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the hplane command."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (ExprParseError, SuiteError) as e:
        print(f"hplane: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except HPlaneError as e:
        logger.error("%s", e)
        print(f"hplane: error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
