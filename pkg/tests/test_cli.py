"""
Unit tests for hplane.cli.
Covers the subcommands, output and exit codes.
"""

import unittest
import sys
import os
import io
import json
from contextlib import redirect_stderr, redirect_stdout

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from hplane import __version__
from hplane.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, build_parser, main


def run_cli(argv):
    """Run main and capture (code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


class TestReduceCommand(unittest.TestCase):
    """Test hplane reduce."""

    def test_reduce(self):
        """Test the plane relation."""
        code, out, _ = run_cli(["reduce", "y*x"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "x*y - h*y^2\n")

    def test_context(self):
        """Test the --context option."""
        code, out, _ = run_cli(["reduce", "--context", "ext", "y^-1 x"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "x*y^-1 + h")

    def test_scalar_coefficients(self):
        """Test scalar sums and inverse powers of h in the output."""
        cases = [
            ("(1+h) x", "(1 + h)*x"),
            ("h + h^2", "h + h^2"),
            ("h^-1 y x", "h^-1*x*y - y^2"),
        ]
        for text, expected in cases:
            with self.subTest(text=text):
                code, out, _ = run_cli(["reduce", text])
                self.assertEqual(code, EXIT_OK)
                self.assertEqual(out.strip(), expected)

    def test_parse_error(self):
        """Test that parse errors exit with 2."""
        code, out, err = run_cli(["reduce", "x +"])
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("hplane: error: expected an operand", err)


class TestArgumentErrors(unittest.TestCase):
    """Test argparse failures."""

    def test_unknown_suite(self):
        """Test that suite names are validated."""
        with self.assertRaises(SystemExit) as ctx:
            run_cli(["verify", "nope"])
        self.assertEqual(ctx.exception.code, 2)

    def test_missing_command(self):
        """Test that a subcommand is required."""
        with self.assertRaises(SystemExit) as ctx:
            run_cli([])
        self.assertEqual(ctx.exception.code, 2)

    def test_version(self):
        """Test --version."""
        out = io.StringIO()
        with redirect_stdout(out):
            with self.assertRaises(SystemExit) as ctx:
                build_parser().parse_args(["--version"])
        self.assertEqual(ctx.exception.code, 0)
        self.assertIn(__version__, out.getvalue())


class TestTableCommand(unittest.TestCase):
    """Test hplane table."""

    def test_sigma(self):
        """Test the sigma action table."""
        code, out, _ = run_cli(["table", "sigma"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("sigma(xi (x) xi) = ", out)
        self.assertEqual(len(out.strip().split("\n")), 4)

    def test_e_action(self):
        """Test e_1 u = v."""
        _, out, _ = run_cli(["table", "e-action"])
        self.assertIn("e1(u) = v", out.split("\n"))

    def test_vector_fields(self):
        """Test the field table rows."""
        _, out, _ = run_cli(["table", "vector-fields"])
        lines = out.strip().split("\n")
        self.assertEqual(len(lines), 7)
        self.assertTrue(lines[0].startswith("field"))


class TestConnectionCommand(unittest.TestCase):
    """Test hplane connection."""

    def test_torsion(self):
        """Test that the mu = 1, rho = 0 connection is torsion free."""
        code, out, _ = run_cli(["connection", "--mu", "1", "--rho", "0", "--check", "torsion"])
        self.assertEqual(code, EXIT_OK)
        self.assertIn("[PASS] connection.plane[mu=1,rho=0].torsion.xi", out)
        self.assertEqual(out.strip().split("\n")[-1], "2 checks: 2 passed, 0 failed, 0 reported")

    def test_bad_parameter(self):
        """Test a parameter that is not rational."""
        code, _, err = run_cli(["connection", "--mu", "abc", "--rho", "0", "--check", "torsion"])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("invalid connection parameter", err)


class TestVerifyCommand(unittest.TestCase):
    """Test hplane verify."""

    def test_json_output(self):
        """Test that the exit code agrees with the JSON counts."""
        code, out, _ = run_cli(["verify", "sigma-braid", "--format", "json", "--seed", "3"])
        data = json.loads(out)
        self.assertEqual(data["suite"], "sigma-braid")
        expected = EXIT_OK if data["failed"] == 0 and "errors" not in data else EXIT_FAILED
        self.assertEqual(code, expected)

    def test_bad_config(self):
        """Test that configuration errors exit with 2."""
        code, _, err = run_cli(["verify", "qgroup", "--config", "/nonexistent/config.json"])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Failed to load configuration", err)


if __name__ == '__main__':
    unittest.main()
