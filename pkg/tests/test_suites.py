"""
Unit tests for hplane.suites.
Covers configuration loading, seeding, scheduling and group failures.
"""

import unittest
import sys
import os
import json
import tempfile
from unittest import mock

# Add parent directory to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from hplane.calculus import C_PLANE
from hplane.report import ERROR, FAIL, PASS, REPORTED, emit_report
from hplane.suites import (
    DEFAULT_CONFIG,
    SUITE_NAMES,
    SUITES,
    SuiteContext,
    VerificationSuite,
    kappa_checks,
    raises,
    run_suite,
    sampled,
)
from hplane.exceptions import SuiteError

SMALL_CONFIG = {
    "suite_settings": {"seed": 11, "jobs": 1},
    "random_cases": {
        "confluence_words": 20,
        "confluence_max_length": 3,
        "confluence_exponent_range": [-1, 1],
        "calculus_samples": 3,
        "centrality_samples": 3,
        "dirac_samples": 3,
        "wess_zumino_cases": 3,
        "wess_zumino_max_degree": 2,
        "poisson_samples": 3,
        "jacobi_triples": 3,
    },
    "connections": {"parameters": [["1", "0"]], "varpi_n": [2], "varpi_half_n": [3]},
}


class SuiteTestCase(unittest.TestCase):
    """Writes a small configuration file and clears HPLANE_SEED."""

    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.config_path = os.path.join(self.tmpdir.name, "config.json")
        self.write_config(SMALL_CONFIG)
        patcher = mock.patch.dict(os.environ)
        patcher.start()
        self.addCleanup(patcher.stop)
        os.environ.pop("HPLANE_SEED", None)

    def tearDown(self):
        self.tmpdir.cleanup()

    def write_config(self, config, path=None):
        with open(path or self.config_path, "w", encoding="utf-8") as f:
            if isinstance(config, str):
                f.write(config)
            else:
                json.dump(config, f)


class TestConfiguration(SuiteTestCase):
    """Test configuration and seed resolution."""

    def test_packaged_defaults(self):
        """Test the packaged config.json."""
        self.assertTrue(DEFAULT_CONFIG.exists())
        suite = VerificationSuite()
        self.assertEqual((suite.seed, suite.jobs), (1729, 1))

    def test_custom_config(self):
        """Test reading a configuration file."""
        suite = VerificationSuite(self.config_path)
        self.assertEqual(suite.seed, 11)
        self.assertEqual(suite.context().cases("dirac_samples"), 3)

    def test_seed_precedence(self):
        """Test argument over HPLANE_SEED over the file."""
        os.environ["HPLANE_SEED"] = "7"
        self.assertEqual(VerificationSuite(self.config_path).seed, 7)
        self.assertEqual(VerificationSuite(self.config_path, seed=3).seed, 3)

    def test_bad_seed_env(self):
        """Test a non-integer HPLANE_SEED."""
        os.environ["HPLANE_SEED"] = "abc"
        with self.assertRaisesRegex(SuiteError, "HPLANE_SEED must be an integer"):
            VerificationSuite(self.config_path)

    def test_malformed_config(self):
        """Test unreadable and incomplete files."""
        cases = ["{not json", json.dumps({"random_cases": {}})]
        for text in cases:
            with self.subTest(text=text):
                self.write_config(text)
                with self.assertRaisesRegex(SuiteError, "Failed to load configuration"):
                    VerificationSuite(self.config_path)

    def test_missing_file(self):
        """Test a path that does not exist."""
        missing = os.path.join(self.tmpdir.name, "absent.json")
        with self.assertRaisesRegex(SuiteError, "Failed to load configuration"):
            VerificationSuite(missing)

    def test_jobs(self):
        """Test that at least one worker is required."""
        with self.assertRaisesRegex(SuiteError, "jobs must be at least 1"):
            VerificationSuite(self.config_path, jobs=0)

    def test_unknown_suite(self):
        """Test an unknown suite name."""
        with self.assertRaisesRegex(SuiteError, "unknown suite 'nope'"):
            VerificationSuite(self.config_path).groups("nope")

    def test_suite_names(self):
        """Test that 'all' covers every suite."""
        self.assertEqual(SUITE_NAMES[-1], "all")
        suite = VerificationSuite(self.config_path)
        total = sum(len(groups) for groups in SUITES.values())
        self.assertEqual(len(suite.groups("all")), total)


class TestSuiteContext(unittest.TestCase):
    """Test per-group randomness and settings."""

    def test_rng_is_per_group(self):
        """Test that each group has its own reproducible stream."""
        ctx = SuiteContext(5)
        first = [ctx.rng("a").randint(0, 10 ** 9) for _ in range(3)]
        self.assertEqual(first, [ctx.rng("a").randint(0, 10 ** 9) for _ in range(3)])
        a = ctx.rng("a")
        b = ctx.rng("b")
        self.assertNotEqual([a.random() for _ in range(4)], [b.random() for _ in range(4)])

    def test_missing_case_count(self):
        """Test a missing random_cases key."""
        with self.assertRaisesRegex(SuiteError, "missing or invalid random_cases.dirac_samples"):
            SuiteContext(1).cases("dirac_samples")

    def test_parameters(self):
        """Test parsing of connection parameters."""
        ctx = SuiteContext(1, connections={"parameters": [["1/2", "-3"]]})
        ((mu, rho),) = ctx.parameters()
        self.assertEqual((str(mu), str(rho)), ("1/2", "-3"))


class TestHelpers(unittest.TestCase):
    """Test sampled and raises."""

    def test_sampled(self):
        """Test that the first mismatch is kept."""
        self.assertEqual(sampled("a", "eq", [(1, 1), (2, 2)]).lhs, "2 cases")
        record = sampled("b", "eq", [(1, 1), (2, 3), (4, 5)])
        self.assertEqual((record.status, record.lhs, record.rhs), (FAIL, "2", "3"))

    def test_raises(self):
        """Test expected and missing exceptions."""
        self.assertEqual(raises("a", "div", lambda: 1 // 0, ZeroDivisionError, "division").status,
                         PASS)
        self.assertEqual(raises("b", "div", lambda: 1, ZeroDivisionError, "division").status, FAIL)
        wrong = raises("c", "div", lambda: 1 // 0, ZeroDivisionError, "overflow")
        self.assertEqual(wrong.status, FAIL)


class TestRunning(SuiteTestCase):
    """Test running suites."""

    def test_sigma_braid(self):
        """Test that the braid and sigma table checks pass."""
        report = run_suite("sigma-braid", self.config_path)
        for check_id in ("braid.ybe.plane", "braid.ybe.plane2", "sigma.plane.braid",
                         "sigma.plane.table.xi-xi", "sigma.plane.table.eta-xi",
                         "kappa.central.x", "kappa.square"):
            with self.subTest(check=check_id):
                self.assertEqual(report.find(check_id).status, PASS)
        ids = [r.check_id for r in report.checks]
        self.assertEqual(ids, sorted(ids))

    def test_jobs_do_not_change_output(self):
        """Test that threads give the same canonical report."""
        one = run_suite("sigma-braid", self.config_path, jobs=1)
        two = run_suite("sigma-braid", self.config_path, jobs=2)
        self.assertEqual(emit_report(one, "json"), emit_report(two, "json"))

    def test_every_suite_passes(self):
        """Test that no suite has a failed or errored record."""
        for name in SUITES:
            with self.subTest(suite=name):
                report = run_suite(name, self.config_path)
                self.assertGreater(len(report.checks), 0)
                self.assertEqual(report.failed, 0)
                self.assertEqual(report.errors, 0)
                self.assertTrue(report.ok)

    def test_kappa_sigma_is_asserted(self):
        """Test that a broken sigma eigenrelation fails the kappa group."""
        records = {r.check_id: r for r in kappa_checks(SuiteContext(1))}
        for label in ("xi-kappa", "kappa-xi", "eta-kappa", "kappa-eta", "kappa-kappa"):
            with self.subTest(pair=label):
                self.assertEqual(records[f"kappa.sigma.{label}"].status, PASS)
        wrong = (C_PLANE.tensor_basis(("xi", "eta")), C_PLANE.tensor_basis(("eta", "xi")))
        with mock.patch("hplane.suites.kappa_sigma_table", return_value={"xi-kappa": wrong}):
            records = {r.check_id: r for r in kappa_checks(SuiteContext(1))}
        self.assertEqual(records["kappa.sigma.xi-kappa"].status, FAIL)

    def test_leibniz_is_asserted(self):
        """Test that the left Leibniz rule is a passing check, not a reported one."""
        report = run_suite("connections", self.config_path)
        record = report.find("connection.plane[mu=1,rho=0].leibniz.left")
        self.assertEqual(record.status, PASS)
        self.assertEqual(report.find("connection.plane[mu=1,rho=0].d2kappa").status, PASS)
        self.assertNotIn(REPORTED, [r.status for r in report.checks
                                    if r.check_id.startswith("connection.plane[")])

    def test_group_error_becomes_record(self):
        """Test that a raising group yields an error record."""
        def boom(ctx):
            raise RuntimeError("exploded")

        with mock.patch.dict(SUITES, {"boom": [("boom-group", boom)]}):
            report = VerificationSuite(self.config_path).run("boom")
        record = report.find("boom-group.error")
        self.assertEqual(record.status, ERROR)
        self.assertIn("RuntimeError: exploded", record.defect)
        self.assertFalse(report.ok)
        self.assertEqual(json.loads(emit_report(report, "json"))["errors"], 1)


if __name__ == '__main__':
    unittest.main()
