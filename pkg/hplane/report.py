"""
Verification records and report emitters.

A suite produces one CheckRecord per identity it evaluates. Records are
collected in a Report and written either as canonical JSON or as one line of
text per check.

JSON format:
    {"suite":"sigma-braid","checks":[{"check_id":...,"paper_eq":...,
     "status":"pass","lhs":...,"rhs":...,"defect":...}],
     "passed":1,"failed":0,"reported":0}

    - compact separators, keys in fixed order
    - "paper_eq" holds the identity statement of the record
    - "errors" appears only when at least one record has status "error"
    - checks sorted by check_id; wall time is never part of the JSON

Text format:
    [PASS] sigma.square.xi-xi (sigma^2 = 1)
    [REPORTED] plane2.varpi.half.n3 (pi(varpi) = 0)
        lhs: ...
        rhs: ...
        defect: ...
    3 checks: 2 passed, 0 failed, 1 reported (0.41s)
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .exceptions import HPlaneError, SuiteError

PASS = "pass"
FAIL = "fail"
REPORTED = "reported"
ERROR = "error"
STATUSES = (PASS, FAIL, REPORTED, ERROR)


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of evaluating one identity."""

    check_id: str
    identity: str
    status: str
    lhs: str = ""
    rhs: str = ""
    defect: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise SuiteError(f"unknown check status '{self.status}'")

    def to_dict(self) -> Dict[str, str]:
        return {
            "check_id": self.check_id,
            "paper_eq": self.identity,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "defect": self.defect,
        }


def compare(check_id: str, identity: str, lhs: Any, rhs: Any,
            report_only: bool = False) -> CheckRecord:
    """
    Build a record from two engine values.

    The values are compared with ``==``; the defect is ``lhs - rhs`` when the
    values support subtraction, otherwise "mismatch".

    Args:
        check_id: Stable dotted identifier
        identity: Short human-readable form of the identity
        lhs: Computed value
        rhs: Expected value
        report_only: Emit "reported" instead of "fail" on a mismatch

    Returns:
        The record
    """
    if lhs == rhs:
        return CheckRecord(check_id, identity, PASS, str(lhs), str(rhs), "0")
    try:
        defect = str(lhs - rhs)
    except Exception:
        defect = "mismatch"
    return CheckRecord(check_id, identity, REPORTED if report_only else FAIL,
                       str(lhs), str(rhs), defect)


def vanishes(check_id: str, identity: str, value: Any, report_only: bool = False) -> CheckRecord:
    """Record asserting that an engine value is zero."""
    if not value:
        return CheckRecord(check_id, identity, PASS, str(value), "0", "0")
    return CheckRecord(check_id, identity, REPORTED if report_only else FAIL,
                       str(value), "0", str(value))


def nonzero(check_id: str, identity: str, value: Any) -> CheckRecord:
    """Record asserting that an engine value is nonzero (a witness)."""
    status = PASS if value else FAIL
    return CheckRecord(check_id, identity, status, str(value), "nonzero",
                       "0" if status == PASS else "expected a nonzero value")


def truth(check_id: str, identity: str, holds: bool, detail: str = "") -> CheckRecord:
    return CheckRecord(check_id, identity, PASS if holds else FAIL,
                       str(holds), "True", "" if holds else detail)


def error_record(check_id: str, identity: str, exc: BaseException) -> CheckRecord:
    return CheckRecord(check_id, identity, ERROR, "", "", f"{type(exc).__name__}: {exc}")


@dataclass
class Report:
    """Records of one suite run."""

    suite: str
    checks: List[CheckRecord] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, record: CheckRecord) -> None:
        self.checks.append(record)

    def extend(self, records) -> None:
        self.checks.extend(records)

    def sorted_checks(self) -> List[CheckRecord]:
        return sorted(self.checks, key=lambda r: r.check_id)

    def count(self, status: str) -> int:
        return sum(1 for r in self.checks if r.status == status)

    @property
    def passed(self) -> int:
        return self.count(PASS)

    @property
    def failed(self) -> int:
        return self.count(FAIL)

    @property
    def reported(self) -> int:
        return self.count(REPORTED)

    @property
    def errors(self) -> int:
        return self.count(ERROR)

    @property
    def ok(self) -> bool:
        """True when no record failed or errored."""
        return self.failed == 0 and self.errors == 0

    def find(self, check_id: str) -> Optional[CheckRecord]:
        for record in self.checks:
            if record.check_id == check_id:
                return record
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Canonical object: no timing, checks sorted, fixed key order."""
        out: Dict[str, Any] = {
            "suite": self.suite,
            "checks": [r.to_dict() for r in self.sorted_checks()],
            "passed": self.passed,
            "failed": self.failed,
            "reported": self.reported,
        }
        if self.errors:
            out["errors"] = self.errors
        return out


class ReportEncoder:
    """Encoder for writing reports as canonical JSON or plain text."""

    FORMATS = ("text", "json")

    def __init__(self, fmt: str = "text", show_timing: bool = True):
        """
        Initialize the report encoder.

        Args:
            fmt: "text" or "json"
            show_timing: Add the wall time to the text footer
        """
        if fmt not in self.FORMATS:
            raise SuiteError(f"unknown report format '{fmt}'")
        self.fmt = fmt
        self.show_timing = show_timing

    def encode(self, report: Report) -> str:
        """
        Encode a report.

        Args:
            report: Report to write

        Returns:
            JSON text (no trailing newline) or the text listing

        Raises:
            SuiteError: If encoding fails
        """
        try:
            if self.fmt == "json":
                return json.dumps(report.to_dict(), ensure_ascii=False, separators=(",", ":"))
            return self._encode_text(report)
        except HPlaneError:
            raise
        except Exception as e:
            raise SuiteError(f"Failed to encode report: {str(e)}") from e

    def _encode_text(self, report: Report) -> str:
        lines = []
        for record in report.sorted_checks():
            lines.append(f"[{record.status.upper()}] {record.check_id} ({record.identity})")
            if record.status != PASS:
                lines.append(f"    lhs: {record.lhs}")
                lines.append(f"    rhs: {record.rhs}")
                lines.append(f"    defect: {record.defect}")
        footer = (
            f"{len(report.checks)} checks: {report.passed} passed, {report.failed} failed, "
            f"{report.reported} reported"
        )
        if report.errors:
            footer += f", {report.errors} errors"
        if self.show_timing:
            footer += f" ({report.wall_time:.2f}s)"
        lines.append(footer)
        return "\n".join(lines)


def emit_report(report: Report, fmt: str = "text", show_timing: bool = True) -> str:
    """
    Convenience function to encode a report.

    Args:
        report: Report to write
        fmt: "text" or "json"
        show_timing: Include wall time in the text footer

    Returns:
        Encoded report

    Example:
        >>> emit_report(Report("empty"), fmt="json")
        '{"suite":"empty","checks":[],"passed":0,"failed":0,"reported":0}'
    """
    return ReportEncoder(fmt, show_timing).encode(report)
