"""Tests for the report model."""

import json

from cone_certify import __version__
from cone_certify.certificate import Verdict
from cone_certify.interval import Interval
from cone_certify.report import (
    DISCREPANCIES,
    SCHEMA_VERSION,
    VOLATILE_FIELDS,
    ClaimRecord,
    interval_dict,
    new_report,
    overall_verdict,
    report_schema,
)


def claim(verdict: Verdict, informational: bool = False) -> ClaimRecord:
    return ClaimRecord(claim_id="c", verdict=verdict, informational=informational)


class TestVerdict:
    """Tests for combining claim verdicts."""

    def test_informational_ignored(self):
        assert overall_verdict([claim(Verdict.PASS), claim(Verdict.FAIL, informational=True)]) == Verdict.PASS

    def test_no_binding_claims(self):
        assert overall_verdict([claim(Verdict.PASS, informational=True)]) == Verdict.INCONCLUSIVE

    def test_fail_dominates(self):
        assert overall_verdict([claim(Verdict.INCONCLUSIVE), claim(Verdict.FAIL)]) == Verdict.FAIL

    def test_exit_code_follows_claims(self):
        report = new_report("qs", {})
        report.add_claim(claim(Verdict.PASS))
        assert report.exit_code == 0
        report.add_claim(claim(Verdict.INCONCLUSIVE))
        assert report.exit_code == 2


class TestReport:
    """Tests for report contents."""

    def test_metadata(self):
        report = new_report("critical", {"tol": 1e-6})
        assert report.schema_version == SCHEMA_VERSION
        assert report.tool_version == __version__
        assert report.discrepancies == DISCREPANCIES
        assert "numpy" in report.environment
        assert report.created_at

    def test_stable_json_drops_volatile_fields(self):
        data = json.loads(new_report("critical", {}).to_json(stable=True))
        for name in VOLATILE_FIELDS:
            assert name not in data
        assert "claims" in data

    def test_stable_json_is_reproducible(self):
        a = new_report("critical", {"tol": 1e-6})
        b = new_report("critical", {"tol": 1e-6})
        assert a.to_json(stable=True) == b.to_json(stable=True)

    def test_interval_dict(self):
        data = interval_dict(Interval(0.5, 0.75))
        assert data["lo"] == {"decimal": "0.5", "hex": "0x1.0000000000000p-1"}
        assert data["width"]["decimal"] == "0.25"

    def test_schema(self):
        schema = report_schema()
        assert "claims" in schema["properties"]
        assert "verdict" in schema["properties"]
