"""Tests for report and profile formatters."""

import csv
import io
import json

import pytest
import yaml

from cone_certify.certificate import Verdict
from cone_certify.formatters import (
    CLAIM_COLUMNS,
    PROFILE_COLUMNS,
    CsvFormatter,
    JsonFormatter,
    YamlFormatter,
    claims_table_rows,
    format_profile,
    get_formatter,
    write_report,
)
from cone_certify.report import ClaimRecord, new_report

SAMPLE_PROFILE = [
    {"r": 0.5, "t": -0.25, "v_midpoint": 0.1, "w_midpoint": 0.75, "G_midpoint": 1.0, "grad_sq_midpoint": 0.5},
    {"r": 1.0, "t": 0.5, "v_midpoint": 0.2, "w_midpoint": None, "G_midpoint": 1.1, "grad_sq_midpoint": 0.6},
]


@pytest.fixture
def report():
    report = new_report("supersolution", {"command": "supersolution", "rows": "all"})
    report.add_claim(
        ClaimRecord(
            claim_id="row1/condition1",
            verdict=Verdict.PASS,
            summary="all cells certified",
            detail={"counts": {"pass": 10, "vacuous": 2, "excluded": 1}, "failed_cell_count": 0},
        )
    )
    report.add_claim(
        ClaimRecord(claim_id="qs/piecewise/as_written", verdict=Verdict.FAIL, informational=True, summary="failed")
    )
    return report


class TestJsonFormatter:
    """Tests for JsonFormatter."""

    def test_round_trips_as_json(self, report):
        data = json.loads(JsonFormatter().format(report))
        assert data["command"] == "supersolution"
        assert data["verdict"] == "pass"
        assert [c["claim_id"] for c in data["claims"]] == ["row1/condition1", "qs/piecewise/as_written"]

    def test_sorted_keys(self, report):
        text = JsonFormatter().format(report)
        assert text.index('"claims"') < text.index('"command"')


class TestYamlFormatter:
    """Tests for YamlFormatter."""

    def test_parses(self, report):
        data = yaml.safe_load(YamlFormatter().format(report))
        assert data["claims"][1]["informational"] is True
        assert data["schema_version"] == "1"


class TestCsvFormatter:
    """Tests for CsvFormatter."""

    def test_one_line_per_claim(self, report):
        rows = list(csv.reader(io.StringIO(CsvFormatter().format(report))))
        assert tuple(rows[0]) == CLAIM_COLUMNS
        assert len(rows) == 3
        assert rows[1][:6] == ["row1/condition1", "pass", "false", "10", "2", "1"]
        assert rows[2][2] == "true"


class TestProfile:
    """Tests for profile CSV."""

    def test_header_and_marker(self):
        lines = format_profile(SAMPLE_PROFILE).splitlines()
        assert lines[0] == "# non-rigorous midpoint samples"
        assert tuple(lines[1].split(",")) == PROFILE_COLUMNS

    def test_missing_w_is_blank(self):
        lines = format_profile(SAMPLE_PROFILE).splitlines()
        assert lines[3].split(",")[3] == ""
        assert lines[2].split(",")[3] == "0.75"


class TestGetFormatter:
    """Tests for get_formatter function."""

    @pytest.mark.parametrize("name,cls", [("json", JsonFormatter), ("yaml", YamlFormatter), ("yml", YamlFormatter), ("csv", CsvFormatter)])
    def test_known_formats(self, name, cls):
        assert isinstance(get_formatter(name), cls)

    def test_case_insensitive(self):
        assert isinstance(get_formatter("JSON"), JsonFormatter)

    def test_invalid_format(self):
        with pytest.raises(ValueError, match="Invalid format"):
            get_formatter("xml")


class TestClaimsTable:
    """Tests for the console table rows."""

    def test_informational_marked(self, report):
        rows = claims_table_rows(report)
        assert rows[0] == ["row1/condition1", "pass", "all cells certified"]
        assert rows[1][1] == "fail (info)"


class TestWriteReport:
    """Tests for writing reports to disk."""

    def test_json_default(self, report, tmp_path):
        path = write_report(report, tmp_path / "out" / "report.json")
        assert json.loads(path.read_text())["command"] == "supersolution"

    def test_yaml(self, report, tmp_path):
        path = write_report(report, tmp_path / "report.yml", "yaml")
        assert yaml.safe_load(path.read_text())["verdict"] == "pass"

    def test_invalid_format_writes_nothing(self, report, tmp_path):
        with pytest.raises(ValueError):
            write_report(report, tmp_path / "report.xml", "xml")
        assert not (tmp_path / "report.xml").exists()
