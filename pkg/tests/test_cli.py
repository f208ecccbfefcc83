"""Tests for the command-line interface."""

import csv
import io
import json

import pytest
from typer.testing import CliRunner

from cone_certify.cli import app, build_config

runner = CliRunner()


def profile_rows(output: str):
    lines = [line for line in output.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


class TestBuildConfig:
    """Tests for merging options with config files."""

    def test_none_options_dropped(self):
        config = build_config("critical", None, tol=None, search="0.55,0.6")
        assert config.tol == 1e-6
        assert config.search == (0.55, 0.6)

    def test_options_override_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("tol: 0.001\nsearch: [0.5, 0.7]\n")
        config = build_config("critical", str(path), tol=1e-4)
        assert config.tol == 1e-4
        assert config.command == "critical"


class TestReportSchema:
    """Tests for the report-schema command."""

    def test_prints_schema(self):
        result = runner.invoke(app, ["report-schema"])
        assert result.exit_code == 0
        schema = json.loads(result.stdout)
        assert "claims" in schema["properties"]

    def test_writes_schema(self, tmp_path):
        path = tmp_path / "schema.json"
        result = runner.invoke(app, ["report-schema", "--out", str(path)])
        assert result.exit_code == 0
        assert json.loads(path.read_text())["title"] == "Report"


class TestProfile:
    """Tests for the profile command."""

    def test_homogeneous_part_at_c_zero(self):
        # c = 0 and eps = 0 leave v = r t
        result = runner.invoke(app, ["profile", "--c", "0", "--eps", "0", "--grid", "4x5"])
        assert result.exit_code == 0
        rows = profile_rows(result.stdout)
        assert len(rows) == 20
        for row in rows:
            assert float(row["v_midpoint"]) == pytest.approx(float(row["r"]) * float(row["t"]), abs=1e-12)
            assert float(row["grad_sq_midpoint"]) == pytest.approx(1.0, abs=1e-12)
            assert row["w_midpoint"] != ""

    def test_no_row_beyond_table(self):
        result = runner.invoke(app, ["profile", "--c", "0.5", "--grid", "2x2"])
        assert result.exit_code == 0
        assert all(row["w_midpoint"] == "" for row in profile_rows(result.stdout))

    def test_writes_file(self, tmp_path):
        path = tmp_path / "profile.csv"
        result = runner.invoke(app, ["profile", "--c", "0.2", "--grid", "2x3", "--out", str(path)])
        assert result.exit_code == 0
        assert len(profile_rows(path.read_text())) == 6


class TestErrors:
    """Configuration errors exit with code 2."""

    def test_bad_search(self):
        result = runner.invoke(app, ["critical", "--search", "0.7,0.5"])
        assert result.exit_code == 2
        assert "Error" in result.stdout

    def test_missing_config(self, tmp_path):
        result = runner.invoke(app, ["critical", "--config", str(tmp_path / "missing.yaml")])
        assert result.exit_code == 2

    def test_unknown_format(self):
        result = runner.invoke(app, ["supersolution", "--row", "2", "--format", "xml"])
        assert result.exit_code == 2
        assert "Invalid format" in result.stdout

    def test_unknown_row(self):
        result = runner.invoke(app, ["supersolution", "--row", "9"])
        assert result.exit_code == 2

    def test_qs_range_outside_families(self):
        result = runner.invoke(app, ["qs", "--c", "0,0.4"])
        assert result.exit_code == 2

    def test_bad_grid(self):
        result = runner.invoke(app, ["subsolution", "--grid", "ten"])
        assert result.exit_code == 2


class TestBounds:
    """Tests for the bounds command."""

    def test_table_and_report(self, tmp_path):
        path = tmp_path / "bounds.json"
        result = runner.invoke(app, ["bounds", "--out", str(path)])
        assert result.exit_code == 0
        assert "Modulus bounds" in result.stdout
        data = json.loads(path.read_text())
        assert data["verdict"] == "pass"
        assert len(data["enclosures"]["modulus_bounds"]["rows"]) == 3
