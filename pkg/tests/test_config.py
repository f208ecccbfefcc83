"""Tests for run configuration and coefficient rows."""

import json

import pytest
import yaml

from cone_certify.config import ROWS_PATH, RunConfig, SupersolutionRow, load_rows, rows_digest


@pytest.fixture
def rows_data():
    with open(ROWS_PATH, "r") as f:
        return json.load(f)


class TestCoefficientRows:
    """Tests for the bundled coefficient table."""

    def test_bundled_rows_match_digest(self):
        table = load_rows()
        assert not table.custom
        assert [row.id for row in table.rows] == ["1", "2", "3", "4"]

    def test_row_two_subintervals(self):
        row = load_rows().get_row("2")
        assert len(row.c_subintervals) == 11
        assert row.c_subintervals[0] == ("0.3", "0.31")
        assert row.a == ("0.19", "1.005", "-0.09", "0.03")

    def test_select(self):
        table = load_rows()
        assert [row.id for row in table.select("all")] == ["1", "2", "3", "4"]
        assert [row.id for row in table.select("2,4")] == ["2", "4"]
        with pytest.raises(ValueError):
            table.select("7")

    def test_row_for(self):
        table = load_rows()
        assert table.row_for(0.25).id == "1"
        assert table.row_for(0.415).id == "3"
        assert table.row_for(0.5) is None

    def test_modified_rows_rejected(self, rows_data, tmp_path):
        rows_data["rows"][0]["epsilon"] = "0.3"
        path = tmp_path / "rows.json"
        path.write_text(json.dumps(rows_data))
        with pytest.raises(ValueError):
            load_rows(path)

    def test_modified_rows_allowed(self, rows_data, tmp_path):
        rows_data["rows"][0]["epsilon"] = "0.3"
        path = tmp_path / "rows.json"
        path.write_text(json.dumps(rows_data))
        table = load_rows(path, allow_custom=True)
        assert table.custom
        assert table.sha256 == rows_digest(rows_data["rows"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_rows(tmp_path / "missing.json")

    def test_row_beyond_table_range(self):
        with pytest.raises(ValueError):
            SupersolutionRow(id="5", c_lo="0.43", c_hi="4.3", epsilon="0.1", a=["0", "1", "0", "0"])

    def test_subinterval_outside_row(self):
        with pytest.raises(ValueError):
            SupersolutionRow(
                id="x", c_lo="0", c_hi="0.1", epsilon="0.1", a=["0", "1", "0", "0"], c_subintervals=[["0", "0.2"]]
            )

    def test_negative_epsilon_rejected(self):
        with pytest.raises(ValueError):
            SupersolutionRow(id="x", c_lo="0", c_hi="0.1", epsilon="-0.1", a=["0", "1", "0", "0"])

    def test_covers(self):
        row = load_rows().get_row("1")
        assert row.covers(0.3)
        assert not row.covers(0.31)


class TestRunConfig:
    """Tests for RunConfig validation."""

    def test_defaults(self):
        config = RunConfig(command="critical")
        assert config.search == (0.5, 0.7)
        assert config.tol == 1e-6
        assert config.threads >= 1

    def test_grid_parsing(self):
        assert RunConfig(command="subsolution", grid="10x5").grid == (10, 5)
        assert RunConfig(command="subsolution", grid=[3, 4]).grid == (3, 4)

    @pytest.mark.parametrize(
        "options",
        [
            {"grid": "10by5"},
            {"grid": "0x5"},
            {"c_range": "0.3,0.1"},
            {"c_range": "-0.1,0.2"},
            {"search": "0.7,0.5"},
            {"variant": "loose"},
            {"mode": "spline"},
            {"t_floor": 0.5},
            {"tol": 0},
            {"rho": "1,30"},
            {"depth": -1},
            {"threads": 0},
        ],
    )
    def test_invalid_options(self, options):
        with pytest.raises(ValueError):
            RunConfig(command="subsolution", **options)

    def test_unknown_command(self):
        with pytest.raises(ValueError):
            RunConfig(command="deploy")

    def test_c_range_kept_as_decimal_text(self):
        config = RunConfig(command="subsolution", c_range="0,0.58828")
        assert config.c_range == ("0", "0.58828")

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("CONE_CERTIFY_THREADS", "3")
        assert RunConfig(command="critical").threads == 3

    def test_from_yaml(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump({"command": "supersolution", "rows": "2", "grid": "100x10"}))
        config = RunConfig.from_file(path)
        assert config.rows == "2"
        assert config.grid == (100, 10)

    def test_from_json_with_override(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"command": "critical", "tol": 1e-3}))
        config = RunConfig.from_file(path, tol=1e-5, search=None)
        assert config.tol == 1e-5
        assert config.search == (0.5, 0.7)

    def test_unsupported_file(self, tmp_path):
        path = tmp_path / "run.txt"
        path.write_text("command: critical")
        with pytest.raises(ValueError):
            RunConfig.from_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            RunConfig.from_file(tmp_path / "missing.yaml")

    def test_echo_is_serialisable(self):
        echo = RunConfig(command="qs", c_range="0,0.3").echo()
        assert json.loads(json.dumps(echo))["c_range"] == ["0", "0.3"]
