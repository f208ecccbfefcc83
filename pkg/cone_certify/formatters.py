"""Formatters for exporting reports and profiles."""

import csv
import io
import json
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

import yaml

from .report import Report

PROFILE_COLUMNS = ("r", "t", "v_midpoint", "w_midpoint", "G_midpoint", "grad_sq_midpoint")
CLAIM_COLUMNS = (
    "claim_id",
    "verdict",
    "informational",
    "pass",
    "vacuous",
    "excluded",
    "failed",
    "min_margin",
    "error",
)


class BaseFormatter(ABC):
    """Base class for report formatters."""

    @abstractmethod
    def format(self, report: Report) -> str:
        """
        Format a report for output.

        Args:
            report: Completed run report

        Returns:
            Formatted string
        """
        pass


class JsonFormatter(BaseFormatter):
    """The full report as JSON (the documented schema)."""

    def format(self, report: Report) -> str:
        return report.to_json()


class YamlFormatter(BaseFormatter):
    """The full report as YAML."""

    def format(self, report: Report) -> str:
        return yaml.safe_dump(report.model_dump(mode="json"), sort_keys=True)


class CsvFormatter(BaseFormatter):
    """One line per claim with cell counts and the smallest margin."""

    def format(self, report: Report) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CLAIM_COLUMNS)
        for claim in report.claims:
            counts = claim.detail.get("counts", {})
            minimum = claim.detail.get("minimum") or {}
            writer.writerow(
                [
                    claim.claim_id,
                    claim.verdict.value,
                    str(claim.informational).lower(),
                    counts.get("pass", ""),
                    counts.get("vacuous", ""),
                    counts.get("excluded", ""),
                    claim.detail.get("failed_cell_count", ""),
                    minimum.get("margin", {}).get("decimal", ""),
                    claim.error or "",
                ]
            )
        return buffer.getvalue()


def format_profile(rows: Sequence[Dict[str, Any]]) -> str:
    """
    Profile samples as CSV with the PROFILE_COLUMNS header.

    Values are floating point midpoints, not enclosures; a missing w is left blank.
    """
    buffer = io.StringIO()
    buffer.write("# non-rigorous midpoint samples\n")
    writer = csv.DictWriter(buffer, fieldnames=PROFILE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if row.get(k) is None else repr(float(row[k])) for k in PROFILE_COLUMNS})
    return buffer.getvalue()


def get_formatter(format_name: str) -> BaseFormatter:
    """
    Get a formatter by name.

    Args:
        format_name: Format name (json, yaml, csv)

    Returns:
        Formatter instance

    Raises:
        ValueError: If format name is invalid
    """
    formatters = {
        "json": JsonFormatter(),
        "yaml": YamlFormatter(),
        "yml": YamlFormatter(),  # Alias
        "csv": CsvFormatter(),
    }

    formatter = formatters.get(format_name.lower())
    if not formatter:
        valid_formats = ", ".join(sorted(set(formatters.keys())))
        raise ValueError(f"Invalid format '{format_name}'. Valid formats: {valid_formats}")

    return formatter


def write_report(report: Report, path: Union[str, Path], format_name: str = "json") -> Path:
    """Write a report in the named format, creating parent directories."""
    text = get_formatter(format_name).format(report)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        f.write(text)
        f.write("\n")
    return path


def claims_table_rows(report: Report) -> List[List[str]]:
    """Rows for the console table: claim, verdict, summary."""
    rows = []
    for claim in report.claims:
        verdict = claim.verdict.value + (" (info)" if claim.informational else "")
        rows.append([claim.claim_id, verdict, claim.error or claim.summary])
    return rows
