"""Report model, endpoint rendering and environment fingerprint."""

import json
import os
import platform
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

from . import __version__
from .certificate import GridCertificate, Verdict, combine, endpoint_dict
from .interval import Interval

SCHEMA_VERSION = "1"

# Fields that may differ between otherwise identical runs.
VOLATILE_FIELDS = ("created_at", "wall_time_s", "environment")

DISCREPANCIES = [
    "the main statement reads c <= 4.3 while the coefficient table stops at c = 0.43 "
    "and c0 is about 0.5884; c <= 0.43 is implemented",
    "row 2 subintervals written [(30+j)/10, (31+j)/10] are read as [(30+j)/100, (31+j)/100]",
]


class ClaimRecord(BaseModel):
    """Outcome of one claim; informational claims never affect the overall verdict."""

    claim_id: str
    verdict: Verdict
    informational: bool = False
    summary: str = ""
    detail: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None

    @classmethod
    def from_certificate(cls, certificate: GridCertificate, informational: bool = False) -> "ClaimRecord":
        return cls(
            claim_id=certificate.claim_id,
            verdict=certificate.verdict,
            informational=informational,
            summary=certificate.get_summary(),
            detail=certificate.to_dict(),
        )


class Report(BaseModel):
    """Everything needed to audit one run."""

    schema_version: str = SCHEMA_VERSION
    tool_version: str = __version__
    command: str
    config: Dict[str, Any]
    verdict: Verdict = Verdict.INCONCLUSIVE
    claims: List[ClaimRecord] = Field(default_factory=list)
    enclosures: Dict[str, Any] = Field(default_factory=dict)
    discrepancies: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    environment: Dict[str, Any] = Field(default_factory=dict)
    created_at: str = ""
    wall_time_s: float = 0.0

    def add_claim(self, claim: ClaimRecord) -> None:
        self.claims.append(claim)
        self.verdict = overall_verdict(self.claims)

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def to_json(self, stable: bool = False) -> str:
        """JSON text; ``stable`` drops the fields that vary between identical runs."""
        data = self.model_dump(mode="json", exclude=set(VOLATILE_FIELDS) if stable else None)
        return json.dumps(data, indent=2, sort_keys=True)


def overall_verdict(claims: List[ClaimRecord]) -> Verdict:
    binding = [c.verdict for c in claims if not c.informational]
    if not binding:
        return Verdict.INCONCLUSIVE
    return combine(binding)


def interval_dict(x: Interval) -> Dict[str, Any]:
    """Endpoints of a scalar interval in decimal and hex form, with its width."""
    lo, hi = x.to_pair()
    return {"lo": endpoint_dict(lo), "hi": endpoint_dict(hi), "width": endpoint_dict(float(x.width))}


def fingerprint() -> Dict[str, Any]:
    return {
        "python": sys.version.split()[0],
        "implementation": platform.python_implementation(),
        "numpy": np.__version__,
        "platform": platform.platform(),
        "machine": platform.machine(),
        "cpu_count": os.cpu_count(),
    }


def new_report(command: str, config: Dict[str, Any]) -> Report:
    return Report(
        command=command,
        config=config,
        discrepancies=list(DISCREPANCIES),
        environment=fingerprint(),
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def report_schema() -> Dict[str, Any]:
    """JSON schema of the report document."""
    return Report.model_json_schema()
