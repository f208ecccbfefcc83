"""Certificate containers for grid claims."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from .grid import CellRecord, SweepResult


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {Verdict.PASS: 0, Verdict.FAIL: 1, Verdict.INCONCLUSIVE: 2}[self]


def combine(verdicts: List["Verdict"]) -> "Verdict":
    """FAIL dominates INCONCLUSIVE, which dominates PASS."""
    if any(v == Verdict.FAIL for v in verdicts):
        return Verdict.FAIL
    if any(v == Verdict.INCONCLUSIVE for v in verdicts):
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


@dataclass
class SubintervalResult:
    """Sweep outcome for one c-subinterval."""

    c: Tuple[float, float]
    sweep: SweepResult
    notes: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def verdict(self) -> Verdict:
        if self.error is not None:
            return Verdict.INCONCLUSIVE
        if self.sweep.failures:
            return Verdict.FAIL
        # excluded cells are neither passes nor failures
        return Verdict.PASS if self.sweep.passed else Verdict.INCONCLUSIVE


class GridCertificate:
    """Container for the per-cell outcome of one claim."""

    def __init__(self, claim_id: str, parameters: Optional[Dict[str, Any]] = None):
        self.claim_id = claim_id
        self.parameters: Dict[str, Any] = dict(parameters or {})
        self.subintervals: List[SubintervalResult] = []
        self.notes: List[str] = []

    def add(self, result: SubintervalResult) -> None:
        self.subintervals.append(result)

    @property
    def total(self) -> SweepResult:
        merged = SweepResult()
        for sub in self.subintervals:
            merged = merged.merge(sub.sweep)
        return merged

    @property
    def failed_cells(self) -> List[CellRecord]:
        return self.total.failures

    @property
    def errors(self) -> List[str]:
        return [f"c in [{s.c[0]!r}, {s.c[1]!r}]: {s.error}" for s in self.subintervals if s.error]

    @property
    def has_errors(self) -> bool:
        """True if any cell failed or a subinterval could not be processed."""
        return bool(self.failed_cells or self.errors)

    @property
    def verdict(self) -> Verdict:
        if not self.subintervals:
            return Verdict.INCONCLUSIVE
        return combine([s.verdict for s in self.subintervals])

    def get_summary(self) -> str:
        total = self.total
        lines = []
        if total.failures:
            lines.append(f"❌ {len(total.failures)} cells not certified")
        if self.errors:
            lines.append(f"❌ {len(self.errors)} subintervals could not be processed")
        if total.excluded:
            lines.append(f"⚠️  {len(total.excluded)} cells excluded (no series bound)")
        if total.counts.get("vacuous"):
            lines.append(f"⚠️  {total.counts['vacuous']} cells vacuous")
        if not lines:
            return f"✅ {self.claim_id}: all {total.counts['pass']} cells certified"
        if self.verdict == Verdict.PASS:
            lines.insert(0, f"✅ {self.claim_id}: {total.counts['pass']} cells certified")
        elif not self.has_errors:
            lines.insert(
                0, f"⚠️  {self.claim_id}: {total.counts['pass']} cells certified, claim inconclusive"
            )
        return "\n".join(lines)

    def to_dict(self, max_cells: int = 50) -> Dict[str, Any]:
        total = self.total
        return {
            "claim_id": self.claim_id,
            "verdict": self.verdict.value,
            "parameters": self.parameters,
            "counts": total.counts,
            "evaluated": total.evaluated,
            "max_depth": total.max_depth,
            "minimum": _cell_dict(total.minimum) if total.minimum else None,
            "failed_cells": [_cell_dict(c) for c in total.failures[:max_cells]],
            "failed_cell_count": len(total.failures),
            "excluded_cells": [_cell_dict(c) for c in total.excluded[:max_cells]],
            "excluded_cell_count": len(total.excluded),
            "subintervals": [
                {
                    "c": [endpoint_dict(s.c[0]), endpoint_dict(s.c[1])],
                    "verdict": s.verdict.value,
                    "counts": s.sweep.counts,
                    "minimum": _cell_dict(s.sweep.minimum) if s.sweep.minimum else None,
                    "notes": s.notes,
                    "error": s.error,
                }
                for s in self.subintervals
            ],
            "notes": self.notes,
        }


def endpoint_dict(x: float) -> Dict[str, str]:
    """Shortest round-trip decimal plus exact hexadecimal form."""
    x = float(x)
    return {"decimal": repr(x), "hex": x.hex()}


def _cell_dict(cell: CellRecord) -> Dict[str, Any]:
    return {
        "lo": [endpoint_dict(x) for x in cell.lo],
        "hi": [endpoint_dict(x) for x in cell.hi],
        "status": cell.status,
        "margin": endpoint_dict(cell.margin),
        "depth": cell.depth,
    }
