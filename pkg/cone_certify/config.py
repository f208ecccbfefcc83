"""Configuration models and loaders for certification runs."""

import hashlib
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .interval import Interval

ROWS_PATH = Path(__file__).parent / "data" / "coefficient_rows.json"
MAX_ROW_C = Fraction("0.43")
VALID_MODES = ("direct", "interp")
VALID_VARIANTS = ("harmonic", "as_written")
VALID_COMMANDS = ("critical", "subsolution", "supersolution", "qs", "profile", "bounds", "report-schema")


def default_threads() -> int:
    """Worker count from CONE_CERTIFY_THREADS (a .env file is honoured), else 1."""
    load_dotenv()
    raw = os.getenv("CONE_CERTIFY_THREADS", "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"CONE_CERTIFY_THREADS must be an integer, got '{raw}'")
    return max(threads, 1)


def _decimal(value: Any) -> str:
    text = str(value).strip()
    try:
        Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{text}' is not a decimal number")
    return text


class SupersolutionRow(BaseModel):
    """One coefficient row: epsilon, the harmonic coefficients a_0..a_3 and its c-subintervals."""

    model_config = ConfigDict(frozen=True)

    id: str
    c_lo: str
    c_hi: str
    epsilon: str
    a: Tuple[str, str, str, str]
    c_subintervals: List[Tuple[str, str]] = Field(default_factory=list)

    @field_validator("c_lo", "c_hi", "epsilon", mode="before")
    @classmethod
    def parse_decimal(cls, v: Any) -> str:
        return _decimal(v)

    @field_validator("a", mode="before")
    @classmethod
    def parse_coefficients(cls, v: Any) -> Tuple[str, ...]:
        if isinstance(v, str):
            v = v.split(",")
        return tuple(_decimal(x) for x in v)

    @field_validator("c_subintervals", mode="before")
    @classmethod
    def parse_subintervals(cls, v: Any) -> List[Tuple[str, str]]:
        return [(_decimal(lo), _decimal(hi)) for lo, hi in v]

    @model_validator(mode="after")
    def check_ranges(self) -> "SupersolutionRow":
        lo, hi = Fraction(self.c_lo), Fraction(self.c_hi)
        if not 0 <= lo < hi:
            raise ValueError(f"row {self.id}: need 0 <= c_lo < c_hi, got [{self.c_lo}, {self.c_hi}]")
        if hi > MAX_ROW_C:
            raise ValueError(f"row {self.id}: c_hi must not exceed {MAX_ROW_C}, got {self.c_hi}")
        # epsilon = 0 is the degenerate case v = r kappa f
        if Fraction(self.epsilon) < 0:
            raise ValueError(f"row {self.id}: epsilon must be non-negative, got {self.epsilon}")
        for a, b in self.c_subintervals:
            if not lo <= Fraction(a) < Fraction(b) <= hi:
                raise ValueError(
                    f"row {self.id}: c-subinterval [{a}, {b}] outside [{self.c_lo}, {self.c_hi}]"
                )
        return self

    @property
    def epsilon_interval(self) -> Interval:
        return Interval.from_text(self.epsilon)

    @property
    def coefficients(self) -> Tuple[Interval, ...]:
        return tuple(Interval.from_text(x) for x in self.a)

    def subinterval_bounds(self) -> List[Tuple[float, float]]:
        """Outward binary64 endpoints of every listed c-subinterval."""
        return [
            (float(Interval.from_text(a).lo), float(Interval.from_text(b).hi))
            for a, b in self.c_subintervals
        ]

    def covers(self, c: float) -> bool:
        return Fraction(self.c_lo) <= Fraction(c) <= Fraction(self.c_hi)


class CoefficientTable(BaseModel):
    """The checked-in coefficient rows together with their digest."""

    version: str = "1"
    description: Optional[str] = None
    sha256: str
    rows: List[SupersolutionRow]
    custom: bool = False

    def get_row(self, row_id: str) -> SupersolutionRow:
        for row in self.rows:
            if row.id == row_id:
                return row
        raise ValueError(f"Row '{row_id}' not found. Valid: {', '.join(r.id for r in self.rows)}")

    def select(self, selection: str) -> List[SupersolutionRow]:
        """Rows for "all" or a comma separated list of ids."""
        if selection.strip() == "all":
            return list(self.rows)
        return [self.get_row(x.strip()) for x in selection.split(",") if x.strip()]

    def row_for(self, c: float) -> Optional[SupersolutionRow]:
        for row in self.rows:
            if row.covers(c):
                return row
        return None


def rows_digest(rows: List[Dict[str, Any]]) -> str:
    """SHA-256 of the canonical JSON rendering of the raw rows."""
    canonical = json.dumps(rows, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_rows(path: Optional[Union[str, Path]] = None, allow_custom: bool = False) -> CoefficientTable:
    """
    Load coefficient rows and check them against their recorded digest.

    Args:
        path: JSON file (defaults to the bundled table)
        allow_custom: Accept rows whose digest does not match

    Returns:
        CoefficientTable, flagged ``custom`` when the digest differs

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the digest does not match and custom rows are not allowed
    """
    path = Path(path) if path is not None else ROWS_PATH
    if not path.exists():
        raise FileNotFoundError(f"Coefficient rows not found: {path}")
    with open(path, "r") as f:
        data = json.load(f)
    raw_rows = data.get("rows", [])
    digest = rows_digest(raw_rows)
    recorded = data.get("sha256", "")
    custom = digest != recorded
    if custom and not allow_custom:
        raise ValueError(
            f"Coefficient rows in {path} do not match their digest "
            f"(recorded {recorded[:12]}…, computed {digest[:12]}…); pass --allow-custom-rows to use them"
        )
    return CoefficientTable(
        version=str(data.get("version", "1")),
        description=data.get("description"),
        sha256=digest,
        rows=raw_rows,
        custom=custom,
    )


def _pair(v: Any, kind=str) -> Tuple:
    if isinstance(v, str):
        parts = [p.strip() for p in v.split(",")]
    else:
        parts = list(v)
    if len(parts) != 2:
        raise ValueError(f"expected 'a,b', got {v!r}")
    return tuple(kind(p) for p in parts)


class RunConfig(BaseModel):
    """Options for one command; echoed verbatim into its report."""

    command: str = "critical"
    c_range: Optional[Tuple[str, str]] = None
    grid: Optional[Tuple[int, int]] = None
    n_c: Optional[int] = None
    mode: str = "direct"
    depth: Optional[int] = None
    rows: str = "all"
    rows_file: Optional[str] = None
    out: Optional[str] = None
    threads: int = Field(default_factory=default_threads)
    paper_scale: bool = False
    allow_custom_rows: bool = False
    tol: float = 1e-6
    search: Tuple[float, float] = (0.5, 0.7)
    float_compare: bool = False
    eps: float = 0.1
    c: Optional[float] = None
    t_floor: float = -0.95
    variant: Optional[str] = None
    rho: Optional[Tuple[float, float]] = None
    degrees: Optional[Tuple[int, int]] = None
    model_cache: Optional[str] = None

    @field_validator("command", mode="before")
    @classmethod
    def check_command(cls, v: str) -> str:
        if v not in VALID_COMMANDS:
            raise ValueError(f"Unknown command '{v}'. Valid: {', '.join(VALID_COMMANDS)}")
        return v

    @field_validator("c_range", mode="before")
    @classmethod
    def parse_c_range(cls, v: Any) -> Optional[Tuple[str, str]]:
        if v is None:
            return None
        lo, hi = _pair(v, _decimal)
        if Fraction(lo) > Fraction(hi):
            raise ValueError(f"c range must satisfy a <= b, got {lo},{hi}")
        if Fraction(lo) < 0:
            raise ValueError(f"c must be non-negative, got {lo}")
        return lo, hi

    @field_validator("search", mode="before")
    @classmethod
    def parse_search(cls, v: Any) -> Tuple[float, float]:
        a, b = _pair(v, float)
        if not a < b:
            raise ValueError(f"search interval must satisfy a < b, got {a},{b}")
        return a, b

    @field_validator("rho", mode="before")
    @classmethod
    def parse_rho(cls, v: Any) -> Optional[Tuple[float, float]]:
        if v is None:
            return None
        a, b = _pair(v, float)
        if not (a > 1.0 and b > 1.0):
            raise ValueError(f"ellipse parameters must exceed 1, got {a},{b}")
        return a, b

    @field_validator("variant", mode="before")
    @classmethod
    def check_variant(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in VALID_VARIANTS:
            raise ValueError(f"Unknown variant '{v}'. Valid: {', '.join(VALID_VARIANTS)}")
        return v

    @field_validator("grid", "degrees", mode="before")
    @classmethod
    def parse_grid(cls, v: Any) -> Optional[Tuple[int, int]]:
        if v is None:
            return None
        if isinstance(v, str):
            parts = v.lower().split("x")
            if len(parts) != 2:
                raise ValueError(f"grid must look like NxM, got '{v}'")
            v = parts
        n, m = (int(x) for x in v)
        if n < 1 or m < 1:
            raise ValueError(f"grid dimensions must be positive, got {n}x{m}")
        return n, m

    @field_validator("mode", mode="before")
    @classmethod
    def check_mode(cls, v: str) -> str:
        if v not in VALID_MODES:
            raise ValueError(f"Unknown mode '{v}'. Valid: {', '.join(VALID_MODES)}")
        return v

    @field_validator("threads", "n_c", mode="before")
    @classmethod
    def check_positive(cls, v: Any) -> Any:
        if v is not None and int(v) < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @field_validator("depth", mode="before")
    @classmethod
    def check_depth(cls, v: Any) -> Any:
        if v is not None and int(v) < 0:
            raise ValueError(f"depth must be non-negative, got {v}")
        return v

    @field_validator("tol")
    @classmethod
    def check_tol(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"tolerance must be positive, got {v}")
        return v

    @field_validator("t_floor")
    @classmethod
    def check_t_floor(cls, v: float) -> float:
        if not -1.0 < v < 0.0:
            raise ValueError(f"t_floor must lie in (-1, 0), got {v}")
        return v

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides: Any) -> "RunConfig":
        """Load a run configuration from YAML or JSON; ``overrides`` win over file values."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        with open(path, "r") as f:
            if path.suffix in [".yaml", ".yml"]:
                data = yaml.safe_load(f) or {}
            elif path.suffix == ".json":
                data = json.load(f)
            else:
                raise ValueError(f"Unsupported file type: {path.suffix}")

        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def echo(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")
