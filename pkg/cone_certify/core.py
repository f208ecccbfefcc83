"""Run orchestration: one method per command."""

import logging
import time
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from .certificate import Verdict
from .chebyshev import (
    DEFAULT_DEGREES,
    DEFAULT_RHO,
    PUBLISHED_DOMAIN,
    PUBLISHED_RHO,
    fit_series_models,
    modulus_bound_table,
)
from .config import CoefficientTable, RunConfig, SupersolutionRow, load_rows
from .critical import PUBLISHED_C0, find_c0, find_c0_float, probe_uniqueness
from .errors import CertifyError
from .interval import Interval
from .legendre import float_eval, float_eval_g, truncation_index
from .report import ClaimRecord, Report, interval_dict, new_report, report_schema
from . import subsolution as sub_cert
from . import supersolution as super_cert

logger = logging.getLogger(__name__)

BOUNDARY_IDENTITY_C = ("0", "0.1", "0.2", "0.3", "0.4", "0.5")
BOUNDARY_IDENTITY_WIDTH = 1e-6
C0_AGREEMENT = 5e-4
PROFILE_GRID = (40, 80)


def profile_rows(
    c: float,
    epsilon: float,
    row: Optional[SupersolutionRow] = None,
    n_r: int = PROFILE_GRID[0],
    n_t: int = PROFILE_GRID[1],
    t_floor: float = super_cert.T_FLOOR,
) -> List[Dict[str, Optional[float]]]:
    """
    Float samples of v, w, G and |grad v|^2 on (0, 1] x [t_floor, 1].

    v = r kappa f + epsilon r^(-1/2) g; w uses the given row and is None without one.
    """
    one_plus_c_sq = 1.0 + c * c
    beta = 2.0 / one_plus_c_sq
    sigma = 2.25 / one_plus_c_sq
    kappa, _ = super_cert.float_kappa(beta)
    k = truncation_index(t_floor)

    r = np.linspace(1.0 / n_r, 1.0, n_r)
    t = np.linspace(t_floor, 1.0, n_t)
    f = kappa * float_eval(t, beta, 0, k)
    df = kappa * float_eval(t, beta, 1, k)
    g = float_eval_g(t, beta, 0, k)
    dg = float_eval_g(t, beta, 1, k)
    one_minus = 1.0 - t * t
    G = sigma * f * f + one_minus * (df - f * dg / g) ** 2

    rr, ti = np.meshgrid(r, np.arange(n_t), indexing="ij")
    rr, ti = rr.ravel(), ti.ravel()
    r_m32 = rr**-1.5
    v = rr * f[ti] + epsilon * g[ti] / np.sqrt(rr)
    v_r = f[ti] - 0.5 * epsilon * r_m32 * g[ti]
    v_t_over_r = df[ti] + epsilon * r_m32 * dg[ti]
    grad_sq = v_r**2 / one_plus_c_sq + one_minus[ti] * v_t_over_r**2
    w = super_cert.float_w(rr, t[ti], c, row.a) if row is not None else None

    rows: List[Dict[str, Optional[float]]] = []
    for i in range(rr.size):
        rows.append(
            {
                "r": float(rr[i]),
                "t": float(t[ti[i]]),
                "v_midpoint": float(v[i]),
                "w_midpoint": float(w[i]) if w is not None else None,
                "G_midpoint": float(G[ti[i]]),
                "grad_sq_midpoint": float(grad_sq[i]),
            }
        )
    return rows


class Verifier:
    """Runs the command named in a RunConfig and assembles its report."""

    def __init__(self, config: RunConfig):
        """
        Initialize the verifier.

        Args:
            config: Validated run configuration
        """
        self.config = config
        self._table: Optional[CoefficientTable] = None

    @property
    def table(self) -> CoefficientTable:
        """Coefficient rows, loaded and digest-checked on first use."""
        if self._table is None:
            self._table = load_rows(self.config.rows_file, self.config.allow_custom_rows)
        return self._table

    def run(self) -> Report:
        """
        Execute the configured command.

        Returns:
            Report with claims, enclosures and timing

        Raises:
            ValueError: If the command does not produce a report
        """
        handlers: Dict[str, Callable[[Report], None]] = {
            "critical": self.critical,
            "subsolution": self.subsolution,
            "supersolution": self.supersolution,
            "qs": self.qs,
            "bounds": self.bounds,
        }
        command = self.config.command
        if command not in handlers:
            raise ValueError(f"Command '{command}' does not produce a report")
        start = time.perf_counter()
        report = new_report(command, self.config.echo())
        handlers[command](report)
        report.wall_time_s = round(time.perf_counter() - start, 3)
        logger.info("%s finished in %.1f s: %s", command, report.wall_time_s, report.verdict.value)
        return report

    def _depth(self, default: int) -> int:
        return self.config.depth if self.config.depth is not None else default

    def _note_rows(self, report: Report) -> None:
        table = self.table
        report.enclosures["coefficient_rows"] = {"sha256": table.sha256, "custom": table.custom}
        if table.custom:
            report.notes.append(f"custom coefficient rows in use (sha256 {table.sha256})")

    def critical(self, report: Report) -> None:
        """Enclose c0, probe its uniqueness and check G(t_c) = 1 at sample c."""
        cfg = self.config
        detail: Dict[str, Any] = {"search": list(cfg.search), "tol": cfg.tol}
        try:
            c0 = find_c0(cfg.search, cfg.tol)
            report.enclosures["c0"] = interval_dict(c0)
            lo, hi = c0.to_pair()
            if abs(float(c0.mid) - PUBLISHED_C0) > C0_AGREEMENT:
                report.notes.append(
                    f"c0 enclosure [{lo!r}, {hi!r}] is not within {C0_AGREEMENT} of {PUBLISHED_C0}"
                )
            probe = probe_uniqueness(c0, cfg.search)
            report.enclosures["uniqueness_probe"] = asdict(probe)
            if not (probe.sign_coherent and probe.monotone):
                report.notes.append("criterion samples are not sign coherent and monotone around c0")
            claim = ClaimRecord(
                claim_id="critical/c0",
                verdict=Verdict.PASS,
                summary=f"c0 in [{lo!r}, {hi!r}]",
                detail=detail,
            )
        except CertifyError as e:
            claim = ClaimRecord(
                claim_id="critical/c0", verdict=Verdict.INCONCLUSIVE, detail=detail, error=str(e)
            )
        report.add_claim(claim)

        if cfg.float_compare:
            try:
                report.enclosures["c0_float"] = find_c0_float(cfg.search)
            except CertifyError as e:
                report.notes.append(f"float comparison unavailable: {e}")

        values: Dict[str, Any] = {}
        failed: List[str] = []
        try:
            for c in BOUNDARY_IDENTITY_C:
                G = sub_cert.boundary_identity(Interval.from_text(c))
                values[c] = interval_dict(G)
                if not (bool(G.contains(1.0)) and float(G.width) <= BOUNDARY_IDENTITY_WIDTH):
                    failed.append(c)
            verdict = Verdict.FAIL if failed else Verdict.PASS
            if failed:
                summary = f"G(t_c) check failed at c = {', '.join(failed)}"
            else:
                summary = "G(t_c) encloses 1 at every sample c"
            claim = ClaimRecord(
                claim_id="critical/boundary_identity", verdict=verdict, summary=summary
            )
        except CertifyError as e:
            claim = ClaimRecord(
                claim_id="critical/boundary_identity", verdict=Verdict.INCONCLUSIVE, error=str(e)
            )
        report.enclosures["boundary_identity"] = values
        report.add_claim(claim)

    def subsolution(self, report: Report) -> None:
        """g^3 G' > 0 on [t_c, 1] across the c-range."""
        cfg = self.config
        grid = cfg.grid or (sub_cert.PAPER_SCALE_GRID if cfg.paper_scale else sub_cert.DEFAULT_GRID)
        models = None
        if cfg.mode == "interp":
            models = fit_series_models(
                degrees=cfg.degrees or DEFAULT_DEGREES,
                rho=cfg.rho or DEFAULT_RHO,
                cache_dir=Path(cfg.model_cache) if cfg.model_cache else None,
            )
        certificate = sub_cert.verify_subsolution(
            c_range=cfg.c_range or sub_cert.C_RANGE,
            n_c=cfg.n_c or sub_cert.DEFAULT_N_C,
            n_t=grid[0],
            n_beta=grid[1],
            depth=self._depth(sub_cert.DEFAULT_DEPTH),
            mode=cfg.mode,
            threads=cfg.threads,
            models=models,
        )
        report.add_claim(ClaimRecord.from_certificate(certificate))

    def supersolution(self, report: Report) -> None:
        """Conditions 1 and 3 for the selected coefficient rows."""
        cfg = self.config
        self._note_rows(report)
        rows = self.table.select(cfg.rows)
        grid = cfg.grid or (super_cert.PAPER_SCALE_GRID if cfg.paper_scale else super_cert.DEFAULT_GRID)
        certificates = super_cert.verify_supersolution(
            rows,
            n_t=grid[0],
            n_beta=grid[1],
            depth=self._depth(super_cert.DEFAULT_DEPTH),
            t_floor=cfg.t_floor,
            threads=cfg.threads,
        )
        for certificate in certificates:
            report.add_claim(ClaimRecord.from_certificate(certificate))
        report.notes.append(super_cert.CONDITION2_NOTE)

    def qs(self, report: Report) -> None:
        """
        Comparison families below p_c.

        Without a c-range both families run; the piecewise family is checked with
        and without r^alpha_n factors and the variant without them is informational.
        """
        cfg = self.config
        self._note_rows(report)
        ranges = [cfg.c_range] if cfg.c_range else [super_cert.QS_LINEAR_RANGE, super_cert.QS_PIECEWISE_RANGE]
        for c_range in ranges:
            family = super_cert.qs_family(c_range)
            if family == "linear":
                variants = ["harmonic"]
            else:
                variants = [cfg.variant] if cfg.variant else list(super_cert.QS_VARIANTS)
            for variant in variants:
                certificate = super_cert.verify_qs(
                    c_range,
                    self.table,
                    variant=variant,
                    grid=cfg.grid or super_cert.QS_GRID,
                    depth=self._depth(super_cert.DEFAULT_DEPTH),
                    t_floor=cfg.t_floor,
                    threads=cfg.threads,
                )
                informational = variant == "as_written" and cfg.variant is None
                report.add_claim(ClaimRecord.from_certificate(certificate, informational=informational))

    def bounds(self, report: Report) -> None:
        """Ellipse modulus bounds beside the published table."""
        rho = self.config.rho or PUBLISHED_RHO
        try:
            table = modulus_bound_table(PUBLISHED_DOMAIN, rho)
        except CertifyError as e:
            report.add_claim(
                ClaimRecord(claim_id="bounds/finite", verdict=Verdict.INCONCLUSIVE, error=str(e))
            )
            return
        report.enclosures["modulus_bounds"] = {
            "domain": [list(pair) for pair in table.domain],
            "rho": list(table.rho),
            "k": table.k,
            "rows": table.rows,
            "combined_bound": table.combined_bound,
        }
        values = [row["f"] for row in table.rows] + [row["g"] for row in table.rows] + [table.combined_bound]
        finite = bool(np.all(np.isfinite(values)))
        report.add_claim(
            ClaimRecord(
                claim_id="bounds/finite",
                verdict=Verdict.PASS if finite else Verdict.FAIL,
                summary="all modulus bounds finite" if finite else "a modulus bound is not finite",
            )
        )

    def profile(self) -> List[Dict[str, Optional[float]]]:
        """
        Float samples for plotting.

        Raises:
            ValueError: If no c is configured
        """
        cfg = self.config
        if cfg.c is None:
            raise ValueError("profile needs a single c value (--c)")
        row = None
        if cfg.rows != "all":
            candidates = [r for r in self.table.select(cfg.rows) if r.covers(cfg.c)]
            row = candidates[0] if candidates else None
        else:
            row = self.table.row_for(cfg.c)
        n_r, n_t = cfg.grid or PROFILE_GRID
        return profile_rows(cfg.c, cfg.eps, row, n_r, n_t, cfg.t_floor)

    @staticmethod
    def report_schema() -> Dict[str, Any]:
        return report_schema()
