"""Command-line interface for the certification runs."""

import json
import logging
from pathlib import Path
from typing import Any, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .certificate import Verdict
from .config import RunConfig
from .core import Verifier
from .errors import CertifyError
from .formatters import claims_table_rows, format_profile, get_formatter, write_report
from .report import Report

app = typer.Typer(
    name="cone-certify",
    help="Validated numerics for homogeneous free boundary solutions on three-dimensional cones",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

VERDICT_STYLES = {
    Verdict.PASS: "[green]✓ pass[/green]",
    Verdict.FAIL: "[red]✗ fail[/red]",
    Verdict.INCONCLUSIVE: "[yellow]! inconclusive[/yellow]",
}


def configure_logging(verbose: bool) -> None:
    """Route the package logger through rich; DEBUG with --verbose, WARNING otherwise."""
    logger = logging.getLogger("cone_certify")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=err_console, show_path=False, markup=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


def build_config(command: str, config_file: Optional[str], **options: Any) -> RunConfig:
    """Merge a config file (if any) with command-line options; options win."""
    options = {k: v for k, v in options.items() if v is not None}
    if config_file:
        return RunConfig.from_file(config_file, command=command, **options)
    return RunConfig(command=command, **options)


def _fail(e: Exception) -> None:
    console.print(f"[red]✗ Error:[/red] {str(e)}", style="bold red")
    raise typer.Exit(code=2)


def _show(report: Report, out: Optional[str], format: str) -> None:
    table = Table(title=f"{report.command}: {report.verdict.value}")
    table.add_column("Claim", style="cyan")
    table.add_column("Verdict")
    table.add_column("Summary")
    for claim_id, verdict, summary in claims_table_rows(report):
        table.add_row(claim_id, verdict, summary)
    console.print(table)
    for note in report.notes:
        console.print(f"[yellow]![/yellow] {note}")

    if out:
        path = write_report(report, out, format)
        console.print(f"[green]✓[/green] Report written to {path} ({format} format)")
    console.print(f"{VERDICT_STYLES[report.verdict]} in {report.wall_time_s:.1f} s")


def _run(config: RunConfig, format: str) -> None:
    # validates the format before spending time on the run
    get_formatter(format)
    report = Verifier(config).run()
    _show(report, config.out, format)
    raise typer.Exit(code=report.exit_code)


CONFIG_OPTION = typer.Option(None, "--config", help="YAML or JSON run configuration")
OUT_OPTION = typer.Option(None, "--out", "-o", help="Write the report to this file")
FORMAT_OPTION = typer.Option("json", "--format", "-f", help="Report format: json, yaml, csv")
THREADS_OPTION = typer.Option(None, "--threads", "-j", help="Worker processes (default: CONE_CERTIFY_THREADS or 1)")
DEPTH_OPTION = typer.Option(None, "--depth", help="Adaptive bisection depth")
GRID_OPTION = typer.Option(None, "--grid", help="Cells per subinterval as NxM")
VERBOSE_OPTION = typer.Option(False, "--verbose", "-v", help="Verbose output")


@app.command()
def critical(
    tol: Optional[float] = typer.Option(None, "--tol", help="Target enclosure width for c0"),
    search: Optional[str] = typer.Option(None, "--search", help="Search interval a,b"),
    float_compare: bool = typer.Option(False, "--float", help="Also run the float interpolation estimate"),
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = OUT_OPTION,
    format: str = FORMAT_OPTION,
    verbose: bool = VERBOSE_OPTION,
):
    """
    Enclose the critical cone parameter c0 and check G(t_c) = 1.

    Examples:
        \b
        cone-certify critical --tol 1e-6
        cone-certify critical --search 0.5,0.7 --out c0.json
    """
    configure_logging(verbose)
    try:
        run_config = build_config(
            "critical", config, tol=tol, search=search, float_compare=float_compare or None, out=out
        )
        _run(run_config, format)
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command()
def subsolution(
    c: Optional[str] = typer.Option(None, "--c", help="c-range a,b (default 0,0.58828)"),
    n_c: Optional[int] = typer.Option(None, "--n-c", help="Number of c-subintervals"),
    grid: Optional[str] = GRID_OPTION,
    mode: Optional[str] = typer.Option(None, "--mode", help="direct (series) or interp (Chebyshev models)"),
    depth: Optional[int] = DEPTH_OPTION,
    paper_scale: bool = typer.Option(False, "--paper-scale", help="Use 10000x1000 grids"),
    model_cache: Optional[str] = typer.Option(None, "--model-cache", help="Directory for fitted models"),
    threads: Optional[int] = THREADS_OPTION,
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = OUT_OPTION,
    format: str = FORMAT_OPTION,
    verbose: bool = VERBOSE_OPTION,
):
    """
    Certify g^3 G' > 0 between t_c and 1 for every c in the range.

    Examples:
        \b
        cone-certify subsolution --c 0,0.58828 --threads 4
        cone-certify subsolution --mode interp --model-cache .models
    """
    configure_logging(verbose)
    try:
        run_config = build_config(
            "subsolution",
            config,
            c_range=c,
            n_c=n_c,
            grid=grid,
            mode=mode,
            depth=depth,
            paper_scale=paper_scale or None,
            model_cache=model_cache,
            threads=threads,
            out=out,
        )
        _run(run_config, format)
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command()
def supersolution(
    row: Optional[str] = typer.Option(None, "--row", help="Row ids (comma separated) or all"),
    grid: Optional[str] = GRID_OPTION,
    depth: Optional[int] = DEPTH_OPTION,
    t_floor: Optional[float] = typer.Option(None, "--t-floor", help="Lowest t evaluated by series"),
    paper_scale: bool = typer.Option(False, "--paper-scale", help="Use 10000x1000 grids for condition 1"),
    rows_file: Optional[str] = typer.Option(None, "--rows-file", help="Coefficient rows JSON"),
    allow_custom_rows: bool = typer.Option(False, "--allow-custom-rows", help="Accept rows with a different digest"),
    threads: Optional[int] = THREADS_OPTION,
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = OUT_OPTION,
    format: str = FORMAT_OPTION,
    verbose: bool = VERBOSE_OPTION,
):
    """
    Certify conditions 1 and 3 for the coefficient rows.

    Examples:
        \b
        cone-certify supersolution --row all --threads 4
        cone-certify supersolution --row 2 --grid 500x50
    """
    configure_logging(verbose)
    try:
        run_config = build_config(
            "supersolution",
            config,
            rows=row,
            grid=grid,
            depth=depth,
            t_floor=t_floor,
            paper_scale=paper_scale or None,
            rows_file=rows_file,
            allow_custom_rows=allow_custom_rows or None,
            threads=threads,
            out=out,
        )
        _run(run_config, format)
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command()
def qs(
    c: Optional[str] = typer.Option(None, "--c", help="0,0.3 or 0.3,0.4 (default: both)"),
    variant: Optional[str] = typer.Option(None, "--variant", help="harmonic or as_written (default: both)"),
    grid: Optional[str] = GRID_OPTION,
    depth: Optional[int] = DEPTH_OPTION,
    rows_file: Optional[str] = typer.Option(None, "--rows-file", help="Coefficient rows JSON"),
    allow_custom_rows: bool = typer.Option(False, "--allow-custom-rows", help="Accept rows with a different digest"),
    threads: Optional[int] = THREADS_OPTION,
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = OUT_OPTION,
    format: str = FORMAT_OPTION,
    verbose: bool = VERBOSE_OPTION,
):
    """
    Check the q_s comparison families: gradient, support or order, and boundary.
    """
    configure_logging(verbose)
    try:
        run_config = build_config(
            "qs",
            config,
            c_range=c,
            variant=variant,
            grid=grid,
            depth=depth,
            rows_file=rows_file,
            allow_custom_rows=allow_custom_rows or None,
            threads=threads,
            out=out,
        )
        _run(run_config, format)
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command()
def bounds(
    rho: Optional[str] = typer.Option(None, "--rho", help="Ellipse parameters rho_t,rho_beta"),
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = OUT_OPTION,
    format: str = FORMAT_OPTION,
    verbose: bool = VERBOSE_OPTION,
):
    """
    Print Bernstein-ellipse modulus bounds beside the published ones.
    """
    configure_logging(verbose)
    try:
        run_config = build_config("bounds", config, rho=rho, out=out)
        report = Verifier(run_config).run()
        data = report.enclosures.get("modulus_bounds")
        if data:
            table = Table(title=f"Modulus bounds (k = {data['k']})")
            table.add_column("Derivative", style="cyan")
            table.add_column("f", justify="right")
            table.add_column("g", justify="right")
            table.add_column("Published", justify="right")
            for row in data["rows"]:
                table.add_row(str(row["derivative"]), f"{row['f']:.6g}", f"{row['g']:.6g}", f"{row['published']:.6g}")
            console.print(table)
            console.print(f"Combined |g^3 G'| bound: {data['combined_bound']:.6g}")
        _show(report, run_config.out, format)
        raise typer.Exit(code=report.exit_code)
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command()
def profile(
    c: float = typer.Option(..., "--c", help="Cone parameter"),
    eps: Optional[float] = typer.Option(None, "--eps", help="Weight of the r^(-1/2) g term"),
    row: Optional[str] = typer.Option(None, "--row", help="Row id supplying w (default: the row covering c)"),
    grid: Optional[str] = typer.Option(None, "--grid", help="Samples as N_rxN_t"),
    config: Optional[str] = CONFIG_OPTION,
    out: Optional[str] = typer.Option(None, "--out", "-o", help="CSV file (default: stdout)"),
    verbose: bool = VERBOSE_OPTION,
):
    """
    Emit float samples of v, w, G and |grad v|^2 as CSV for plotting.

    Examples:
        \b
        cone-certify profile --c 0.3 --eps 0.1 --out profile.csv
    """
    configure_logging(verbose)
    try:
        run_config = build_config("profile", config, c=c, eps=eps, rows=row, grid=grid, out=out)
        text = format_profile(Verifier(run_config).profile())
        if run_config.out:
            path = Path(run_config.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w") as f:
                f.write(text)
            console.print(f"[green]✓[/green] Profile written to {path}")
        else:
            print(text, end="")
    except (CertifyError, ValueError, FileNotFoundError) as e:
        _fail(e)


@app.command(name="report-schema")
def report_schema_command(
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write the schema to this file"),
):
    """
    Print the JSON schema of report files.
    """
    text = json.dumps(Verifier.report_schema(), indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
        console.print(f"[green]✓[/green] Schema written to {out}")
    else:
        print(text)


def main():
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
