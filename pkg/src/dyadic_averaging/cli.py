"""CLI entry point for dyadic-averaging."""

import functools
import logging
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .config import CONFIG_FILE, EXPERIMENTS, ExperimentConfig, create_default_config, load_config
from .errors import DyadicAveragingError

console = Console()


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def _run_options(command):
    """--config, --seed, --out and --jobs, shared by the commands that run sweeps."""

    @click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON or TOML config")
    @click.option("--seed", type=int, help="Override the 64-bit run seed")
    @click.option("--out", "-o", type=click.Path(file_okay=False), help="Output directory")
    @click.option("--jobs", "-j", type=click.IntRange(min=1), help="Worker processes")
    @functools.wraps(command)
    def wrapper(*args, config_path=None, seed=None, out=None, jobs=None, **kwargs):
        try:
            config = load_config(config_path).with_overrides(seed=seed, results_dir=out, jobs=jobs)
        except DyadicAveragingError as e:
            console.print(f"[red]Error:[/red] {e}")
            raise SystemExit(1)
        return command(*args, config=config, **kwargs)

    return wrapper


@click.group()
@click.version_option(version=__version__, prog_name="dyadic-averaging")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
def main(verbose):
    """Measure dyadic averaging operators in Besov and Triebel-Lizorkin quasi-norms."""
    _configure_logging(verbose)


@main.group()
def filters():
    """Daubechies filter tables."""
    pass


@filters.command("verify")
@click.option("--order", "-L", "orders", type=click.IntRange(1, 10), multiple=True, help="Orders to check (default: all)")
def filters_verify(orders):
    """Check sum, orthogonality, mirror and moment identities of the filter tables.

    \b
    Examples:
      dyadic-averaging filters verify
      dyadic-averaging filters verify -L 4 -L 10
    """
    from .wavelets.filters import MAX_ORDER, daubechies_filter, verify_filter_identities

    table = Table(title="Filter identities", border_style="blue")
    for column in ("L", "sum", "orthogonality", "mirror", "moments", "result"):
        table.add_column(column, justify="right" if column != "result" else "center")

    all_passed = True
    for order in orders or range(1, MAX_ORDER + 1):
        report = verify_filter_identities(daubechies_filter(order))
        all_passed &= report.passed
        table.add_row(
            str(order),
            f"{report.sum_residual:.1e}",
            f"{report.orthogonality_residual:.1e}",
            f"{report.mirror_residual:.1e}",
            f"{report.moment_residual:.1e}",
            "[green]pass[/green]" if report.passed else "[red]FAIL[/red]",
        )
    console.print(table)
    if not all_passed:
        raise SystemExit(1)


@main.group()
def corpus():
    """Test-function corpus."""
    pass


@corpus.command("make")
@_run_options
def corpus_make(config: ExperimentConfig):
    """Build the corpus and save every function and its coefficients.

    \b
    Example:
      dyadic-averaging corpus make --seed 7 --out results/
    """
    from .analysis.coefficients import save_coefficients
    from .experiments.sweeps import SweepContext
    from .grid.io import save_grid_function

    out = Path(config.output.results_dir) / "corpus"
    with console.status("[bold]Sampling wavelet and building corpus..."):
        try:
            context = SweepContext.build(config)
        except DyadicAveragingError as e:
            console.print(f"[red]Error:[/red] {e}")
            raise SystemExit(1)

    for item in context.corpus:
        stem = item.label.replace("#", "_")
        save_grid_function(item.function, out / f"{stem}.csv")
        save_coefficients(item.coefficients, out / f"{stem}_coefficients.json")

    console.print(Panel(
        f"{len(context.corpus)} functions written to [bold]{out}[/bold]\n"
        f"  <family>_<n>.csv                 cell values\n"
        f"  <family>_<n>.json                grid header\n"
        f"  <family>_<n>_coefficients.json   wavelet coefficients",
        title="Corpus",
        border_style="green",
    ))


def _c_obs_table(report, title: str) -> Table:
    from .output.results import index_label

    table = Table(title=title, border_style="blue")
    table.add_column("Experiment")
    table.add_column("Index")
    table.add_column("C_obs", justify="right")
    for (experiment, index_key), value in sorted(report.c_obs().items()):
        table.add_row(experiment, index_label(index_key), f"{value:.4g}")
    return table


@main.command()
@click.argument("experiment", type=click.Choice(EXPERIMENTS))
@click.option("--family", help="Restrict tn to one a family or mult to one b family")
@click.option("--scale", type=click.Choice(["F", "B"]), help="Quasi-norm scale for mult")
@_run_options
def sweep(experiment, family, scale, config: ExperimentConfig):
    """Run one sweep and write <experiment>.csv.

    \b
    Examples:
      dyadic-averaging sweep en
      dyadic-averaging sweep tn --family random_signs --jobs 4
      dyadic-averaging sweep mult --family bv_bounded --scale F
    """
    from .experiments.checks import run_checks
    from .output.results import write_csv

    update = {}
    if family and experiment == "tn":
        update["tn_families"] = [family]
    elif family and experiment == "mult":
        update["mult_families"] = [family]
    elif family:
        console.print(f"[yellow]--family ignored for {experiment}[/yellow]")
    if scale and experiment == "mult":
        update["mult_scales"] = [scale]
    if update:
        try:
            config = ExperimentConfig.model_validate({**config.model_dump(mode="json"), **update})
        except ValueError as e:
            console.print(f"[red]Error:[/red] {e}")
            raise SystemExit(1)

    from .experiments.sweeps import run_sweep

    with console.status(f"[bold]Running sweep {experiment}..."):
        try:
            report = run_sweep(experiment, config)
        except DyadicAveragingError as e:
            console.print(f"[red]Error:[/red] {e}")
            raise SystemExit(1)

    path = write_csv(report, Path(config.output.results_dir) / f"{experiment}.csv")
    console.print(_c_obs_table(report, f"Sweep {experiment}"))

    results = run_checks({experiment: report}, config)
    for result in results:
        color = "green" if result.passed else "red"
        console.print(f"  {result.name}: [{color}]{'pass' if result.passed else 'FAIL'}[/{color}] {result.detail}")
    console.print(f"Rows written to [bold]{path}[/bold]")
    if not all(result.passed for result in results):
        raise SystemExit(1)


@main.command()
@click.argument("csv_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--n-min", type=int, default=4, show_default=True, help="Smallest N in the fit")
def fit(csv_path, n_min):
    """Fit log2(ratio) against N for every profile in a sweep CSV.

    \b
    Example:
      dyadic-averaging fit results/en.csv --n-min 3
    """
    from .experiments.checks import profile_slopes, slope_label
    from .output.results import read_csv

    report = read_csv(Path(csv_path))
    slopes = profile_slopes(report.rows, n_min)
    if not slopes:
        console.print("[yellow]No profile has enough positive ratios to fit.[/yellow]")
        raise SystemExit(1)

    table = Table(title=f"Growth exponents ({Path(csv_path).name})", border_style="blue")
    table.add_column("Profile")
    table.add_column("Slope", justify="right")
    for key, slope in sorted(slopes.items(), key=lambda item: slope_label(item[0])):
        table.add_row(slope_label(key), f"{slope:+.4f}")
    console.print(table)


@main.command()
@click.argument("directory", type=click.Path(exists=True, file_okay=False))
@click.option("--n-min", type=int, default=4, show_default=True, help="Smallest N in the fits")
def report(directory, n_min):
    """Rebuild report.md from the CSVs (and summary.json, if any) in a results directory.

    \b
    Example:
      dyadic-averaging report results/
    """
    from .experiments.checks import boundary_slopes, profile_slopes, slope_label
    from .output.markdown import assemble_report
    from .output.results import RatioReport, read_csv
    from .output.summary import RunSummary, read_summary, sweep_summary

    directory = Path(directory)
    reports: dict[str, RatioReport] = {}
    for path in sorted(directory.glob("*.csv")):
        try:
            reports[path.stem] = read_csv(path)
        except ValueError as e:
            console.print(f"  Skipping {path.name}: [yellow]{e}[/yellow]")
    if not reports:
        console.print(f"[red]Error:[/red] no sweep CSVs in {directory}")
        raise SystemExit(1)

    summary_path = directory / "summary.json"
    if summary_path.exists():
        previous = read_summary(summary_path)
        summary = previous.model_copy(update={"sweeps": []})
    else:
        summary = RunSummary(version=__version__, seed=0, experiments=sorted(reports), passed=True)

    for name, sweep_report in reports.items():
        slopes = profile_slopes(sweep_report.rows, n_min)
        summary.sweeps.append(sweep_summary(sweep_report, {slope_label(k): v for k, v in slopes.items()}))
        console.print(_c_obs_table(sweep_report, name))

    boundary = boundary_slopes(reports["boundary"], n_min) if "boundary" in reports else None
    (directory / "report.md").write_text(assemble_report(summary, boundary))
    console.print(f"Report written to [bold]{directory / 'report.md'}[/bold]")


@main.command()
@click.option("--experiment", "-e", "experiments", type=click.Choice(EXPERIMENTS), multiple=True, help="Sweeps to run (default: config)")
@_run_options
def run(experiments, config: ExperimentConfig):
    """Run all configured sweeps, the checks and the report.

    \b
    Examples:
      dyadic-averaging run
      dyadic-averaging run --config study.json --jobs 8 --out results/
      dyadic-averaging run -e en -e enpn
    """
    output_dir = Path(config.output.results_dir)
    console.print(Panel(
        f"[bold]Daubechies order {config.order}[/bold], J={config.J}, j_max={config.j_max}\n"
        f"N in {config.n_values[0]}..{config.n_values[-1]}, seed {config.seed}, jobs {config.jobs}",
        title="dyadic-averaging",
        border_style="blue",
    ))

    from .pipeline import run_pipeline

    success = run_pipeline(config, output_dir, experiments=list(experiments) or None)

    if success:
        console.print(Panel(
            f"Results written to [bold]{output_dir}[/bold]\n"
            f"  <experiment>.csv   ratio rows\n"
            f"  summary.json       C_obs, slopes and checks\n"
            f"  report.md          human-readable report",
            title="Complete",
            border_style="green",
        ))
    else:
        console.print(Panel("Some checks failed. See report.md and the output above.", title="Failed", border_style="red"))
        raise SystemExit(1)


@main.command()
@click.option("--path", type=click.Path(dir_okay=False), default=str(CONFIG_FILE), show_default=True)
def init(path):
    """Write the default configuration as JSON."""
    path = Path(path)
    if path.exists():
        if not click.confirm(f"Config already exists at {path}. Overwrite?"):
            console.print("Keeping existing config.")
            return

    config_path = create_default_config(path)
    console.print(Panel(
        f"Config created at [bold]{config_path}[/bold]\n\n"
        f"Edit this file to set:\n"
        f"  1. Wavelet order and grid resolution\n"
        f"  2. Smoothness indices and N range\n"
        f"  3. Corpus families and seed\n\n"
        f"Then run: [bold]dyadic-averaging status --config {config_path}[/bold] to verify",
        title="Configuration Created",
        border_style="green",
    ))


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON or TOML config")
def status(config_path: Optional[str]):
    """Show configuration and wavelet admissibility per index."""
    from .norms.regions import boundary_distance, region_theorem, region_unconditional, wavelet_admissible
    from .output.results import index_label
    from .wavelets.filters import smoothness_estimate

    try:
        config = load_config(config_path)
    except DyadicAveragingError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise SystemExit(1)

    source = config_path or (str(CONFIG_FILE) if CONFIG_FILE.exists() else None)
    config_status = f"[green]{source}[/green]" if source else "[yellow]Not found[/yellow] (using defaults)"

    table = Table(title="dyadic-averaging status", show_header=False, border_style="blue")
    table.add_column("Setting", style="bold")
    table.add_column("Value")
    table.add_row("Version", __version__)
    table.add_row("Config", config_status)
    table.add_row("", "")
    table.add_row("Wavelet", f"Daubechies order {config.order} (K_est {smoothness_estimate(config.order)})")
    table.add_row("Grid", f"J={config.J} on [{config.x0}, {config.x1})")
    table.add_row("Levels", f"j_max={config.j_max}, margin {config.margin}")
    table.add_row("N values", ", ".join(map(str, config.n_values)))
    table.add_row("Corpus", ", ".join(f"{f.name} x{f.count}" for f in config.families))
    table.add_row("Experiments", ", ".join(config.experiments))
    table.add_row("Seed", str(config.seed))
    table.add_row("Results dir", config.output.results_dir)
    console.print(table)

    indices = Table(title="Smoothness indices", border_style="blue")
    for column in ("Index", "Role", "Theorem", "Unconditional", "Distance", "Admissible"):
        indices.add_column(column)
    roles = [("sweep", config.indices), ("probe", config.probe_indices), ("multiplier", config.mult_indices)]
    for role, entries in roles:
        for entry in entries:
            idx = entry.to_index()
            admissible = wavelet_admissible(config.order, smoothness_estimate(config.order), idx)
            indices.add_row(
                index_label(idx.as_tuple()),
                role,
                "yes" if region_theorem(idx) else "no",
                "yes" if region_unconditional(idx) else "no",
                f"{boundary_distance(idx):+.3f}",
                "[green]yes[/green]" if admissible else "[yellow]no[/yellow]",
            )
    console.print(indices)
