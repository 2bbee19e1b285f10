"""Main pipeline orchestrator for dyadic-averaging.

Coordinates: filter checks -> wavelet + corpus -> sweeps -> checks -> output
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

from rich.console import Console

from . import __version__
from .config import ExperimentConfig
from .output.results import RatioReport, write_csv
from .output.summary import CheckSummary, RunSummary, sweep_summary, write_summary

logger = logging.getLogger(__name__)
console = Console()


def run_pipeline(
    config: ExperimentConfig,
    output_dir: Path,
    experiments: Optional[Sequence[str]] = None,
) -> bool:
    """Run the selected sweeps and write CSVs, summary.json and report.md.

    Steps:
        1. Verify the filter identities of the configured order
        2. Sample the wavelet and build the corpus
        3. Run each sweep and write <experiment>.csv
        4. Run the invariant checks
        5. Write summary.json and report.md

    Returns True when every step ran and every check passed.
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    experiments = list(experiments or config.experiments)

    summary = RunSummary(version=__version__, seed=config.seed, experiments=experiments)
    reports: dict[str, RatioReport] = {}

    # === Step 1: Filter identities ===
    try:
        from .wavelets.filters import daubechies_filter, verify_filter_identities
        identity = verify_filter_identities(daubechies_filter(config.order))
        if not identity.passed:
            console.print(f"  Filters: [red]order {config.order} fails its identities[/red]")
            return False
        console.print(f"  Filters: [green]order {config.order} verified[/green]")
    except Exception as e:
        console.print(f"  [red]Filter error:[/red] {e}")
        return False

    # === Step 2: Wavelet and corpus ===
    context = None
    if config.jobs == 1:
        with console.status("[bold]Sampling wavelet and building corpus..."):
            try:
                from .experiments.sweeps import SweepContext
                context = SweepContext.build(config)
                console.print(f"  Corpus: [green]{len(context.corpus)} functions[/green]")
            except Exception as e:
                console.print(f"  [red]Corpus error:[/red] {e}")
                return False

    # === Step 3: Sweeps ===
    from .experiments.sweeps import run_sweep
    for experiment in experiments:
        with console.status(f"[bold]Running sweep {experiment}..."):
            try:
                report = run_sweep(experiment, config, context=context)
            except Exception as e:
                console.print(f"  Sweep {experiment}: [red]failed ({e})[/red]")
                summary.failures.append(f"sweep {experiment}: {e}")
                continue
        reports[experiment] = report
        write_csv(report, output_dir / f"{experiment}.csv")
        skipped = f", {report.skipped} skipped" if report.skipped else ""
        console.print(f"  Sweep {experiment}: [green]{len(report.rows)} rows[/green]{skipped}")

    # === Step 4: Checks ===
    boundary = None
    try:
        from .experiments.checks import boundary_slopes, profile_slopes, run_checks, slope_label
        for experiment, report in reports.items():
            slopes = profile_slopes(report.rows, config.thresholds.fit_n_min)
            summary.sweeps.append(
                sweep_summary(report, {slope_label(key): value for key, value in slopes.items()})
            )
        for result in run_checks(reports, config):
            summary.checks.append(CheckSummary(name=result.name, passed=result.passed, detail=result.detail))
            color = "green" if result.passed else "yellow"
            console.print(f"  Check {result.name}: [{color}]{'pass' if result.passed else 'FAIL'}[/{color}]")
        if "boundary" in reports:
            boundary = boundary_slopes(reports["boundary"], config.thresholds.fit_n_min)
    except Exception as e:
        console.print(f"  [red]Check error:[/red] {e}")
        summary.failures.append(f"checks: {e}")

    summary.passed = not summary.failures and all(check.passed for check in summary.checks)

    # === Step 5: Output ===
    from .output.markdown import assemble_report
    write_summary(summary, output_dir / "summary.json")
    (output_dir / "report.md").write_text(assemble_report(summary, boundary))
    logger.info(f"Results written to {output_dir}")

    return summary.passed
