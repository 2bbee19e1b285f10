"""Print the wavelet error budgets, then run the sweeps and show observed slopes next to the thresholds.

Usage:
    python scripts/calibrate_thresholds.py [--config FILE] [--out DIR] [--jobs N]

The thresholds in ThresholdConfig were frozen from one run of this script.
Rerun it after changing the corpus, the grid or the wavelet order and copy
the suggested values into the config if the observed margins have moved.
"""

import logging
import math
from pathlib import Path

import click
from rich.console import Console
from rich.table import Table

from dyadic_averaging.analysis.transform import QUADRATURE_SAFETY, quadrature_error, quadrature_tolerance
from dyadic_averaging.config import load_config
from dyadic_averaging.experiments.checks import profile_slopes, run_checks, slope_label
from dyadic_averaging.experiments.sweeps import SweepContext, run_sweep
from dyadic_averaging.output.results import write_csv
from dyadic_averaging.wavelets.cascade import cascade_sample, relative_moment, vanishing_tolerance
from dyadic_averaging.wavelets.filters import MAX_ORDER, daubechies_filter

console = Console()


def print_wavelet_budgets(depth: int, gaps: range):
    """Measured quadrature errors and sub-order moment residuals for every order."""
    table = Table(title=f"Wavelet error budgets (safety {QUADRATURE_SAFETY:g})", border_style="blue")
    table.add_column("L", justify="right")
    for gap in gaps:
        table.add_column(f"quad gap {gap}", justify="right")
    table.add_column(f"moments m={depth}", justify="right")
    table.add_column("tau(m)", justify="right")
    for order in range(2, MAX_ORDER + 1):
        sw = cascade_sample(daubechies_filter(order), depth)
        worst = max(relative_moment(sw, k) for k in range(order))
        cells = [f"{quadrature_error(order, gap):.2e} / {quadrature_tolerance(order, gap):.2e}" for gap in gaps]
        table.add_row(str(order), *cells, f"{worst:.2e}", f"{vanishing_tolerance(sw):.2e}")
    console.print(table)


@click.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(file_okay=False), default="calibration", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def main(config_path, out, jobs):
    logging.basicConfig(level=logging.WARNING)
    config = load_config(config_path).with_overrides(jobs=jobs, results_dir=out)
    out = Path(out)
    context = SweepContext.build(config) if jobs == 1 else None
    with console.status("Measuring wavelet budgets..."):
        print_wavelet_budgets(min(config.J, 12), range(config.margin, config.J, 2))
    thresholds = config.thresholds
    probe_keys = {index.to_index().as_tuple() for index in config.probe_indices}

    reports = {}
    for experiment in config.experiments:
        with console.status(f"Running {experiment}..."):
            reports[experiment] = run_sweep(experiment, config, context=context)
        write_csv(reports[experiment], out / f"{experiment}.csv")

    flat, growth = [], []
    table = Table(title="Observed slopes", border_style="blue")
    table.add_column("Profile")
    table.add_column("Slope", justify="right")
    table.add_column("Region")
    for experiment, report in reports.items():
        for key, slope in sorted(profile_slopes(report.rows, thresholds.fit_n_min).items(), key=lambda kv: slope_label(kv[0])):
            rows = [row for row in report.rows if row.index_key == key[1]]
            inside = rows[0].in_theorem if rows else False
            if key[1] in probe_keys:
                growth.append(slope)
                region = "probe"
            elif inside:
                flat.append(abs(slope))
                region = "theorem"
            else:
                region = "outside"
            table.add_row(slope_label(key), f"{slope:+.4f}", region)
    console.print(table)

    for result in run_checks(reports, config):
        color = "green" if result.passed else "red"
        console.print(f"  {result.name}: [{color}]{'pass' if result.passed else 'FAIL'}[/{color}] {result.detail}")

    console.print()
    if flat:
        worst = max(flat)
        console.print(f"Largest in-region |slope|: {worst:.4f} (flat_slope = {thresholds.flat_slope})")
        console.print(f"  suggested flat_slope: {math.ceil(2 * worst * 100) / 100:.2f}")
    if growth:
        weakest = min(growth)
        console.print(f"Smallest probe slope: {weakest:.4f} (growth_slope = {thresholds.growth_slope})")
        console.print(f"  suggested growth_slope: {math.floor(weakest / 2 * 100) / 100:.2f}")


if __name__ == "__main__":
    main()
