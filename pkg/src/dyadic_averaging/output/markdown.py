"""Assemble the report.md output."""

from typing import Optional

from .summary import RunSummary


def _checks_table(summary: RunSummary) -> list[str]:
    lines = ["| Check | Result | Detail |", "|---|---|---|"]
    for check in summary.checks:
        verdict = "pass" if check.passed else "**FAIL**"
        lines.append(f"| {check.name} | {verdict} | {check.detail} |")
    return lines


def _c_obs_table(summary: RunSummary) -> list[str]:
    lines = ["| Experiment / index | C_obs |", "|---|---|"]
    for sweep in summary.sweeps:
        for key, value in sweep.c_obs.items():
            lines.append(f"| {key} | {value:.4g} |")
    return lines


def assemble_report(summary: RunSummary, boundary: Optional[dict[str, float]] = None) -> str:
    """Assemble the complete report.md content.

    Format:
    - Verdict line
    - Checks table
    - C_obs per experiment and index
    - Boundary slopes (optional)
    - Footer

    Args:
        summary: run summary
        boundary: fitted slope per boundary index label

    Returns:
        Complete markdown report
    """
    parts = []

    # Verdict
    verdict = "all checks passed" if summary.passed else "some checks failed"
    parts.append(f"# dyadic-averaging run (seed {summary.seed})")
    parts.append("")
    parts.append(f"Experiments: {', '.join(summary.experiments)}. Result: **{verdict}**.")
    parts.append("")
    if summary.failures:
        parts.append("Steps with errors: " + "; ".join(summary.failures))
        parts.append("")

    # Checks
    if summary.checks:
        parts.append("## Checks")
        parts.append("")
        parts.extend(_checks_table(summary))
        parts.append("")

    # Observed constants
    if summary.sweeps:
        parts.append("## Observed constants")
        parts.append("")
        parts.append("C_obs is the corpus maximum of the measured ratio, a lower bound for the operator constant.")
        parts.append("All norms are truncated at j_max.")
        parts.append("")
        parts.extend(_c_obs_table(summary))
        parts.append("")

    # Boundary study
    if boundary:
        parts.append("## Boundary study")
        parts.append("")
        parts.append("| Index | Max slope |")
        parts.append("|---|---|")
        for label, slope in sorted(boundary.items()):
            parts.append(f"| {label} | {slope:+.3f} |")
        parts.append("")

    # Footer
    parts.append("---")
    parts.append("")
    parts.append(f"*Generated by dyadic-averaging {summary.version}*")

    return "\n".join(parts)
