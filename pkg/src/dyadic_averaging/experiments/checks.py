"""Pass/fail checks over sweep reports.

Flatness checks fit the per-N corpus maximum of each (experiment, index,
family) profile from N = fit_n_min on, so a single noisy instance cannot
decide the verdict. Profiles with fewer than four positive maxima are not
fitted and do not count against a check.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from scipy.stats import spearmanr

from ..config import ExperimentConfig, ThresholdConfig
from ..errors import InsufficientDataError
from ..norms.regions import region_theorem, region_unconditional
from ..output.results import RatioReport, RatioRow, family_name, index_label
from .fitting import fit_profile, max_profile

logger = logging.getLogger(__name__)

ProfileKey = tuple[str, tuple, str]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    values: dict = field(default_factory=dict)


def profile_slopes(
    rows: Iterable[RatioRow],
    fit_n_min: int,
    weight: Optional[Callable[[RatioRow], float]] = None,
) -> dict[ProfileKey, float]:
    """Fitted slope per (experiment, index, family) of the per-N maximum ratio.

    Args:
        rows: rows to group
        fit_n_min: smallest N entering the fit
        weight: optional divisor applied to each ratio before taking maxima
    """
    groups: dict[ProfileKey, list[RatioRow]] = defaultdict(list)
    for row in rows:
        if row.N >= fit_n_min:
            groups[(row.experiment, row.index_key, family_name(row.family))].append(row)

    slopes = {}
    for key, group in groups.items():
        if weight is not None:
            group = [replace(row, ratio=row.ratio / weight(row)) for row in group]
        ns, maxima = max_profile(group)
        try:
            slopes[key], _ = fit_profile(ns, maxima)
        except InsufficientDataError as e:
            logger.debug(f"No fit for {key}: {e}")
    return slopes


def slope_label(key: ProfileKey) -> str:
    experiment, index_key, family = key
    return f"{experiment}|{index_label(index_key)}|{family}"


def check_flatness(
    name: str,
    rows: list[RatioRow],
    thresholds: ThresholdConfig,
    weight: Optional[Callable[[RatioRow], float]] = None,
) -> CheckResult:
    """Every fitted profile slope lies within +-flat_slope."""
    slopes = profile_slopes(rows, thresholds.fit_n_min, weight)
    if not slopes:
        return CheckResult(name, True, "no profiles to fit")
    worst_key = max(slopes, key=lambda key: abs(slopes[key]))
    worst = slopes[worst_key]
    passed = abs(worst) <= thresholds.flat_slope
    detail = f"max |slope| {abs(worst):.3f} at {slope_label(worst_key)} (limit {thresholds.flat_slope})"
    return CheckResult(name, passed, detail, {slope_label(k): v for k, v in slopes.items()})


def check_growth(name: str, rows: list[RatioRow], thresholds: ThresholdConfig) -> CheckResult:
    """Every fitted profile slope exceeds growth_slope."""
    slopes = profile_slopes(rows, thresholds.fit_n_min)
    if not slopes:
        return CheckResult(name, False, "no growth profile could be fitted")
    weakest_key = min(slopes, key=slopes.get)
    passed = slopes[weakest_key] > thresholds.growth_slope
    detail = f"min slope {slopes[weakest_key]:.3f} at {slope_label(weakest_key)} (limit {thresholds.growth_slope})"
    return CheckResult(name, passed, detail, {slope_label(k): v for k, v in slopes.items()})


def check_region_consistency(report: RatioReport) -> CheckResult:
    """Row flags equal the region predicates recomputed from (p, q, s)."""
    bad = [
        row for row in report.rows
        if row.in_theorem != region_theorem(row.index) or row.in_uncond != region_unconditional(row.index)
    ]
    return CheckResult(
        f"region_consistency[{report.experiment}]",
        not bad,
        f"{len(bad)} of {len(report.rows)} rows disagree",
    )


def _relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def check_telescoping(en: RatioReport, mult: RatioReport, thresholds: ThresholdConfig) -> CheckResult:
    """Multiplier rows with b = 1 (plus E_0) reproduce the E_N rows."""
    expected = {(row.family, row.index_key, row.N): row.num for row in en.select("en")}
    gaps = [
        _relative_gap(row.num, expected[(row.family, row.index_key, row.N)])
        for row in mult.select("mult-ones-F")
        if (row.family, row.index_key, row.N) in expected
    ]
    if not gaps:
        return CheckResult("telescoping", False, "no matching en / mult-ones-F rows")
    worst = max(gaps)
    return CheckResult(
        "telescoping",
        worst <= thresholds.telescoping,
        f"max relative gap {worst:.2e} over {len(gaps)} rows (limit {thresholds.telescoping:g})",
    )


def check_tn_matches_dn(tn: RatioReport, thresholds: ThresholdConfig) -> CheckResult:
    """T_N[f, 1] equals D_N f cellwise."""
    diffs = [row.extra["dn_diff"] for row in tn.select("tn-ones") if "dn_diff" in row.extra]
    if not diffs:
        return CheckResult("tn_ones_equals_dn", False, "no tn-ones rows with a D_N comparison")
    worst = max(diffs)
    return CheckResult(
        "tn_ones_equals_dn",
        worst <= thresholds.telescoping,
        f"max cellwise |T_N[f,1] - D_N f| = {worst:.2e}",
    )


def check_multiplier_dichotomy(mult: RatioReport, config: ExperimentConfig) -> CheckResult:
    """Random-sign multipliers outside the unconditional region grow with the number of levels."""
    probe_keys = {index.to_index().as_tuple() for index in config.mult_indices}
    rows = [
        row for row in mult.select("mult-random_signs-F")
        if row.index_key in probe_keys and row.in_theorem and not row.in_uncond
    ]
    ns, maxima = max_profile(rows)
    if len(ns) < 3:
        return CheckResult("multiplier_dichotomy", False, f"only {len(ns)} levels with random-sign rows")
    rho = float(spearmanr(ns, maxima)[0])
    if math.isnan(rho):
        rho = 0.0
    return CheckResult(
        "multiplier_dichotomy",
        rho > config.thresholds.spearman,
        f"Spearman rho {rho:.3f} over N={ns[0]}..{ns[-1]} (limit {config.thresholds.spearman})",
        {"rho": rho, "max_ratio": dict(zip(map(str, ns), maxima))},
    )


def _bv_weight(row: RatioRow) -> float:
    return row.extra.get("sup", 1.0) + row.extra.get("bv", 0.0) or 1.0


def run_checks(reports: dict[str, RatioReport], config: ExperimentConfig) -> list[CheckResult]:
    """All checks whose sweeps are present in reports (keyed by experiment)."""
    thresholds = config.thresholds
    probe_keys = {index.to_index().as_tuple() for index in config.probe_indices}
    results = [check_region_consistency(report) for report in reports.values()]

    def in_theorem(report: RatioReport, experiment: str) -> list[RatioRow]:
        return [row for row in report.select(experiment) if row.in_theorem and row.index_key not in probe_keys]

    for name in ("en", "pn", "enb"):
        if name in reports:
            results.append(check_flatness(f"flat[{name}]", in_theorem(reports[name], name), thresholds))

    if "enpn" in reports:
        enpn = reports["enpn"]
        results.append(check_flatness("flat[enpn]", in_theorem(enpn, "enpn"), thresholds))
        probes = [
            row for row in enpn.select("enpn")
            if row.index_key in probe_keys and family_name(row.family) in config.probe_families
        ]
        results.append(check_growth("growth[enpn]", probes, thresholds))

    if "tn" in reports:
        tn = reports["tn"]
        for a_family in config.tn_families:
            experiment = f"tn-{a_family}"
            results.append(check_flatness(f"flat[{experiment}]", in_theorem(tn, experiment), thresholds))
        if "ones" in config.tn_families:
            results.append(check_tn_matches_dn(tn, thresholds))

    if "mult" in reports:
        mult = reports["mult"]
        for b_family in config.mult_families:
            for scale in config.mult_scales:
                experiment = f"mult-{b_family}-{scale}"
                if scale == "B" or b_family in ("ones", "bv_bounded"):
                    rows = in_theorem(mult, experiment)
                else:
                    rows = [row for row in mult.select(experiment) if row.in_uncond]
                weight = _bv_weight if b_family == "bv_bounded" else None
                results.append(check_flatness(f"flat[{experiment}]", rows, thresholds, weight))
        if "random_signs" in config.mult_families and "F" in config.mult_scales:
            results.append(check_multiplier_dichotomy(mult, config))
        if "en" in reports and "ones" in config.mult_families and "F" in config.mult_scales:
            results.append(check_telescoping(reports["en"], mult, thresholds))

    for result in results:
        if result.passed:
            logger.info(f"check {result.name}: pass ({result.detail})")
        else:
            logger.warning(f"check {result.name}: FAIL ({result.detail})")
    return results


def boundary_slopes(report: RatioReport, fit_n_min: int) -> dict[str, float]:
    """Slope per boundary index (max over families), keyed by index label."""
    per_index: dict[str, float] = {}
    for (experiment, index_key, family), slope in profile_slopes(report.select("boundary"), fit_n_min).items():
        label = index_label(index_key)
        per_index[label] = max(per_index.get(label, -math.inf), slope)
    return per_index

