"""Growth exponents of ratio profiles."""

import logging
from typing import Sequence

import numpy as np

from ..errors import InsufficientDataError
from ..output.results import RatioRow

logger = logging.getLogger(__name__)

MIN_FIT_POINTS = 4


def fit_profile(ns: Sequence[int], ratios: Sequence[float]) -> tuple[float, float]:
    """Least-squares line through (N, log2 ratio) over the positive ratios.

    Returns:
        (slope, max absolute residual)

    Raises:
        InsufficientDataError: fewer than 4 positive ratios
    """
    points = [(n, r) for n, r in zip(ns, ratios) if r > 0]
    if len(points) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"Growth fit needs {MIN_FIT_POINTS} positive ratios, got {len(points)}"
        )
    x = np.array([n for n, _ in points], dtype=float)
    y = np.log2([r for _, r in points])
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), residual


def fit_growth_exponent(rows: Sequence[RatioRow]) -> tuple[float, float]:
    """Slope of log2(ratio) against N for rows of one (index, function) profile."""
    ordered = sorted(rows, key=lambda row: row.N)
    return fit_profile([row.N for row in ordered], [row.ratio for row in ordered])


def max_profile(rows: Sequence[RatioRow]) -> tuple[list[int], list[float]]:
    """Per-N maximum ratio over the given rows (the C_obs profile)."""
    best: dict[int, float] = {}
    for row in rows:
        best[row.N] = max(best.get(row.N, 0.0), row.ratio)
    ns = sorted(best)
    return ns, [best[n] for n in ns]
