"""Parameter regions for the uniform bounds on E_N and martingale multipliers."""

import math

from .quasinorms import SmoothnessIndex


def _reciprocal(x: float) -> float:
    return 0.0 if math.isinf(x) else 1.0 / x


def theorem_bounds(idx: SmoothnessIndex) -> tuple[float, float]:
    """Open s-interval (1/p - 1, min(1/p, 1))."""
    inv_p = _reciprocal(idx.p)
    return inv_p - 1.0, min(inv_p, 1.0)


def unconditional_bounds(idx: SmoothnessIndex) -> tuple[float, float]:
    """Open s-interval (1/q - 1, 1/q)."""
    inv_q = _reciprocal(idx.q)
    return inv_q - 1.0, inv_q


def region_theorem(idx: SmoothnessIndex) -> bool:
    """1/p - 1 < s < min(1/p, 1) with p finite; p = inf lies outside."""
    if math.isinf(idx.p):
        return False
    lo, hi = theorem_bounds(idx)
    return lo < idx.s < hi


def region_unconditional(idx: SmoothnessIndex) -> bool:
    """Theorem region intersected with 1/q - 1 < s < 1/q."""
    lo, hi = unconditional_bounds(idx)
    return region_theorem(idx) and lo < idx.s < hi


def boundary_distance(idx: SmoothnessIndex, unconditional: bool = False) -> float:
    """Signed distance in s to the nearest active region edge (positive inside).

    Args:
        idx: smoothness index
        unconditional: also count the 1/q constraints
    """
    lo, hi = theorem_bounds(idx)
    distance = min(idx.s - lo, hi - idx.s)
    if unconditional:
        q_lo, q_hi = unconditional_bounds(idx)
        distance = min(distance, idx.s - q_lo, q_hi - idx.s)
    return distance


def wavelet_admissible(order: int, smoothness: float, idx: SmoothnessIndex) -> bool:
    """Advisory check that order L and Hoelder exponent K_est suffice for idx.

    Uses the usual sufficient conditions K > max(s, 0) and
    L > max(1/min(p, 1) - 1 - s, 0), with one extra vanishing moment as slack.
    """
    cancellation = max(1.0 / min(idx.p, 1.0) - 1.0 - idx.s, 0.0)
    return smoothness > max(idx.s, 0.0) and order > cancellation + 1.0
