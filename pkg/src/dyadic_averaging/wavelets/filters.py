"""Daubechies filter pairs and their algebraic identities.

The lowpass coefficients are the standard minimum-phase Daubechies constants as
tabulated by PyWavelets (``pywt.Wavelet("dbL").rec_lo``, i.e. h_0 first). No
spectral factorization happens at runtime; the tables are guarded by
``verify_filter_identities`` in the test suite instead of being trusted.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pywt

from ..errors import UnsupportedOrderError

logger = logging.getLogger(__name__)

MAX_ORDER = 10

SUM_TOLERANCE = 1e-12
ORTHOGONALITY_TOLERANCE = 1e-12
MOMENT_TOLERANCE = 1e-10

# Hoelder exponents of the order-L scaling functions (literature values).
# Only used by the admissibility heuristic, never computed here.
SMOOTHNESS_ESTIMATES = {
    1: 0.0,
    2: 0.550,
    3: 1.088,
    4: 1.618,
    5: 1.969,
    6: 2.189,
    7: 2.460,
    8: 2.761,
    9: 3.074,
    10: 3.361,
}


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class FilterPair:
    """Lowpass/highpass pair of a Daubechies system of order L (2L taps each)."""

    order: int
    lowpass: np.ndarray
    highpass: np.ndarray

    @classmethod
    def from_lowpass(cls, lowpass) -> "FilterPair":
        """Build the pair from h, deriving g_k = (-1)^k h_{2L-1-k}."""
        h = np.asarray(lowpass, dtype=float)
        if h.ndim != 1 or h.size == 0 or h.size % 2:
            raise ValueError(f"Lowpass filter needs an even, positive number of taps, got {h.size}")
        signs = np.where(np.arange(h.size) % 2 == 0, 1.0, -1.0)
        g = signs * h[::-1]
        return cls(order=h.size // 2, lowpass=_frozen(h), highpass=_frozen(g))

    @property
    def length(self) -> int:
        return self.lowpass.size


@dataclass(frozen=True)
class IdentityReport:
    """Max absolute residual per identity class, plus the verdict."""

    order: int
    sum_residual: float
    orthogonality_residual: float
    mirror_residual: float
    moment_residual: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "sum_residual": self.sum_residual,
            "orthogonality_residual": self.orthogonality_residual,
            "mirror_residual": self.mirror_residual,
            "moment_residual": self.moment_residual,
            "passed": self.passed,
        }


def daubechies_filter(order: int) -> FilterPair:
    """Return the tabulated minimum-phase Daubechies filter of the given order.

    Args:
        order: number of vanishing moments L, 1 <= L <= 10

    Returns:
        FilterPair with h_0..h_{2L-1} and the quadrature-mirror highpass

    Raises:
        UnsupportedOrderError: if L is outside 1..10
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise UnsupportedOrderError(f"Daubechies order must be an integer, got {order!r}")
    if not 1 <= order <= MAX_ORDER:
        raise UnsupportedOrderError(f"Unsupported Daubechies order {order} (supported: 1..{MAX_ORDER})")
    lowpass = pywt.Wavelet(f"db{int(order)}").rec_lo
    return FilterPair.from_lowpass(lowpass)


def verify_filter_identities(fp: FilterPair) -> IdentityReport:
    """Measure how well a filter pair satisfies the Daubechies identities.

    Checked: sum of h equals sqrt(2); shift-orthogonality of h over even lags;
    the quadrature-mirror rule for g; vanishing discrete moments of g of
    orders 0..L-1. Moments are evaluated on the tap positions rescaled to
    [0, 1], which keeps every term bounded by |g_k| and turns the residual
    into a scale-free measure.
    """
    h, g = fp.lowpass, fp.highpass
    n = h.size

    sum_residual = abs(math.fsum(h) - math.sqrt(2.0))

    autocorrelation = np.correlate(h, h, mode="full")
    even_lags = autocorrelation[1::2]
    target = np.zeros_like(even_lags)
    target[even_lags.size // 2] = 1.0
    orthogonality_residual = float(np.max(np.abs(even_lags - target)))

    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    mirror_residual = float(np.max(np.abs(g - signs * h[::-1])))

    positions = np.arange(n) / max(n - 1, 1)
    moment_residual = max(
        abs(math.fsum(positions**m * g)) for m in range(fp.order)
    )

    passed = (
        sum_residual < SUM_TOLERANCE
        and orthogonality_residual < ORTHOGONALITY_TOLERANCE
        and mirror_residual == 0.0
        and moment_residual < MOMENT_TOLERANCE
    )
    if not passed:
        logger.warning(
            f"Filter identities failed for order {fp.order}: sum={sum_residual:.2e} "
            f"orth={orthogonality_residual:.2e} moments={moment_residual:.2e}"
        )

    return IdentityReport(
        order=fp.order,
        sum_residual=sum_residual,
        orthogonality_residual=orthogonality_residual,
        mirror_residual=mirror_residual,
        moment_residual=float(moment_residual),
        passed=passed,
    )


def smoothness_estimate(order: int) -> float:
    """Tabulated Hoelder exponent K_est of the order-L Daubechies family."""
    if order not in SMOOTHNESS_ESTIMATES:
        raise UnsupportedOrderError(f"No smoothness estimate for order {order}")
    return SMOOTHNESS_ESTIMATES[order]
