"""Cascade sampling of the scaling function and wavelet at dyadic points.

Values at the integers come from the eigenvector (eigenvalue 1) of the
refinement matrix, normalized so the integer samples sum to one. Each
refinement step fills in the odd dyadic points from the refinement equation
phi(x) = sqrt(2) * sum_n h_n phi(2x - n); even points are copied, so a deeper
cascade agrees exactly with a shallower one wherever both are defined.

The scaling function lives on [0, 2L-1]. The wavelet is placed on [1-L, L]:
psi(x) = sqrt(2) * sum_k g_k phi(2(x + L - 1) - k).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from ..errors import CascadeConstructionError, ResolutionError
from .filters import FilterPair, smoothness_estimate

logger = logging.getLogger(__name__)

MAX_DEPTH = 24

# Eigenvalue of the integer-point system must be this close to 1.
EIGEN_TOLERANCE = 1e-12

# c in tau(m) = c * 2^(-m * min(K_est, 1)). For m >= 1 the spacing-2^-m sums of
# x^k psi with k < L are exactly zero in exact arithmetic: the refinement
# relation turns each into sum_n g_n P(n) with deg P < L, which the highpass
# moments annihilate. The residual is rounding in the samples, kept below
# MOMENT_ROUNDING_FLOOR, and c holds tau(m) above that floor up to m = 16.
VANISHING_CONSTANT = 1e-6
MOMENT_ROUNDING_FLOOR = 1e-11


@dataclass(frozen=True)
class SampledWavelet:
    """Dyadic-grid samples of phi and psi at spacing 2^-depth."""

    filter: FilterPair
    depth: int
    phi_samples: np.ndarray
    psi_samples: np.ndarray
    smoothness_estimate: float

    @property
    def order(self) -> int:
        return self.filter.order

    @property
    def phi_support(self) -> tuple[int, int]:
        return 0, 2 * self.order - 1

    @property
    def psi_support(self) -> tuple[int, int]:
        return 1 - self.order, self.order

    @property
    def spacing(self) -> float:
        return 2.0 ** -self.depth

    def psi_points(self) -> np.ndarray:
        """Abscissae of psi_samples."""
        lo, _ = self.psi_support
        return lo + np.arange(self.psi_samples.size) * self.spacing


def _integer_values(fp: FilterPair) -> np.ndarray:
    """phi(0), ..., phi(2L-2) from the refinement eigenproblem; phi(2L-1) = 0."""
    h = fp.lowpass
    size = fp.length - 1
    matrix = np.zeros((size, size))
    for k in range(size):
        for j in range(size):
            n = 2 * k - j
            if 0 <= n < fp.length:
                matrix[k, j] = math.sqrt(2.0) * h[n]

    eigenvalues, eigenvectors = scipy.linalg.eig(matrix)
    index = int(np.argmin(np.abs(eigenvalues - 1.0)))
    if abs(eigenvalues[index] - 1.0) > EIGEN_TOLERANCE:
        raise CascadeConstructionError(
            f"Refinement matrix of order {fp.order} has no eigenvalue 1 "
            f"(closest: {eigenvalues[index]:.3e})"
        )

    vector = np.real(eigenvectors[:, index])
    total = math.fsum(vector)
    if abs(total) < EIGEN_TOLERANCE:
        raise CascadeConstructionError(f"Integer-point eigenvector of order {fp.order} sums to zero")
    return np.append(vector / total, 0.0)


def _refine(values: np.ndarray, h: np.ndarray, level: int) -> np.ndarray:
    """One cascade step from spacing 2^-level to 2^-(level+1)."""
    step = 2**level
    out = np.zeros(2 * (values.size - 1) + 1)
    for n, coefficient in enumerate(h):
        start = n * step
        out[start:start + values.size] += math.sqrt(2.0) * coefficient * values
    out[0::2] = values
    return out


def cascade_sample(fp: FilterPair, depth: int) -> SampledWavelet:
    """Sample phi and psi at all dyadic points k * 2^-depth of their supports.

    Args:
        fp: Daubechies filter pair of order L
        depth: m >= 0, at most 24

    Returns:
        SampledWavelet with (2L-1) * 2^m + 1 samples of each function

    Raises:
        ResolutionError: depth outside 0..24
        CascadeConstructionError: integer-point system has no usable solution
    """
    if not 0 <= depth <= MAX_DEPTH:
        raise ResolutionError(f"Cascade depth {depth} outside 0..{MAX_DEPTH}")

    phi = _integer_values(fp)
    for level in range(depth):
        phi = _refine(phi, fp.lowpass, level)

    # psi at y = i / 2^m on the shifted support needs phi at 2y - k.
    scale = 2**depth
    index = 2 * np.arange(phi.size)
    psi = np.zeros(phi.size)
    for k, coefficient in enumerate(fp.highpass):
        source = index - k * scale
        valid = (source >= 0) & (source < phi.size)
        psi[valid] += math.sqrt(2.0) * coefficient * phi[source[valid]]

    phi.setflags(write=False)
    psi.setflags(write=False)
    logger.debug(f"Cascade order {fp.order} depth {depth}: {phi.size} samples")

    return SampledWavelet(
        filter=fp,
        depth=depth,
        phi_samples=phi,
        psi_samples=psi,
        smoothness_estimate=smoothness_estimate(fp.order),
    )


def moment(sw: SampledWavelet, k: int) -> float:
    """Riemann-sum approximation of the k-th moment of psi at spacing 2^-m."""
    if not 0 <= k <= 2 * sw.order:
        raise ValueError(f"Moment order {k} outside 0..{2 * sw.order}")
    x = sw.psi_points()
    return math.fsum(x**k * sw.psi_samples) * sw.spacing


def vanishing_tolerance(sw: SampledWavelet, constant: Optional[float] = None) -> float:
    """tau(m) for the relative moment residuals of psi, never below the rounding floor."""
    c = VANISHING_CONSTANT if constant is None else constant
    return max(c * 2.0 ** (-sw.depth * min(sw.smoothness_estimate, 1.0)), MOMENT_ROUNDING_FLOOR)


def relative_moment(sw: SampledWavelet, k: int) -> float:
    """|moment k| divided by the matching absolute moment of psi."""
    x = sw.psi_points()
    scale = math.fsum(np.abs(x**k * sw.psi_samples)) * sw.spacing
    return abs(moment(sw, k)) / scale if scale > 0 else 0.0
