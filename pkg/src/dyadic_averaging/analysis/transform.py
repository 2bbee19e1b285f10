"""Wavelet analysis and synthesis on dyadic grids.

Scaled wavelets are psi_{j,nu}(x) = 2^-1/2 psi(2^(j-1) x - nu) for j >= 1 and
psi_{0,nu}(x) = psi_0(x - nu). Coefficients are lambda_{j,nu}(f) = 2^j <f, psi_{j,nu}>,
evaluated as Riemann sums over the grid cells (value of psi_{j,nu} at the
left endpoint of each cell). Every cell endpoint is a dyadic point of the
sampled wavelet, so no interpolation is involved.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import DomainRangeError, ResolutionError
from ..grid.functions import DyadicGrid, GridFunction
from ..wavelets.cascade import SampledWavelet, cascade_sample
from ..wavelets.filters import daubechies_filter
from .coefficients import CoefficientField, level_exponent, support_start, translate_range

logger = logging.getLogger(__name__)

# Finest analysed level sits this many levels below the grid resolution, so
# the finest wavelet spans at least (2L-1) * 2^(margin+1) cells.
DEFAULT_MARGIN = 4

HAAR_QUADRATURE_TOLERANCE = 1e-12

# Allowed multiple of the measured Riemann-sum error.
QUADRATURE_SAFETY = 2.0


@dataclass(frozen=True)
class LevelProfile:
    """psi_{j,0} on the cells it covers, with the cell offset of translate 0."""

    j: int
    exponent: int
    t_lo: int
    values: np.ndarray

    @property
    def width(self) -> int:
        return self.values.size

    def start_cell(self, nu: int) -> int:
        """Global index of the first cell covered by psi_{j,nu}."""
        return (self.t_lo + nu) * 2**self.exponent


def level_profile(j: int, sw: SampledWavelet, J: int) -> LevelProfile:
    """Cell values of psi_{j,0} at resolution J.

    Raises:
        ResolutionError: the cascade is too coarse for level j at resolution J
    """
    if j < 0 or j > J:
        raise ResolutionError(f"Level {j} outside 0..{J}")
    e = level_exponent(j, J)
    if sw.depth < e:
        raise ResolutionError(
            f"Level {j} at resolution J={J} needs cascade depth {e}, have {sw.depth}"
        )
    step = 2 ** (sw.depth - e)
    if j == 0:
        values = sw.phi_samples[::step][:-1]
    else:
        values = sw.psi_samples[::step][:-1] / math.sqrt(2.0)
    values = np.array(values)
    values.setflags(write=False)
    return LevelProfile(j=j, exponent=e, t_lo=support_start(j, sw.order), values=values)


def _check_levels(j_max: int, grid: DyadicGrid, sw: SampledWavelet, margin: int):
    if j_max < 0:
        raise ValueError(f"Top level must be nonnegative, got {j_max}")
    if j_max > grid.J - margin:
        raise ResolutionError(
            f"Top level {j_max} too fine for J={grid.J} with margin {margin} "
            f"(need j_max <= {grid.J - margin})"
        )
    if sw.depth < grid.J:
        raise ResolutionError(f"Cascade depth {sw.depth} below grid resolution J={grid.J}")


def wavelet_at(j: int, nu: int, sw: SampledWavelet, grid: DyadicGrid) -> GridFunction:
    """psi_{j,nu} as a grid function (zero outside the domain).

    Raises:
        ResolutionError: cascade depth below J - j + 1 (below J for j = 0)
        DomainRangeError: the translate does not meet the domain
    """
    if nu not in translate_range(j, sw.order, grid):
        raise DomainRangeError(f"psi_({j},{nu}) does not meet [{grid.x0}, {grid.x1})")
    profile = level_profile(j, sw, grid.J)

    start = profile.start_cell(nu) - grid.first_cell
    lo, hi = max(start, 0), min(start + profile.width, grid.n_cells)
    values = np.zeros(grid.n_cells)
    values[lo:hi] = profile.values[lo - start:hi - start]
    return GridFunction(grid, values)


def analyze(
    f: GridFunction,
    sw: SampledWavelet,
    j_max: int,
    margin: int = DEFAULT_MARGIN,
) -> CoefficientField:
    """Coefficients lambda_{j,nu}(f) for 0 <= j <= j_max and every translate meeting the domain.

    Args:
        f: grid function at resolution J
        sw: sampled wavelet with depth >= J
        j_max: top level, at most J - margin
        margin: resolution gap kept below the grid

    Returns:
        CoefficientField of order sw.order

    Raises:
        ResolutionError: margin or depth violated
    """
    grid = f.grid
    _check_levels(j_max, grid, sw, margin)

    offsets, levels = [], []
    for j in range(j_max + 1):
        profile = level_profile(j, sw, grid.J)
        nus = translate_range(j, sw.order, grid)
        first = profile.start_cell(nus.start)
        last = profile.start_cell(nus.stop - 1) + profile.width

        # Zero extension of f over every cell touched by the translates.
        padded = np.zeros(last - first)
        padded[grid.first_cell - first:grid.first_cell - first + grid.n_cells] = f.values
        windows = sliding_window_view(padded, profile.width)[::2**profile.exponent]
        lam = (windows @ profile.values) * 2.0 ** (j - grid.J)

        offsets.append(nus.start)
        levels.append(lam)

    logger.debug(f"Analyzed J={grid.J} grid up to level {j_max} (order {sw.order})")
    return CoefficientField(order=sw.order, offsets=tuple(offsets), levels=tuple(levels))


def synthesize(
    c: CoefficientField,
    sw: SampledWavelet,
    grid: DyadicGrid,
    margin: int = DEFAULT_MARGIN,
) -> GridFunction:
    """Sum over j and nu of lambda_{j,nu} psi_{j,nu}, restricted to the grid.

    Raises:
        ResolutionError: c.j_max too fine for the grid, or cascade too coarse
        ValueError: wavelet order of c and sw differ
    """
    if c.order != sw.order:
        raise ValueError(f"Coefficients of order {c.order} cannot use an order {sw.order} wavelet")
    _check_levels(c.j_max, grid, sw, margin)

    values = np.zeros(grid.n_cells)
    for j in range(c.j_max + 1):
        if not np.any(c.levels[j]):
            continue
        profile = level_profile(j, sw, grid.J)
        for nu in c.translates(j):
            lam = c.levels[j][nu - c.offsets[j]]
            if lam == 0.0:
                continue
            start = profile.start_cell(nu) - grid.first_cell
            lo, hi = max(start, 0), min(start + profile.width, grid.n_cells)
            if lo < hi:
                values[lo:hi] += lam * profile.values[lo - start:hi - start]
    return GridFunction(grid, values)


def partial_sum(
    c: CoefficientField,
    N: int,
    sw: SampledWavelet,
    grid: DyadicGrid,
    margin: int = DEFAULT_MARGIN,
) -> GridFunction:
    """P_N f: synthesis truncated to levels j <= N (full synthesis when N > j_max)."""
    if N < 0:
        raise ValueError(f"Partial sums start at N=0, got {N}")
    return synthesize(c.truncated(N), sw, grid, margin=margin)


def _lagged_sums(a: np.ndarray, b: np.ndarray, step: int, lags: range) -> list[float]:
    """sum_n a[n] b[n + lag * step] over the overlap, for each lag."""
    sums = []
    for lag in lags:
        d = lag * step
        lo, hi = max(0, -d), min(a.size, b.size - d)
        sums.append(math.fsum(a[lo:hi] * b[lo + d:hi + d]) if lo < hi else 0.0)
    return sums


@lru_cache(maxsize=None)
def quadrature_error(order: int, gap: int) -> float:
    """Largest deviation from orthonormality of grid pairings of unit wavelets gap levels below J.

    A level j >= 1 wavelet covers (2L-1) 2^(gap+1) cells holding psi at spacing
    2^-(gap+1) over sqrt 2, and one level coarser the spacing halves. The
    pairing 2^j <psi_{j,nu}, psi_{j',nu'}> for j' in {j-1, j} is therefore a
    lagged sum of cascade samples. Returns the largest |pairing - delta| over
    every overlapping lag; lag 0 at j' = j is |lambda - 1| for
    analyze(wavelet_at(j, nu)) with an interior translate.

    Raises:
        ValueError: negative gap
    """
    if gap < 0:
        raise ValueError(f"Level gap must be nonnegative, got {gap}")
    e = gap + 1
    sw = cascade_sample(daubechies_filter(order), e + 1)
    fine = sw.psi_samples[::2][:-1]
    coarse = sw.psi_samples[:-1]
    span = 2 * order - 1

    same = _lagged_sums(fine, fine, 2**e, range(span))
    cross = _lagged_sums(fine, coarse, 2**e, range(1 - span, 2 * span))
    scale = 2.0**-e
    deviations = [abs(scale * same[0] - 1.0)] + [abs(scale * value) for value in same[1:] + cross]
    return max(deviations)


def quadrature_tolerance(order: int, gap: int) -> float:
    """Error budget tau_quad(L, gap) for lambda of a unit wavelet gap levels below J.

    Haar quadrature is exact up to rounding. Other orders get QUADRATURE_SAFETY
    times the error measured by quadrature_error, plus the Haar rounding floor.
    """
    if order == 1:
        return HAAR_QUADRATURE_TOLERANCE
    return QUADRATURE_SAFETY * quadrature_error(order, gap) + HAAR_QUADRATURE_TOLERANCE
