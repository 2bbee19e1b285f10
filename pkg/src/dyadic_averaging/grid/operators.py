"""Dyadic averaging operators on grid functions.

Block means are formed by a halving summation tree (pairs of neighbouring
cells, then pairs of pairs, ...) followed by an exact power-of-two scaling.
This makes E_N applied to a function that is already constant on the
2^-M cells reproduce E_min(N, M) bit for bit.
"""

import logging
import math

import numpy as np

from ..errors import AlignmentError, DomainRangeError, MultiplierIndexError, ResolutionError
from .functions import DyadicGrid, GridFunction, MultiplierSeq

logger = logging.getLogger(__name__)


def _check_level(grid: DyadicGrid, N: int, need: int = 0, aligned: bool = True):
    if N < 0:
        raise ValueError(f"Level must be nonnegative, got {N}")
    if N + need > grid.J:
        raise ResolutionError(f"Level {N + need} exceeds grid resolution J={grid.J}")
    if aligned and not grid.is_aligned(N):
        raise AlignmentError(f"Domain [{grid.x0}, {grid.x1}) is not aligned to the 2^-{N} lattice")


def _block_means(values: np.ndarray, gap: int) -> np.ndarray:
    """Mean of each block of 2^gap consecutive cells."""
    sums = values.reshape(-1, 2**gap)
    while sums.shape[1] > 1:
        sums = sums[:, 0::2] + sums[:, 1::2]
    return sums[:, 0] * 2.0**-gap


def conditional_expectation(f: GridFunction, N: int) -> GridFunction:
    """E_N f: replace f by its mean on every interval of length 2^-N.

    Args:
        f: grid function at resolution J
        N: averaging level, 0 <= N <= J

    Raises:
        ResolutionError: N > J
        AlignmentError: domain endpoints off the 2^-N lattice
    """
    grid = f.grid
    _check_level(grid, N)
    gap = grid.J - N
    if gap == 0:
        return f
    means = _block_means(f.values, gap)
    return GridFunction(grid, np.repeat(means, 2**gap))


def martingale_difference(f: GridFunction, N: int) -> GridFunction:
    """D_N f = E_{N+1} f - E_N f."""
    _check_level(f.grid, N, need=1)
    return conditional_expectation(f, N + 1) - conditional_expectation(f, N)


def haar_function(N: int, mu: int, grid: DyadicGrid) -> GridFunction:
    """L-infinity normalized Haar function h_{N,mu}: +1 on the left half of I_{N,mu}, -1 on the right."""
    _check_level(grid, N, need=1, aligned=False)
    if mu not in grid.interval_range(N):
        raise DomainRangeError(f"I_({N},{mu}) is not contained in [{grid.x0}, {grid.x1})")

    width = 2 ** (grid.J - N)
    start = mu * width - grid.first_cell
    values = np.zeros(grid.n_cells)
    values[start:start + width // 2] = 1.0
    values[start + width // 2:start + width] = -1.0
    return GridFunction(grid, values)


def haar_multiplier(f: GridFunction, N: int, a: MultiplierSeq) -> GridFunction:
    """T_N[f, a] = sum over mu of a_mu 2^N <f, h_{N,mu}> h_{N,mu}.

    On I_{N,mu} the term 2^N <f, h_{N,mu}> h_{N,mu} is exactly D_N f restricted
    to that interval, so the sum is formed by weighting the half-interval means
    minus the interval mean. Only intervals inside the domain enter, and the
    result vanishes on cells outside them, so the domain need not be aligned
    to the 2^-N lattice. On an aligned domain with a identically one the
    result is D_N f bit for bit.

    Raises:
        MultiplierIndexError: a misses an interval index of the domain
    """
    grid = f.grid
    _check_level(grid, N, need=1, aligned=False)
    indices = grid.interval_range(N)
    if not a.covers(indices):
        raise MultiplierIndexError(
            f"Multiplier covers {a.indices}, level {N} needs {indices}"
        )

    gap = grid.J - N
    start = indices.start * 2**gap - grid.first_cell
    stop = start + len(indices) * 2**gap
    block = f.values[start:stop]
    halves = np.repeat(_block_means(block, gap - 1), 2 ** (gap - 1))
    means = np.repeat(_block_means(block, gap), 2**gap)

    values = np.zeros(grid.n_cells)
    values[start:stop] = np.repeat(a.window(indices), 2**gap) * (halves - means)
    return GridFunction(grid, values)


def levelwise_multiplier(
    f: GridFunction,
    b: MultiplierSeq,
    n_range: range,
    base: float = 0.0,
) -> GridFunction:
    """base * E_0 f + sum over n in n_range of b_n D_n f.

    Args:
        f: grid function
        b: level multipliers, must cover n_range
        n_range: contiguous range of levels, max level + 1 <= J
        base: weight of the E_0 term (1.0 gives the telescoping form of E_N)

    Raises:
        MultiplierIndexError: b does not cover n_range
    """
    if not b.covers(n_range):
        raise MultiplierIndexError(f"Multiplier covers {b.indices}, sum needs {n_range}")

    result = f.grid.zeros()
    if base != 0.0:
        result = result + base * conditional_expectation(f, 0)
    for n in n_range:
        result = result + b[n] * martingale_difference(f, n)
    logger.debug(f"Levelwise multiplier over {len(n_range)} levels (base={base})")
    return result


def lp_norm(f: GridFunction, p: float) -> float:
    """(sum of |v|^p 2^-J)^(1/p), or max |v| for p = inf."""
    if not p > 0:
        raise ValueError(f"Lebesgue exponent must be positive, got {p}")
    magnitudes = np.abs(f.values)
    peak = float(np.max(magnitudes)) if magnitudes.size else 0.0
    if math.isinf(p) or peak == 0.0:
        return peak
    # Scaling by the peak keeps |v|^p in range for small and large p.
    total = float(np.sum((magnitudes / peak) ** p)) * f.grid.cell_width
    return peak * total ** (1.0 / p)


def seq_norms(b: MultiplierSeq) -> tuple[float, float]:
    """(sup |b_n|, sum |b_{n+1} - b_n|)."""
    bv = math.fsum(np.abs(np.diff(b.entries))) if len(b) > 1 else 0.0
    return b.sup_norm, bv
