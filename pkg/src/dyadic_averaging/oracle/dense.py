"""Brute-force reference implementations.

Nothing here calls into the grid operators, the transform or the quasi-norm
kernels; each function re-derives its result from definitions, trading speed
for independence. Size guards keep them usable in tests only.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..analysis.coefficients import CoefficientField
from ..errors import AlignmentError, ResolutionError, SizeGuardError, UnsupportedIndexError
from ..grid.functions import DyadicGrid, GridFunction
from ..norms.quasinorms import SmoothnessIndex
from ..wavelets.cascade import SampledWavelet

logger = logging.getLogger(__name__)

MAX_DENSE_RESOLUTION = 12
MAX_BRUTE_LEVEL = 8


def dense_expectation_matrix(grid: DyadicGrid, N: int) -> np.ndarray:
    """Explicit cells x cells matrix of E_N.

    Raises:
        SizeGuardError: grid.J > 12
    """
    if grid.J > MAX_DENSE_RESOLUTION:
        raise SizeGuardError(f"Dense matrix needs J <= {MAX_DENSE_RESOLUTION}, got {grid.J}")
    if not 0 <= N <= grid.J:
        raise ResolutionError(f"Level {N} outside 0..{grid.J}")
    block = 2 ** (grid.J - N)
    if grid.first_cell % block or grid.n_cells % block:
        raise AlignmentError(f"Domain not aligned to the 2^-{N} lattice")
    return np.kron(np.eye(grid.n_cells // block), np.full((block, block), 1.0 / block))


def _psi_value(sw: SampledWavelet, j: int, nu: int, x: float) -> float:
    """psi_{j,nu}(x) looked up from the cascade samples; x must be a sample point."""
    if j == 0:
        t, lo, hi, samples, amplitude = x - nu, 0, 2 * sw.order - 1, sw.phi_samples, 1.0
    else:
        t = x * 2.0 ** (j - 1) - nu
        lo, hi, samples, amplitude = 1 - sw.order, sw.order, sw.psi_samples, 1.0 / math.sqrt(2.0)
    if not lo <= t < hi:
        return 0.0
    position = (t - lo) * 2.0**sw.depth
    if not position.is_integer():
        raise ResolutionError(f"x={x} is not a sample point of psi_({j},{nu})")
    return amplitude * float(samples[int(position)])


def naive_inner_products(f: GridFunction, sw: SampledWavelet, j_max: int) -> CoefficientField:
    """lambda_{j,nu} = 2^j sum_cells f(x) psi_{j,nu}(x) 2^-J, one coefficient at a time.

    Raises:
        SizeGuardError: grid.J > 12
    """
    grid = f.grid
    if grid.J > MAX_DENSE_RESOLUTION:
        raise SizeGuardError(f"Naive analysis needs J <= {MAX_DENSE_RESOLUTION}, got {grid.J}")

    width = 2.0**-grid.J
    blocks = {}
    for j in range(j_max + 1):
        # Support of psi_{j,nu} in x is [(a + nu) / scale, (b + nu) / scale).
        scale = 1.0 if j == 0 else 2.0 ** (j - 1)
        a, b = (0, 2 * sw.order - 1) if j == 0 else (1 - sw.order, sw.order)
        candidates = range(
            math.floor(grid.x0 * scale) - b - 1,
            math.ceil(grid.x1 * scale) - a + 1,
        )
        found = []
        for nu in candidates:
            left, right = (a + nu) / scale, (b + nu) / scale
            if right <= grid.x0 or left >= grid.x1:
                continue
            first = max(0, math.floor((left - grid.x0) / width))
            last = min(grid.n_cells, math.ceil((right - grid.x0) / width))
            terms = [
                f.values[i] * _psi_value(sw, j, nu, grid.x0 + i * width)
                for i in range(first, last)
            ]
            found.append((nu, 2.0**j * math.fsum(terms) * width))
        if found:
            start = found[0][0]
            blocks[j] = (start, np.array([lam for _, lam in found]))
    return CoefficientField.from_levels(sw.order, blocks, j_max)


def brute_norm(
    c: CoefficientField,
    idx: SmoothnessIndex,
    kind: str = "F",
    q: Optional[float] = None,
) -> float:
    """F or B quasi-norm by pointwise evaluation at the midpoints of the 2^-j_max lattice.

    Args:
        c: coefficient field with j_max <= 8
        idx: smoothness index
        kind: "F" or "B"
        q: outer exponent override for kind "B"

    Raises:
        SizeGuardError: j_max > 8
    """
    if c.j_max > MAX_BRUTE_LEVEL:
        raise SizeGuardError(f"Brute-force norm needs j_max <= {MAX_BRUTE_LEVEL}, got {c.j_max}")
    if kind not in ("F", "B"):
        raise ValueError(f"Unknown quasi-norm kind {kind!r}")
    if kind == "F" and math.isinf(idx.p):
        raise UnsupportedIndexError("F quasi-norm with p = inf is not supported")

    entries = list(c.items())
    if not entries:
        return 0.0
    lo = min(nu * 2.0**-j for j, nu, _ in entries)
    hi = max((nu + 1) * 2.0**-j for j, nu, _ in entries)
    h = 2.0**-c.j_max
    points = [lo + (k + 0.5) * h for k in range(int(round((hi - lo) / h)))]

    def level_value(j: int, x: float) -> float:
        return 2.0 ** (j * idx.s) * abs(c.get(j, math.floor(x * 2.0**j)))

    p = idx.p
    outer = idx.q if (kind == "F" or q is None) else q

    if kind == "F":
        integrand = []
        for x in points:
            values = [level_value(j, x) for j in range(c.j_max + 1)]
            if math.isinf(outer):
                integrand.append(max(values))
            else:
                integrand.append(math.fsum(v**outer for v in values) ** (1.0 / outer))
        return math.fsum(g**p for g in integrand) ** (1.0 / p) * h ** (1.0 / p)

    per_level = []
    for j in range(c.j_max + 1):
        values = [level_value(j, x) for x in points]
        if math.isinf(p):
            per_level.append(max(values))
        else:
            per_level.append((math.fsum(v**p for v in values) * h) ** (1.0 / p))
    if math.isinf(outer):
        return max(per_level)
    return math.fsum(v**outer for v in per_level) ** (1.0 / outer)
