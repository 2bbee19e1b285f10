"""Discrete Triebel-Lizorkin and Besov quasi-norms of coefficient fields.

Both norms are built from the level functions
2^(js) * sum over nu of lambda_{j,nu} 1_{j,nu}, with 1_{j,nu} the indicator of
I_{j,nu} = [2^-j nu, 2^-j (nu+1)). The F quasi-norm combines levels pointwise
in l^q and then takes the L_p norm; the B quasi-norm takes the L_p norm per
level and then combines in l^q. q = inf (and p = inf for B) uses suprema.

Only levels 0..j_max enter, so these are truncated norms.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..analysis.coefficients import CoefficientField
from ..errors import ResolutionError, UnsupportedIndexError
from ..grid.functions import DyadicGrid

logger = logging.getLogger(__name__)


def _positive_or_inf(name: str, value: float):
    if not (value > 0 or math.isinf(value)) or math.isnan(value):
        raise UnsupportedIndexError(f"{name} must be in (0, inf], got {value}")


@dataclass(frozen=True)
class SmoothnessIndex:
    """Parameters (p, q, s) plus the fine index r used for Besov targets."""

    p: float
    q: float
    s: float
    r: Optional[float] = None

    def __post_init__(self):
        _positive_or_inf("p", self.p)
        _positive_or_inf("q", self.q)
        if not math.isfinite(self.s):
            raise UnsupportedIndexError(f"s must be finite, got {self.s}")
        if self.r is None:
            object.__setattr__(self, "r", self.q)
        _positive_or_inf("r", self.r)

    def with_s(self, s: float) -> "SmoothnessIndex":
        return SmoothnessIndex(p=self.p, q=self.q, s=s, r=self.r)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.p, self.q, self.s, self.r


def _lq_combine(terms: np.ndarray, q: float, axis: int = 0) -> np.ndarray:
    """(sum |t|^q)^(1/q) along axis, sup for q = inf; terms are nonnegative."""
    if math.isinf(q):
        return np.max(terms, axis=axis)
    return np.sum(terms**q, axis=axis) ** (1.0 / q)


def _level_functions(c: CoefficientField, s: float) -> tuple[np.ndarray, float]:
    """Rows g_j = 2^(js)|lambda_{j,nu}| on the 2^-j_max lattice, plus the cell width.

    The lattice covers every interval I_{j,nu} that carries a stored coefficient.
    """
    j_max = c.j_max
    spans = [
        (j, c.offsets[j] * 2 ** (j_max - j), (c.offsets[j] + c.levels[j].size) * 2 ** (j_max - j))
        for j in range(j_max + 1)
        if c.levels[j].size
    ]
    if not spans:
        return np.zeros((0, 0)), 2.0**-j_max
    lo = min(span[1] for span in spans)
    hi = max(span[2] for span in spans)

    rows = np.zeros((j_max + 1, hi - lo))
    for j, start, stop in spans:
        repeated = np.repeat(np.abs(c.levels[j]), 2 ** (j_max - j))
        rows[j, start - lo:stop - lo] = 2.0 ** (j * s) * repeated
    return rows, 2.0**-j_max


def f_quasinorm(c: CoefficientField, idx: SmoothnessIndex, grid: Optional[DyadicGrid] = None) -> float:
    """|| (sum_j |2^(js) sum_nu lambda_{j,nu} 1_{j,nu}|^q)^(1/q) ||_{L_p}.

    The integrand is constant on the 2^-j_max lattice, so the integral is
    evaluated there exactly. A grid, when given, must resolve that lattice.

    Args:
        c: coefficient field
        idx: smoothness index with finite p
        grid: grid the coefficients were computed on

    Raises:
        UnsupportedIndexError: p = inf
        ResolutionError: grid coarser than the 2^-j_max lattice
    """
    if math.isinf(idx.p):
        raise UnsupportedIndexError("F quasi-norm with p = inf is not supported")
    if grid is not None and grid.J < c.j_max:
        raise ResolutionError(f"Grid resolution J={grid.J} cannot hold level {c.j_max} coefficients")

    rows, width = _level_functions(c, idx.s)
    peak = float(rows.max()) if rows.size else 0.0
    if peak == 0.0:
        return 0.0
    # Normalizing by the peak keeps powers of small q and p in range.
    pointwise = _lq_combine(rows / peak, idx.q)
    total = float(np.sum(pointwise**idx.p)) * width
    return peak * total ** (1.0 / idx.p)


def level_norms(c: CoefficientField, idx: SmoothnessIndex) -> np.ndarray:
    """|| 2^(js) sum_nu lambda_{j,nu} 1_{j,nu} ||_{L_p} for every level j."""
    norms = np.zeros(c.j_max + 1)
    for j, values in enumerate(c.levels):
        magnitudes = np.abs(values)
        peak = float(magnitudes.max()) if magnitudes.size else 0.0
        if peak == 0.0:
            continue
        if math.isinf(idx.p):
            norms[j] = 2.0 ** (j * idx.s) * peak
        else:
            total = float(np.sum((magnitudes / peak) ** idx.p)) * 2.0**-j
            norms[j] = 2.0 ** (j * idx.s) * peak * total ** (1.0 / idx.p)
    return norms


def b_quasinorm(c: CoefficientField, idx: SmoothnessIndex, q: Optional[float] = None) -> float:
    """(sum_j || 2^(js) sum_nu lambda_{j,nu} 1_{j,nu} ||_p^q)^(1/q).

    Args:
        c: coefficient field
        idx: smoothness index; idx.q is the outer exponent unless q is given
        q: outer exponent override (idx.r for Besov targets, inf for sources)
    """
    outer = idx.q if q is None else q
    _positive_or_inf("q", outer)
    norms = level_norms(c, idx)
    peak = float(norms.max()) if norms.size else 0.0
    if peak == 0.0:
        return 0.0
    return peak * float(_lq_combine(norms / peak, outer))


def quasi_triangle_constant(idx: SmoothnessIndex) -> float:
    """C with ||c + c'|| <= C (||c|| + ||c'||) for both quasi-norms: 2^(1/min(1,p,q) - 1)."""
    rho = min(1.0, idx.p, idx.q)
    return 2.0 ** (1.0 / rho - 1.0)
