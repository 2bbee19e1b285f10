"""Test-function corpus for the sweeps.

Synthesized families (single_wavelet, random_multilevel, random_signs_flat)
are built in coefficient space, so their coefficients are exact. They only
use translates whose wavelet support lies inside the domain. Grid families
(single_haar, smooth_bump, jump) are defined cellwise and analysed once.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..analysis.coefficients import CoefficientField, interior_translates
from ..analysis.transform import DEFAULT_MARGIN, analyze, synthesize
from ..config import FamilyConfig
from ..errors import ConfigError
from ..grid.functions import DyadicGrid, GridFunction
from ..grid.operators import haar_function
from ..norms.quasinorms import SmoothnessIndex, b_quasinorm
from ..wavelets.cascade import SampledWavelet
from .rng import XorShift64Star

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusItem:
    family: str
    instance: int
    function: GridFunction
    coefficients: CoefficientField
    exact: bool

    @property
    def label(self) -> str:
        return f"{self.family}#{self.instance}"


@dataclass(frozen=True)
class _Context:
    sw: SampledWavelet
    grid: DyadicGrid
    j_max: int
    margin: int

    def interior(self, j: int) -> range:
        nus = interior_translates(j, self.sw.order, self.grid)
        if len(nus) == 0:
            raise ConfigError(
                f"No order-{self.sw.order} wavelet at level {j} fits inside "
                f"[{self.grid.x0}, {self.grid.x1}); use a finer level"
            )
        return nus


def _pick(rng: XorShift64Star, values: range) -> int:
    return values[rng.integers(0, len(values))]


def _levels(family: FamilyConfig, ctx: _Context) -> range:
    """Levels from j_lo (default: coarsest level with an interior translate) to j_max."""
    j_lo = family.j_lo
    if j_lo is None:
        j_lo = next(
            (j for j in range(ctx.j_max + 1) if len(interior_translates(j, ctx.sw.order, ctx.grid))),
            None,
        )
        if j_lo is None:
            raise ConfigError(f"No level up to {ctx.j_max} has an interior translate")
    for j in range(j_lo, ctx.j_max + 1):
        ctx.interior(j)
    return range(j_lo, ctx.j_max + 1)


def _normalized(blocks: dict, family: FamilyConfig, ctx: _Context) -> CoefficientField:
    """Field scaled so its B^s_{p,inf} quasi-norm is one."""
    field = CoefficientField.from_levels(ctx.sw.order, blocks, ctx.j_max)
    norm = b_quasinorm(field, SmoothnessIndex(p=family.p, q=math.inf, s=family.s))
    return field * (1.0 / norm)


def _single_wavelet(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> CoefficientField:
    if not 0 <= family.j <= ctx.j_max:
        raise ConfigError(f"single_wavelet level {family.j} outside 0..{ctx.j_max}")
    nus = ctx.interior(family.j)
    nu = family.nu if family.nu is not None else _pick(rng, nus)
    if nu not in nus:
        raise ConfigError(f"psi_({family.j},{nu}) is not inside the domain (interior translates {nus})")
    return CoefficientField.single(ctx.sw.order, family.j, nu, j_max=ctx.j_max)


def _random_multilevel(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> CoefficientField:
    """lambda_{j,nu} = 2^(-j sigma) 2^(j/p) eps_{j,nu} with seeded signs eps."""
    blocks = {}
    for j in _levels(family, ctx):
        nus = ctx.interior(j)
        scale = 2.0 ** (-j * family.sigma) * 2.0 ** (j / family.p)
        blocks[j] = (nus.start, scale * rng.signs(len(nus)))
    return _normalized(blocks, family, ctx)


def _random_signs_flat(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> CoefficientField:
    """Random signs with every level contributing one to the B^s_{p,inf} norm."""
    blocks = {}
    for j in _levels(family, ctx):
        nus = ctx.interior(j)
        level_measure = len(nus) * 2.0**-j
        scale = 2.0 ** (-j * family.s) * level_measure ** (-1.0 / family.p)
        blocks[j] = (nus.start, scale * rng.signs(len(nus)))
    return _normalized(blocks, family, ctx)


def _single_haar(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> GridFunction:
    mus = ctx.grid.interval_range(family.N)
    mu = family.mu if family.mu is not None else _pick(rng, mus)
    return haar_function(family.N, mu, ctx.grid)


def _smooth_bump(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> GridFunction:
    """exp(1 - 1/(1 - t^2)) with t = (x - center) / width, sampled at cell left endpoints."""
    span = ctx.grid.x1 - ctx.grid.x0
    center = ctx.grid.x0 + span * (0.35 + 0.3 * rng.random())
    width = span * (0.1 + 0.15 * rng.random())
    t = (ctx.grid.left_endpoints() - center) / width
    inside = np.abs(t) < 1.0
    values = np.zeros(ctx.grid.n_cells)
    values[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return GridFunction(ctx.grid, values)


def _jump(family: FamilyConfig, rng: XorShift64Star, ctx: _Context) -> GridFunction:
    """Indicator of [a, b) with cell-aligned a in the second quarter and b in the third."""
    n = ctx.grid.n_cells
    a = n // 4 + rng.integers(0, max(n // 4, 1))
    b = n // 2 + rng.integers(0, max(n // 4, 1))
    values = np.zeros(n)
    values[a:max(a + 1, b)] = 1.0
    return GridFunction(ctx.grid, values)


SYNTHESIZED = {
    "single_wavelet": _single_wavelet,
    "random_multilevel": _random_multilevel,
    "random_signs_flat": _random_signs_flat,
}

GRID_DEFINED = {
    "single_haar": _single_haar,
    "smooth_bump": _smooth_bump,
    "jump": _jump,
}


def make_corpus(
    families: Sequence[FamilyConfig],
    seed: int,
    sw: SampledWavelet,
    grid: DyadicGrid,
    j_max: int,
    margin: int = DEFAULT_MARGIN,
) -> list[CorpusItem]:
    """Build every instance of every family deterministically from seed.

    Instance k of the i-th family entry draws from the stream
    (seed, family name, i, k), so adding families never perturbs the others.

    Raises:
        ConfigError: unknown family or a level with no interior translate
    """
    ctx = _Context(sw=sw, grid=grid, j_max=j_max, margin=margin)
    items = []
    instance_counts: dict[str, int] = {}
    for position, family in enumerate(families):
        if family.name not in SYNTHESIZED and family.name not in GRID_DEFINED:
            raise ConfigError(f"Unknown corpus family: {family.name}")
        for k in range(family.count):
            rng = XorShift64Star.for_stream(seed, family.name, position, k)
            instance = instance_counts.get(family.name, 0)
            instance_counts[family.name] = instance + 1

            if family.name in SYNTHESIZED:
                coefficients = SYNTHESIZED[family.name](family, rng, ctx)
                function = synthesize(coefficients, sw, grid, margin=margin)
                exact = True
            else:
                function = GRID_DEFINED[family.name](family, rng, ctx)
                coefficients = analyze(function, sw, j_max, margin=margin)
                exact = False

            items.append(CorpusItem(family.name, instance, function, coefficients, exact))

    logger.info(f"Corpus: {len(items)} functions from {len(families)} families (seed {seed})")
    return items
