"""Coefficient fields lambda_{j,nu} and the translate bookkeeping behind them."""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping, Union

import numpy as np

from ..grid.functions import DyadicGrid

logger = logging.getLogger(__name__)

Number = Union[int, float]


def level_exponent(j: int, J: int) -> int:
    """e with psi_{j,nu} sampled on the 2^-e lattice of its own variable at grid resolution J."""
    return J if j == 0 else J - j + 1


def support_start(j: int, order: int) -> int:
    """Left end of the generator's support: 0 for psi_0, 1-L for psi."""
    return 0 if j == 0 else 1 - order


def translate_range(j: int, order: int, grid: DyadicGrid) -> range:
    """Translates nu whose psi_{j,nu} support meets the domain of ``grid``.

    In grid cells psi_{j,nu} occupies [(t_lo + nu) 2^e, (t_lo + nu + 2L - 1) 2^e),
    with e = level_exponent(j, J) and t_lo = support_start(j, L).
    """
    e = level_exponent(j, grid.J)
    t_lo = support_start(j, order)
    c0, c1 = grid.first_cell, grid.first_cell + grid.n_cells
    lo = c0 // 2**e - t_lo - (2 * order - 1) + 1
    hi = -(-c1 // 2**e) - t_lo
    return range(lo, hi)


def interior_translates(j: int, order: int, grid: DyadicGrid) -> range:
    """Translates nu whose whole psi_{j,nu} support lies inside the domain."""
    e = level_exponent(j, grid.J)
    t_lo = support_start(j, order)
    c0, c1 = grid.first_cell, grid.first_cell + grid.n_cells
    lo = -(-c0 // 2**e) - t_lo
    hi = c1 // 2**e - t_lo - (2 * order - 1) + 1
    return range(lo, max(lo, hi))


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CoefficientField:
    """Wavelet coefficients lambda_{j,nu} for levels 0..j_max.

    Level j holds a contiguous block of translates starting at ``offsets[j]``;
    entries outside the block are zero.
    """

    order: int
    offsets: tuple[int, ...]
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.offsets) != len(self.levels):
            raise ValueError("Offsets and levels must have equal length")
        levels = tuple(_frozen(values) for values in self.levels)
        for j, values in enumerate(levels):
            if not np.all(np.isfinite(values)):
                raise ValueError(f"Non-finite coefficient at level {j}")
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_levels(
        cls,
        order: int,
        blocks: Mapping[int, tuple[int, np.ndarray]],
        j_max: int,
    ) -> "CoefficientField":
        """Build a field from {j: (first translate, values)}; missing levels are empty."""
        offsets, levels = [], []
        for j in range(j_max + 1):
            offset, values = blocks.get(j, (0, np.zeros(0)))
            offsets.append(offset)
            levels.append(values)
        return cls(order=order, offsets=tuple(offsets), levels=tuple(levels))

    @classmethod
    def single(cls, order: int, j: int, nu: int, value: float = 1.0, j_max: int = None) -> "CoefficientField":
        j_max = j if j_max is None else j_max
        if not 0 <= j <= j_max:
            raise ValueError(f"Level {j} outside 0..{j_max}")
        return cls.from_levels(order, {j: (nu, np.array([value]))}, j_max)

    @classmethod
    def zeros(cls, order: int, j_max: int) -> "CoefficientField":
        return cls.from_levels(order, {}, j_max)

    @property
    def j_max(self) -> int:
        return len(self.levels) - 1

    def translates(self, j: int) -> range:
        return range(self.offsets[j], self.offsets[j] + self.levels[j].size)

    def get(self, j: int, nu: int) -> float:
        if not 0 <= j <= self.j_max or nu not in self.translates(j):
            return 0.0
        return float(self.levels[j][nu - self.offsets[j]])

    def items(self) -> Iterator[tuple[int, int, float]]:
        """Nonzero (j, nu, lambda) triples in level, then translate order."""
        for j, values in enumerate(self.levels):
            for k in np.flatnonzero(values):
                yield j, self.offsets[j] + int(k), float(values[k])

    def nonzero_levels(self) -> list[int]:
        return [j for j, values in enumerate(self.levels) if np.any(values)]

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(v))) for v in self.levels if v.size), default=0.0)

    def _combine(self, other: "CoefficientField", sign: float) -> "CoefficientField":
        if other.order != self.order:
            raise ValueError(f"Cannot combine order {self.order} and order {other.order} fields")
        j_max = max(self.j_max, other.j_max)
        blocks = {}
        for j in range(j_max + 1):
            spans = [
                field.translates(j)
                for field in (self, other)
                if j <= field.j_max and field.levels[j].size
            ]
            if not spans:
                continue
            lo = min(span.start for span in spans)
            hi = max(span.stop for span in spans)
            values = np.zeros(hi - lo)
            if j <= self.j_max:
                span = self.translates(j)
                values[span.start - lo:span.stop - lo] += self.levels[j]
            if j <= other.j_max:
                span = other.translates(j)
                values[span.start - lo:span.stop - lo] += sign * other.levels[j]
            blocks[j] = (lo, values)
        return CoefficientField.from_levels(self.order, blocks, j_max)

    def __add__(self, other: "CoefficientField") -> "CoefficientField":
        return self._combine(other, 1.0)

    def __sub__(self, other: "CoefficientField") -> "CoefficientField":
        return self._combine(other, -1.0)

    def __mul__(self, scalar: Number) -> "CoefficientField":
        return CoefficientField(
            order=self.order,
            offsets=self.offsets,
            levels=tuple(float(scalar) * values for values in self.levels),
        )

    __rmul__ = __mul__

    def truncated(self, N: int) -> "CoefficientField":
        """Levels j <= N only (the coefficients of P_N f)."""
        if N < 0:
            raise ValueError(f"Truncation level must be nonnegative, got {N}")
        if N >= self.j_max:
            return self
        return CoefficientField(
            order=self.order,
            offsets=self.offsets[:N + 1],
            levels=self.levels[:N + 1],
        )

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "j_max": self.j_max,
            "levels": [
                {
                    "j": j,
                    "start": self.offsets[j],
                    "stop": self.offsets[j] + values.size,
                    "entries": [
                        [self.offsets[j] + int(k), float(values[k])]
                        for k in np.flatnonzero(values)
                    ],
                }
                for j, values in enumerate(self.levels)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CoefficientField":
        blocks = {}
        for level in data["levels"]:
            start, stop = int(level["start"]), int(level["stop"])
            values = np.zeros(stop - start)
            for nu, lam in level["entries"]:
                values[int(nu) - start] = float(lam)
            blocks[int(level["j"])] = (start, values)
        return cls.from_levels(int(data["order"]), blocks, int(data["j_max"]))


def save_coefficients(c: CoefficientField, path: Path) -> Path:
    """Sparse JSON dump; floats are written with 17 significant digits or fewer (repr)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(c.to_dict()) + "\n")
    return path


def load_coefficients(path: Path) -> CoefficientField:
    return CoefficientField.from_dict(json.loads(Path(path).read_text()))
