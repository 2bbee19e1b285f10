"""Piecewise-constant functions on a finite dyadic domain."""

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ..errors import AlignmentError, ResolutionError

MAX_RESOLUTION = 24

Number = Union[int, float]


def _lattice_index(x: float, level: int) -> int:
    """x * 2^level as an int, or AlignmentError when x is off that lattice."""
    scaled = float(x) * 2.0**level
    if not scaled.is_integer():
        raise AlignmentError(f"{x} is not on the 2^-{level} lattice")
    return int(scaled)


@dataclass(frozen=True)
class DyadicGrid:
    """Cells of width 2^-J covering the dyadic interval [x0, x1)."""

    J: int
    x0: float = 0.0
    x1: float = 1.0

    def __post_init__(self):
        if not 0 <= self.J <= MAX_RESOLUTION:
            raise ResolutionError(f"Grid resolution J={self.J} outside 0..{MAX_RESOLUTION}")
        if not self.x0 < self.x1:
            raise AlignmentError(f"Empty domain [{self.x0}, {self.x1})")
        _lattice_index(self.x0, self.J)
        _lattice_index(self.x1, self.J)

    @property
    def first_cell(self) -> int:
        """Global index of the first cell, i.e. x0 * 2^J."""
        return _lattice_index(self.x0, self.J)

    @property
    def n_cells(self) -> int:
        return _lattice_index(self.x1, self.J) - self.first_cell

    @property
    def cell_width(self) -> float:
        return 2.0 ** -self.J

    def left_endpoints(self) -> np.ndarray:
        return (self.first_cell + np.arange(self.n_cells)) * self.cell_width

    def is_aligned(self, level: int) -> bool:
        """True when both endpoints lie on the 2^-level lattice."""
        try:
            _lattice_index(self.x0, level)
            _lattice_index(self.x1, level)
        except AlignmentError:
            return False
        return True

    def interval_range(self, level: int) -> range:
        """Indices mu with I_{level,mu} contained in the domain."""
        if level > self.J:
            raise ResolutionError(f"Level {level} finer than grid resolution J={self.J}")
        width = 2 ** (self.J - level)
        lo = -(-self.first_cell // width)
        hi = (self.first_cell + self.n_cells) // width
        return range(lo, max(lo, hi))

    def zeros(self) -> "GridFunction":
        return GridFunction(self, np.zeros(self.n_cells))

    def as_dict(self) -> dict:
        return {"J": self.J, "x0": self.x0, "x1": self.x1}


@dataclass(frozen=True)
class GridFunction:
    """Function equal to values[i] on the i-th cell of the grid, zero outside."""

    grid: DyadicGrid
    values: np.ndarray = field(repr=False)

    # Keep numpy scalars from broadcasting into an object array.
    __array_ufunc__ = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"Expected {self.grid.n_cells} cell values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("Grid function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def _check_grid(self, other: "GridFunction"):
        if other.grid != self.grid:
            raise ValueError(f"Grid mismatch: {self.grid} vs {other.grid}")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_grid(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_grid(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar: Number) -> "GridFunction":
        return GridFunction(self.grid, float(scalar) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.grid, -self.values)

    def inner(self, other: "GridFunction") -> float:
        """Exact L2 pairing of two piecewise-constant functions."""
        self._check_grid(other)
        return float(np.sum(self.values * other.values)) * self.grid.cell_width

    def integral(self) -> float:
        return float(np.sum(self.values)) * self.grid.cell_width


@dataclass(frozen=True)
class MultiplierSeq:
    """Finite real sequence indexed from ``start`` (levels n or positions mu)."""

    entries: np.ndarray = field(repr=False)
    start: int = 0

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float).reshape(-1)
        if not np.all(np.isfinite(entries)):
            raise ValueError("Multiplier entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def constant(cls, value: float, indices: range) -> "MultiplierSeq":
        return cls(np.full(len(indices), float(value)), start=indices.start)

    def __len__(self) -> int:
        return self.entries.size

    @property
    def indices(self) -> range:
        return range(self.start, self.start + self.entries.size)

    def covers(self, indices: range) -> bool:
        return len(indices) == 0 or (indices.start >= self.start and indices.stop <= self.indices.stop)

    def __getitem__(self, index: int) -> float:
        if index not in self.indices:
            raise IndexError(f"Multiplier has no entry at index {index}")
        return float(self.entries[index - self.start])

    def window(self, indices: range) -> np.ndarray:
        """Entries for a contiguous index range (caller checks coverage)."""
        return self.entries[indices.start - self.start:indices.stop - self.start]

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0
