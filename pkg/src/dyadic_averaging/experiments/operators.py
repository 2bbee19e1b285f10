"""Operator protocol and factory for the sweeps."""

from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from ..errors import ConfigError
from ..grid.functions import GridFunction, MultiplierSeq
from ..grid.operators import conditional_expectation, haar_multiplier, levelwise_multiplier
from .rng import XorShift64Star


class GridOperator(Protocol):
    """A family of operators indexed by the level N."""

    name: str

    def apply(self, f: GridFunction, N: int) -> GridFunction:
        """Apply the level-N member to f.

        Args:
            f: grid function
            N: level

        Returns:
            Grid function on the same grid
        """
        ...

    def multiplier(self, f: GridFunction, N: int) -> Optional[MultiplierSeq]:
        """The multiplier sequence used at level N, if the operator has one."""
        ...


@dataclass
class ExpectationOperator:
    name: str = "E"

    def apply(self, f: GridFunction, N: int) -> GridFunction:
        return conditional_expectation(f, N)

    def multiplier(self, f: GridFunction, N: int) -> Optional[MultiplierSeq]:
        return None


@dataclass
class HaarMultiplierOperator:
    """T_N[f, a] with a drawn from a family; every |a_mu| <= 1."""

    family: str
    seed: int = 0
    stream: str = ""
    name: str = "T"

    def multiplier(self, f: GridFunction, N: int) -> MultiplierSeq:
        mus = f.grid.interval_range(N)
        if self.family == "ones":
            entries = np.ones(len(mus))
        elif self.family == "random_signs":
            entries = XorShift64Star.for_stream(self.seed, "a", self.stream, N).signs(len(mus))
        elif self.family == "single_spike":
            entries = np.zeros(len(mus))
            entries[len(mus) // 2] = 1.0
        else:
            raise ConfigError(f"Unknown Haar multiplier family: {self.family}")
        return MultiplierSeq(entries, start=mus.start)

    def apply(self, f: GridFunction, N: int) -> GridFunction:
        return haar_multiplier(f, N, self.multiplier(f, N))


@dataclass
class LevelwiseOperator:
    """E_0 f + sum over n < N of b_n D_n f, with b drawn from a family.

    Random signs are drawn once per stream for all levels of the grid, so the
    operators for different N share a prefix of the same sequence.
    """

    family: str
    seed: int = 0
    stream: str = ""
    name: str = "S"

    def multiplier(self, f: GridFunction, N: int) -> MultiplierSeq:
        levels = np.arange(N, dtype=float)
        if self.family == "ones":
            entries = np.ones(N)
        elif self.family == "alternating":
            entries = np.where(levels % 2 == 0, 1.0, -1.0)
        elif self.family == "bv_bounded":
            # Monotone ramp from 0 to 1: sup norm 1, variation 1.
            entries = levels / max(N - 1, 1)
        elif self.family == "random_signs":
            entries = XorShift64Star.for_stream(self.seed, "b", self.stream).signs(f.grid.J)[:N]
        else:
            raise ConfigError(f"Unknown level multiplier family: {self.family}")
        return MultiplierSeq(entries, start=0)

    def apply(self, f: GridFunction, N: int) -> GridFunction:
        return levelwise_multiplier(f, self.multiplier(f, N), range(N), base=1.0)


def get_operator(name: str, family: str = "ones", seed: int = 0, stream: str = "") -> GridOperator:
    """Factory: return the operator family used by a sweep.

    Args:
        name: "E" (conditional expectation), "T" (Haar multiplier) or "S" (levelwise multiplier)
        family: multiplier family for "T" and "S"
        seed: run seed for random multipliers
        stream: label separating independent random multipliers

    Returns:
        GridOperator instance

    Raises:
        ConfigError: if the operator name is not recognized
    """
    if name == "E":
        return ExpectationOperator()
    elif name == "T":
        return HaarMultiplierOperator(family=family, seed=seed, stream=stream)
    elif name == "S":
        return LevelwiseOperator(family=family, seed=seed, stream=stream)
    else:
        raise ConfigError(f"Unknown operator: {name}")
