"""Configuration loading and validation for dyadic-averaging."""

import json
import math
import sys
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, field_validator, model_validator

from .errors import ConfigError
from .norms.quasinorms import SmoothnessIndex

CONFIG_FILE = Path("dyadic_averaging.json")

EXPERIMENTS = ("en", "pn", "enpn", "enb", "tn", "mult", "boundary")
FAMILIES = ("single_wavelet", "single_haar", "smooth_bump", "jump", "random_multilevel", "random_signs_flat")
A_FAMILIES = ("ones", "random_signs", "single_spike")
B_FAMILIES = ("ones", "random_signs", "bv_bounded", "alternating")

_INFINITY_NAMES = {"inf", "infinity", "+inf", "∞"}


def _parse_exponent(value):
    if isinstance(value, str) and value.strip().lower() in _INFINITY_NAMES:
        return math.inf
    return value


def _dump_exponent(value: Optional[float]):
    if value is not None and math.isinf(value):
        return "inf"
    return value


class IndexConfig(BaseModel):
    """One smoothness index; exponents accept "inf"."""

    model_config = ConfigDict(extra="forbid")

    p: float
    q: float
    s: float
    r: Optional[float] = None

    @field_validator("p", "q", "r", mode="before")
    @classmethod
    def parse_infinity(cls, value):
        return _parse_exponent(value)

    @field_serializer("p", "q", "r")
    def serialize_exponent(self, value):
        return _dump_exponent(value)

    def to_index(self) -> SmoothnessIndex:
        return SmoothnessIndex(p=self.p, q=self.q, s=self.s, r=self.r)


class FamilyConfig(BaseModel):
    """A corpus family and how many instances to draw from it.

    Parameters a family does not use are ignored. Unset translate/position
    parameters are drawn per instance from the seeded stream.
    """

    model_config = ConfigDict(extra="forbid")

    name: str
    count: int = Field(default=8, ge=1)
    j: int = 5
    nu: Optional[int] = None
    N: int = 5
    mu: Optional[int] = None
    sigma: float = 2.0
    p: float = 1.0
    s: float = 0.5
    j_lo: Optional[int] = None

    @field_validator("p", mode="before")
    @classmethod
    def parse_infinity(cls, value):
        return _parse_exponent(value)

    @field_serializer("p")
    def serialize_exponent(self, value):
        return _dump_exponent(value)


class ThresholdConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    flat_slope: float = 0.1
    growth_slope: float = 0.15
    spearman: float = 0.8
    telescoping: float = 1e-10
    fit_n_min: int = 4


class BoundaryConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    pairs: list[tuple[float, float]] = Field(default_factory=lambda: [(1.0, 2.0), (2.0, 2.0)])
    distances: list[float] = Field(default_factory=lambda: [0.3, 0.1, 0.03, -0.03, -0.1, -0.3])
    families: list[str] = Field(default_factory=lambda: ["smooth_bump", "jump"])


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    results_dir: str = "./results"


def _default_indices() -> list[IndexConfig]:
    return [
        IndexConfig(p=1.0, q=2.0, s=0.5, r=2.0),
        IndexConfig(p=2.0, q=2.0, s=0.25, r=2.0),
        IndexConfig(p=0.75, q=2.0, s=0.6, r=1.0),
        IndexConfig(p=1.5, q=1.0, s=0.3, r=math.inf),
        IndexConfig(p=4.0, q=2.0, s=-0.5, r=2.0),
    ]


def _default_families() -> list[FamilyConfig]:
    return [
        FamilyConfig(name="single_wavelet", j=5),
        FamilyConfig(name="single_haar", N=5),
        FamilyConfig(name="smooth_bump"),
        FamilyConfig(name="jump"),
        FamilyConfig(name="random_multilevel", sigma=2.0, p=1.0, s=0.5),
        FamilyConfig(name="random_signs_flat", p=1.0, s=0.5),
    ]


class ExperimentConfig(BaseModel):
    """Everything a run depends on; the defaults are the shipped study."""

    model_config = ConfigDict(extra="forbid")

    order: int = 4
    J: int = 14
    j_max: int = 10
    margin: int = 4
    x0: float = 0.0
    x1: float = 1.0
    n_values: list[int] = Field(default_factory=lambda: list(range(1, 10)))
    seed: int = Field(default=20240601, ge=0, le=2**64 - 1)
    jobs: int = Field(default=1, ge=1)

    indices: list[IndexConfig] = Field(default_factory=_default_indices)
    probe_indices: list[IndexConfig] = Field(
        default_factory=lambda: [
            IndexConfig(p=1.0, q=2.0, s=1.3, r=2.0),
            IndexConfig(p=2.0, q=2.0, s=0.8, r=2.0),
        ]
    )
    probe_families: list[str] = Field(default_factory=lambda: ["smooth_bump"])
    mult_indices: list[IndexConfig] = Field(
        default_factory=lambda: [IndexConfig(p=1.0, q=4.0, s=0.9, r=4.0)]
    )

    families: list[FamilyConfig] = Field(default_factory=_default_families)
    experiments: list[str] = Field(default_factory=lambda: list(EXPERIMENTS))
    tn_families: list[str] = Field(default_factory=lambda: list(A_FAMILIES))
    mult_families: list[str] = Field(default_factory=lambda: list(B_FAMILIES))
    mult_scales: list[str] = Field(default_factory=lambda: ["F", "B"])
    multiplier_seeds: int = Field(default=32, ge=1)
    multiplier_families: list[str] = Field(default_factory=lambda: ["random_multilevel"])

    boundary: BoundaryConfig = Field(default_factory=BoundaryConfig)
    thresholds: ThresholdConfig = Field(default_factory=ThresholdConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if not 1 <= self.order <= 10:
            raise ValueError(f"order must be in 1..10, got {self.order}")
        if not 0 <= self.J <= 24:
            raise ValueError(f"J must be in 0..24, got {self.J}")
        if self.margin < 0 or not 0 <= self.j_max <= self.J - self.margin:
            raise ValueError(f"j_max={self.j_max} must satisfy 0 <= j_max <= J - margin = {self.J - self.margin}")
        for x in (self.x0, self.x1):
            if not (x * 2.0**self.J).is_integer():
                raise ValueError(f"Domain endpoint {x} is not on the 2^-{self.J} lattice")
        if not self.x0 < self.x1:
            raise ValueError(f"Empty domain [{self.x0}, {self.x1})")
        for N in self.n_values:
            if N < 0 or N + 1 > self.J or N > self.j_max:
                raise ValueError(f"N={N} needs 0 <= N, N + 1 <= J and N <= j_max")
        if len(self.n_values) != len(set(self.n_values)):
            raise ValueError("n_values contains duplicates")
        _check_names("experiments", self.experiments, EXPERIMENTS)
        _check_names("families", [f.name for f in self.families], FAMILIES)
        _check_names("tn_families", self.tn_families, A_FAMILIES)
        _check_names("mult_families", self.mult_families, B_FAMILIES)
        _check_names("mult_scales", self.mult_scales, ("F", "B"))
        _check_names("probe_families", self.probe_families, FAMILIES)
        _check_names("boundary.families", self.boundary.families, FAMILIES)
        _check_names("multiplier_families", self.multiplier_families, FAMILIES)
        for index in [*self.indices, *self.probe_indices, *self.mult_indices]:
            index.to_index()
        return self

    def smoothness_indices(self) -> list[SmoothnessIndex]:
        return [index.to_index() for index in self.indices]

    def with_overrides(
        self,
        seed: Optional[int] = None,
        results_dir: Optional[str] = None,
        jobs: Optional[int] = None,
    ) -> "ExperimentConfig":
        """Copy with CLI overrides applied (None leaves a field unchanged)."""
        data = self.model_dump(mode="json")
        if seed is not None:
            data["seed"] = seed
        if results_dir is not None:
            data["output"]["results_dir"] = results_dir
        if jobs is not None:
            data["jobs"] = jobs
        return _validate(data, "overrides")


def _check_names(field: str, names: list[str], allowed: tuple[str, ...]):
    unknown = [name for name in names if name not in allowed]
    if unknown:
        raise ValueError(f"Unknown {field}: {', '.join(unknown)} (allowed: {', '.join(allowed)})")


def _validate(data: dict, source: str) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration in {source}:\n{e}") from e


def _load_toml(path: Path) -> dict:
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        try:
            import tomli as tomllib
        except ImportError as e:
            raise ConfigError(f"Reading {path} needs tomli on Python < 3.11") from e
    with open(path, "rb") as f:
        return tomllib.load(f)


def load_config(path: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """Load a JSON or TOML config, falling back to defaults.

    Args:
        path: config file; None uses ./dyadic_averaging.json when present

    Raises:
        ConfigError: unreadable file, unknown keys or failed validation
    """
    if path is None:
        if not CONFIG_FILE.exists():
            return ExperimentConfig()
        path = CONFIG_FILE

    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    if path.suffix == ".toml":
        data = _load_toml(path)
    else:
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}") from e

    return _validate(data, str(path))


def create_default_config(path: Optional[Union[str, Path]] = None) -> Path:
    """Write the default configuration as JSON and return its path."""
    path = Path(path) if path is not None else CONFIG_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(ExperimentConfig().model_dump(mode="json"), indent=2) + "\n")
    return path
