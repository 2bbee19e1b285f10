"""Pydantic schema for summary.json."""

import json
import math
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from .results import RatioReport, index_label


class SweepSummary(BaseModel):
    experiment: str
    rows: int
    skipped: int = 0
    c_obs: dict[str, float] = Field(
        default_factory=dict, description="Corpus maximum ratio per experiment and index (a lower bound)"
    )
    slopes: dict[str, float] = Field(default_factory=dict, description="Fitted log2 growth per profile")


class CheckSummary(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class RunSummary(BaseModel):
    version: str
    seed: int
    experiments: list[str]
    sweeps: list[SweepSummary] = Field(default_factory=list)
    checks: list[CheckSummary] = Field(default_factory=list)
    failures: list[str] = Field(default_factory=list, description="Steps that raised")
    passed: bool = False


def sweep_summary(report: RatioReport, slopes: Optional[dict[str, float]] = None) -> SweepSummary:
    c_obs = {
        f"{experiment}|{index_label(index_key)}": value
        for (experiment, index_key), value in sorted(report.c_obs().items())
    }
    return SweepSummary(
        experiment=report.experiment,
        rows=len(report.rows),
        skipped=report.skipped,
        c_obs=c_obs,
        slopes={key: value for key, value in sorted((slopes or {}).items()) if math.isfinite(value)},
    )


def write_summary(summary: RunSummary, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(summary.model_dump(mode="json"), indent=2, sort_keys=True) + "\n")
    return path


def read_summary(path: Path) -> RunSummary:
    return RunSummary.model_validate_json(Path(path).read_text())
