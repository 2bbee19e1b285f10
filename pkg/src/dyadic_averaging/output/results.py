"""Ratio rows, reports and their CSV form."""

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from ..norms.quasinorms import SmoothnessIndex

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "experiment", "family", "p", "q", "s", "r", "N",
    "num", "den", "ratio", "in_theorem", "in_uncond", "bdist",
)


def _family_key(label: str) -> tuple:
    """Sort "name#3~b12" after "name#2~b7" numerically rather than lexically."""
    parts = []
    for chunk in label.replace("~", "#").split("#"):
        digits = chunk.lstrip("b")
        parts.append((0, int(digits), "") if digits.isdigit() else (1, 0, chunk))
    return tuple(parts)


def family_name(label: str) -> str:
    """Corpus family of a row label ("jump#3" -> "jump")."""
    return label.split("#", 1)[0]


@dataclass
class RatioRow:
    """One operator-norm ratio measurement."""

    experiment: str
    family: str
    p: float
    q: float
    s: float
    r: float
    N: int
    num: float
    den: float
    ratio: float
    in_theorem: bool
    in_uncond: bool
    bdist: float
    extra: dict = field(default_factory=dict)

    @property
    def index(self) -> SmoothnessIndex:
        return SmoothnessIndex(p=self.p, q=self.q, s=self.s, r=self.r)

    @property
    def index_key(self) -> tuple[float, float, float, float]:
        return self.p, self.q, self.s, self.r

    def sort_key(self) -> tuple:
        return (self.experiment, self.index_key, _family_key(self.family), self.N)

    def as_csv_row(self) -> list[str]:
        return [
            self.experiment,
            self.family,
            repr(float(self.p)),
            repr(float(self.q)),
            repr(float(self.s)),
            repr(float(self.r)),
            str(self.N),
            repr(float(self.num)),
            repr(float(self.den)),
            repr(float(self.ratio)),
            "true" if self.in_theorem else "false",
            "true" if self.in_uncond else "false",
            repr(float(self.bdist)),
        ]

    @classmethod
    def from_csv_row(cls, row: dict) -> "RatioRow":
        return cls(
            experiment=row["experiment"],
            family=row["family"],
            p=float(row["p"]),
            q=float(row["q"]),
            s=float(row["s"]),
            r=float(row["r"]),
            N=int(row["N"]),
            num=float(row["num"]),
            den=float(row["den"]),
            ratio=float(row["ratio"]),
            in_theorem=row["in_theorem"] == "true",
            in_uncond=row["in_uncond"] == "true",
            bdist=float(row["bdist"]),
        )


def index_label(key: tuple[float, float, float, float]) -> str:
    p, q, s, r = key
    return f"p={p:g},q={q:g},s={s:g},r={r:g}"


@dataclass
class RatioReport:
    """Rows of one sweep plus the number of rows skipped for a zero denominator."""

    experiment: str
    rows: list[RatioRow] = field(default_factory=list)
    skipped: int = 0

    def sorted(self) -> "RatioReport":
        return RatioReport(self.experiment, sorted(self.rows, key=RatioRow.sort_key), self.skipped)

    def extend(self, rows: Iterable[RatioRow], skipped: int = 0):
        self.rows.extend(rows)
        self.skipped += skipped

    def select(self, experiment: Optional[str] = None, **fields) -> list[RatioRow]:
        """Rows matching an experiment id and exact field values."""
        selected = []
        for row in self.rows:
            if experiment is not None and row.experiment != experiment:
                continue
            if all(getattr(row, name) == value for name, value in fields.items()):
                selected.append(row)
        return selected

    def c_obs(self) -> dict[tuple[str, tuple], float]:
        """Corpus maximum ratio per (experiment, index): a lower bound for the operator constant."""
        best: dict[tuple[str, tuple], float] = defaultdict(float)
        for row in self.rows:
            key = (row.experiment, row.index_key)
            best[key] = max(best[key], row.ratio)
        return dict(best)


def write_csv(report: RatioReport, path: Path) -> Path:
    """Write rows in canonical order with the fixed header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in report.sorted().rows:
            writer.writerow(row.as_csv_row())
    logger.info(f"Wrote {len(report.rows)} rows to {path}")
    return path


def read_csv(path: Path) -> RatioReport:
    """Read a sweep CSV; the report takes the file stem as its sweep name."""
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path} does not have the ratio CSV header")
        rows = [RatioRow.from_csv_row(row) for row in reader]
    return RatioReport(experiment=path.stem, rows=rows)
