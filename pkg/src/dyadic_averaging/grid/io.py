"""Grid function files: a ``cell_index,value`` CSV next to a JSON header.

Values are written with ``repr`` (shortest round-tripping decimal), so a
save/load cycle reproduces every float bit for bit.
"""

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .functions import DyadicGrid, GridFunction

logger = logging.getLogger(__name__)


def header_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".json")


def save_grid_function(f: GridFunction, csv_path: Path) -> Path:
    """Write values to csv_path and the grid header to the matching .json file.

    Returns:
        Path of the CSV file
    """
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell_index", "value"])
        for index, value in enumerate(f.values.tolist()):
            writer.writerow([index, repr(value)])
    header_path(csv_path).write_text(json.dumps(f.grid.as_dict(), indent=2) + "\n")
    logger.debug(f"Saved {f.grid.n_cells} cells to {csv_path}")
    return csv_path


def load_grid_function(csv_path: Path) -> GridFunction:
    """Read a grid function written by save_grid_function."""
    csv_path = Path(csv_path)
    header = json.loads(header_path(csv_path).read_text())
    grid = DyadicGrid(J=int(header["J"]), x0=float(header["x0"]), x1=float(header["x1"]))

    values = np.zeros(grid.n_cells)
    seen = 0
    with open(csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            values[int(row["cell_index"])] = float(row["value"])
            seen += 1
    if seen != grid.n_cells:
        raise ValueError(f"{csv_path} has {seen} rows, header expects {grid.n_cells}")
    return GridFunction(grid, values)
