"""Tests for grid function files."""

import json

import numpy as np
import pytest

from dyadic_averaging.grid.functions import DyadicGrid, GridFunction
from dyadic_averaging.grid.io import header_path, load_grid_function, save_grid_function


def test_save_and_load(tmp_path, rng):
    grid = DyadicGrid(J=6, x0=0.5, x1=1.0)
    f = GridFunction(grid, rng.standard_normal(grid.n_cells) / 3.0)
    path = save_grid_function(f, tmp_path / "f.csv")

    assert json.loads(header_path(path).read_text()) == {"J": 6, "x0": 0.5, "x1": 1.0}
    assert path.read_text().splitlines()[0] == "cell_index,value"

    loaded = load_grid_function(path)
    assert loaded.grid == grid
    np.testing.assert_array_equal(loaded.values, f.values)


def test_row_count_checked(tmp_path, grid10):
    path = save_grid_function(grid10.zeros(), tmp_path / "zeros.csv")
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError):
        load_grid_function(path)
