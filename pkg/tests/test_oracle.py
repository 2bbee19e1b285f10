"""Fast kernels against the brute-force references."""

import math

import numpy as np
import pytest

from dyadic_averaging.analysis.coefficients import CoefficientField
from dyadic_averaging.analysis.transform import analyze
from dyadic_averaging.errors import SizeGuardError, UnsupportedIndexError
from dyadic_averaging.grid.functions import DyadicGrid, GridFunction
from dyadic_averaging.grid.operators import conditional_expectation
from dyadic_averaging.norms.quasinorms import SmoothnessIndex, b_quasinorm, f_quasinorm
from dyadic_averaging.oracle.dense import brute_norm, dense_expectation_matrix, naive_inner_products
from dyadic_averaging.wavelets.cascade import cascade_sample
from dyadic_averaging.wavelets.filters import daubechies_filter

INDICES = [
    SmoothnessIndex(1.0, 2.0, 0.5),
    SmoothnessIndex(0.5, 1.0, -0.3),
    SmoothnessIndex(2.0, math.inf, 0.25),
    SmoothnessIndex(0.75, 0.5, 1.2),
    SmoothnessIndex(3.0, 2.0, -0.5),
]


def random_field(rng, order: int, j_max: int) -> CoefficientField:
    blocks = {}
    for j in range(j_max + 1):
        size = int(rng.integers(1, 2**j + 4))
        values = rng.standard_normal(size)
        values[rng.random(size) < 0.3] = 0.0
        blocks[j] = (int(rng.integers(-3, 3)), values)
    return CoefficientField.from_levels(order, blocks, j_max)


def relative_gap(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


@pytest.mark.parametrize("seed", range(20))
def test_expectation_matches_dense_matrix(seed):
    rng = np.random.default_rng(seed)
    J = int(rng.integers(1, 11))
    grid = DyadicGrid(J=J)
    f = GridFunction(grid, rng.standard_normal(grid.n_cells))
    N = int(rng.integers(0, J + 1))
    dense = dense_expectation_matrix(grid, N) @ f.values
    np.testing.assert_allclose(conditional_expectation(f, N).values, dense, rtol=1e-10, atol=1e-12)


def test_dense_matrix_on_shifted_domain():
    grid = DyadicGrid(J=5, x0=0.5, x1=1.0)
    matrix = dense_expectation_matrix(grid, 2)
    assert matrix.shape == (16, 16)
    np.testing.assert_allclose(matrix.sum(axis=1), 1.0)


@pytest.mark.parametrize("order", [1, 2, 4])
@pytest.mark.parametrize("seed", range(5))
def test_analyze_matches_naive(order, seed):
    rng = np.random.default_rng(100 * order + seed)
    J = 9
    grid = DyadicGrid(J=J)
    sw = cascade_sample(daubechies_filter(order), J)
    f = GridFunction(grid, rng.standard_normal(grid.n_cells))

    fast = analyze(f, sw, 5)
    slow = naive_inner_products(f, sw, 5)
    scale = max(fast.max_abs(), 1.0)
    for j in range(6):
        assert fast.translates(j) == slow.translates(j)
        np.testing.assert_allclose(fast.levels[j], slow.levels[j], rtol=0, atol=1e-10 * scale)


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("idx", INDICES, ids=lambda idx: f"p{idx.p}-q{idx.q}-s{idx.s}")
def test_f_quasinorm_matches_brute(seed, idx):
    c = random_field(np.random.default_rng(seed), 4, 6)
    assert relative_gap(f_quasinorm(c, idx), brute_norm(c, idx, kind="F")) < 1e-10


@pytest.mark.parametrize("seed", range(20))
@pytest.mark.parametrize("idx", INDICES + [SmoothnessIndex(math.inf, 1.0, 0.3)], ids=lambda idx: f"p{idx.p}-q{idx.q}-s{idx.s}")
def test_b_quasinorm_matches_brute(seed, idx):
    c = random_field(np.random.default_rng(seed), 4, 6)
    assert relative_gap(b_quasinorm(c, idx), brute_norm(c, idx, kind="B")) < 1e-10
    assert relative_gap(
        b_quasinorm(c, idx, q=math.inf), brute_norm(c, idx, kind="B", q=math.inf)
    ) < 1e-10


def test_size_guards():
    grid = DyadicGrid(J=13)
    with pytest.raises(SizeGuardError):
        dense_expectation_matrix(grid, 2)
    sw = cascade_sample(daubechies_filter(1), 13)
    with pytest.raises(SizeGuardError):
        naive_inner_products(grid.zeros(), sw, 2)
    with pytest.raises(SizeGuardError):
        brute_norm(CoefficientField.single(4, 9, 0), SmoothnessIndex(1.0, 1.0, 0.0))


def test_brute_norm_arguments():
    c = CoefficientField.single(4, 2, 0)
    with pytest.raises(ValueError):
        brute_norm(c, SmoothnessIndex(1.0, 1.0, 0.0), kind="X")
    with pytest.raises(UnsupportedIndexError):
        brute_norm(c, SmoothnessIndex(math.inf, 1.0, 0.0), kind="F")
    assert brute_norm(CoefficientField.zeros(4, 3), SmoothnessIndex(1.0, 1.0, 0.0)) == 0.0
