"""Tests for coefficient fields, analysis and synthesis."""

import numpy as np
import pytest

from dyadic_averaging.analysis.coefficients import (
    CoefficientField,
    interior_translates,
    level_exponent,
    load_coefficients,
    save_coefficients,
    support_start,
    translate_range,
)
from dyadic_averaging.analysis.transform import (
    analyze,
    level_profile,
    partial_sum,
    quadrature_error,
    quadrature_tolerance,
    synthesize,
    wavelet_at,
)
from dyadic_averaging.errors import DomainRangeError, ResolutionError
from dyadic_averaging.grid.functions import DyadicGrid, GridFunction
from dyadic_averaging.grid.operators import conditional_expectation, martingale_difference


class TestTranslates:
    def test_level_exponent(self):
        assert level_exponent(0, 10) == 10
        assert level_exponent(1, 10) == 10
        assert level_exponent(4, 10) == 7

    def test_support_start(self):
        assert support_start(0, 4) == 0
        assert support_start(3, 4) == -3
        assert support_start(3, 1) == 0

    def test_haar_translates_tile_the_domain(self, grid10):
        for j in range(1, 6):
            assert translate_range(j, 1, grid10) == range(0, 2 ** (j - 1))
            assert interior_translates(j, 1, grid10) == range(0, 2 ** (j - 1))

    def test_db4_interior(self, grid10):
        assert interior_translates(4, 4, grid10) == range(3, 5)
        assert len(interior_translates(3, 4, grid10)) == 0
        assert len(interior_translates(0, 4, grid10)) == 0

    def test_interior_within_meeting(self, grid10):
        for j in range(7):
            meeting = translate_range(j, 4, grid10)
            interior = interior_translates(j, 4, grid10)
            assert all(nu in meeting for nu in interior)

    def test_level_profile_needs_depth(self, db4_sw):
        with pytest.raises(ResolutionError):
            level_profile(0, db4_sw, 11)


class TestCoefficientField:
    def test_single(self):
        c = CoefficientField.single(4, 3, 5, value=2.0, j_max=6)
        assert c.j_max == 6
        assert c.get(3, 5) == 2.0
        assert c.get(3, 4) == 0.0
        assert c.get(9, 5) == 0.0
        assert list(c.items()) == [(3, 5, 2.0)]
        assert c.nonzero_levels() == [3]
        assert c.max_abs() == 2.0

    def test_single_level_range(self):
        with pytest.raises(ValueError):
            CoefficientField.single(4, 5, 0, j_max=3)

    def test_arithmetic_merges_ranges(self):
        a = CoefficientField.single(2, 2, 1, j_max=3)
        b = CoefficientField.single(2, 2, 6, value=3.0, j_max=4)
        total = a + b
        assert total.j_max == 4
        assert total.translates(2) == range(1, 7)
        assert total.get(2, 1) == 1.0 and total.get(2, 6) == 3.0
        assert (total - b).get(2, 6) == 0.0
        assert (2 * total).get(2, 6) == 6.0

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            CoefficientField.single(2, 1, 0) + CoefficientField.single(4, 1, 0)

    def test_truncated(self):
        c = CoefficientField.single(4, 1, 0, j_max=5) + CoefficientField.single(4, 4, 0, j_max=5)
        assert c.truncated(3).j_max == 3
        assert c.truncated(3).nonzero_levels() == [1]
        assert c.truncated(7) is c
        with pytest.raises(ValueError):
            c.truncated(-1)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            CoefficientField(order=2, offsets=(0,), levels=(np.array([np.inf]),))

    def test_save_and_load(self, tmp_path):
        c = CoefficientField.from_levels(4, {2: (-3, np.array([0.0, 1.5, -0.25])), 5: (7, np.array([1e-17]))}, 6)
        loaded = load_coefficients(save_coefficients(c, tmp_path / "c.json"))
        assert loaded.j_max == c.j_max
        for j in range(7):
            assert loaded.translates(j) == c.translates(j)
            np.testing.assert_array_equal(loaded.levels[j], c.levels[j])


class TestHaarAnalysis:
    @pytest.mark.parametrize("j, nu", [(0, 0), (1, 0), (3, 2), (6, 17)])
    def test_normalization(self, haar_sw, grid10, j, nu):
        c = analyze(wavelet_at(j, nu, haar_sw, grid10), haar_sw, 6)
        assert c.get(j, nu) == pytest.approx(1.0, abs=1e-12)
        for jj, mu, value in c.items():
            if (jj, mu) != (j, nu):
                assert abs(value) < 1e-12

    def test_martingale_difference_lives_on_one_level(self, haar_sw, grid10, rng):
        f = GridFunction(grid10, rng.standard_normal(grid10.n_cells))
        c = analyze(martingale_difference(f, 3), haar_sw, 6)
        for j in range(7):
            if j != 4:
                assert np.max(np.abs(c.levels[j]), initial=0.0) < 1e-12
        assert np.max(np.abs(c.levels[4])) > 0.0

    def test_reconstruction(self, haar_sw, grid10, rng):
        # Haar level j carries D_{j-1}, so synthesis up to j_max reproduces E_{j_max}.
        f = GridFunction(grid10, rng.standard_normal(grid10.n_cells))
        rebuilt = synthesize(analyze(f, haar_sw, 6), haar_sw, grid10)
        np.testing.assert_allclose(rebuilt.values, conditional_expectation(f, 6).values, atol=1e-12)


class TestDaubechiesAnalysis:
    @pytest.mark.parametrize("j, nu", [(4, 3), (5, 7), (6, 10)])
    def test_normalization_within_quadrature_budget(self, db4_sw, grid10, j, nu):
        gap = grid10.J - j
        lam = analyze(wavelet_at(j, nu, db4_sw, grid10), db4_sw, 6).get(j, nu)
        assert abs(lam - 1.0) <= quadrature_error(4, gap) + 1e-12
        assert abs(lam - 1.0) <= quadrature_tolerance(4, gap)

    def test_budget_catches_normalization_slip(self, db4_sw, grid10):
        j, nu = 6, 10
        lam = analyze(wavelet_at(j, nu, db4_sw, grid10), db4_sw, 6).get(j, nu)
        for slip in (0.97, 1.03):
            assert abs(slip * lam - 1.0) > quadrature_tolerance(4, grid10.J - j)

    @pytest.mark.parametrize("order", [2, 4])
    def test_orthogonality(self, db2_sw, db4_sw, grid10, order):
        sw = {2: db2_sw, 4: db4_sw}[order]
        j = 6
        budget = quadrature_tolerance(order, grid10.J - j)
        fine = {nu: wavelet_at(j, nu, sw, grid10) for nu in interior_translates(j, order, grid10)}
        coarse = {mu: wavelet_at(j - 1, mu, sw, grid10) for mu in interior_translates(j - 1, order, grid10)}
        for nu, psi in fine.items():
            for mu, other in fine.items():
                assert abs(2**j * psi.inner(other) - float(nu == mu)) <= budget
            for other in coarse.values():
                assert abs(2**j * psi.inner(other)) <= budget

    def test_synthesis_is_linear(self, db4_sw, grid10, rng):
        def random_coefficients():
            blocks = {}
            for j in range(7):
                nus = translate_range(j, 4, grid10)
                blocks[j] = (nus.start, rng.standard_normal(len(nus)))
            return CoefficientField.from_levels(4, blocks, 6)

        a, b = random_coefficients(), random_coefficients()
        alpha, beta = (float(x) for x in rng.uniform(-3.0, 3.0, size=2))
        lhs = synthesize(alpha * a + beta * b, db4_sw, grid10)
        rhs = alpha * synthesize(a, db4_sw, grid10) + beta * synthesize(b, db4_sw, grid10)
        np.testing.assert_allclose(lhs.values, rhs.values, rtol=1e-12, atol=1e-10)

    def test_partial_sum_is_idempotent(self, db4_sw, grid10, rng):
        spans = {j: translate_range(j, 4, grid10) for j in range(7)}
        c = CoefficientField.from_levels(4, {j: (nus.start, rng.standard_normal(len(nus))) for j, nus in spans.items()}, 6)
        for N in range(8):
            once = c.truncated(N)
            twice = once.truncated(N)
            assert twice.j_max == once.j_max
            for j in range(once.j_max + 1):
                np.testing.assert_array_equal(twice.levels[j], once.levels[j])
            np.testing.assert_array_equal(
                partial_sum(once, N, db4_sw, grid10).values,
                partial_sum(c, N, db4_sw, grid10).values,
            )

    def test_synthesis_of_single_coefficient(self, db4_sw, grid10):
        c = CoefficientField.single(4, 5, 6, j_max=6)
        np.testing.assert_array_equal(
            synthesize(c, db4_sw, grid10).values,
            wavelet_at(5, 6, db4_sw, grid10).values,
        )

    def test_linearity(self, db4_sw, grid10, rng):
        f = GridFunction(grid10, rng.standard_normal(grid10.n_cells))
        g = GridFunction(grid10, rng.standard_normal(grid10.n_cells))
        lhs = analyze(f + 2.0 * g, db4_sw, 6)
        rhs = analyze(f, db4_sw, 6) + 2.0 * analyze(g, db4_sw, 6)
        for j in range(7):
            np.testing.assert_allclose(lhs.levels[j], rhs.levels[j], atol=1e-12)

    def test_coefficients_cover_meeting_translates(self, db4_sw, grid10):
        c = analyze(grid10.zeros(), db4_sw, 6)
        for j in range(7):
            assert c.translates(j) == translate_range(j, 4, grid10)

    def test_partial_sum(self, db4_sw, grid10):
        c = CoefficientField.single(4, 2, 0, j_max=6) + CoefficientField.single(4, 5, 6, j_max=6)
        np.testing.assert_array_equal(
            partial_sum(c, 3, db4_sw, grid10).values,
            synthesize(CoefficientField.single(4, 2, 0, j_max=6), db4_sw, grid10).values,
        )
        np.testing.assert_array_equal(
            partial_sum(c, 9, db4_sw, grid10).values,
            synthesize(c, db4_sw, grid10).values,
        )
        with pytest.raises(ValueError):
            partial_sum(c, -1, db4_sw, grid10)

    def test_margin_enforced(self, db4_sw, grid10):
        with pytest.raises(ResolutionError):
            analyze(grid10.zeros(), db4_sw, 7)

    def test_depth_enforced(self, db4_sw):
        grid = DyadicGrid(J=12)
        with pytest.raises(ResolutionError):
            analyze(grid.zeros(), db4_sw, 6)

    def test_order_mismatch(self, db4_sw, grid10):
        with pytest.raises(ValueError):
            synthesize(CoefficientField.single(2, 3, 0, j_max=6), db4_sw, grid10)

    def test_wavelet_outside_domain(self, db4_sw, grid10):
        with pytest.raises(DomainRangeError):
            wavelet_at(3, 100, db4_sw, grid10)


def test_quadrature_tolerance():
    assert quadrature_tolerance(1, 4) == 1e-12
    for order in (2, 4):
        for gap in (4, 6):
            error = quadrature_error(order, gap)
            assert 0.0 <= error < 0.1
            assert quadrature_tolerance(order, gap) == pytest.approx(2.0 * error + 1e-12)
    with pytest.raises(ValueError):
        quadrature_error(4, -1)
