"""Tests for the random streams, corpus, operators, fitting and sweeps."""

import math

import numpy as np
import pytest

from dyadic_averaging.config import FamilyConfig
from dyadic_averaging.errors import ConfigError, InsufficientDataError
from dyadic_averaging.experiments.checks import check_telescoping
from dyadic_averaging.experiments.corpus import make_corpus
from dyadic_averaging.experiments.fitting import fit_growth_exponent, fit_profile, max_profile
from dyadic_averaging.experiments.operators import (
    ExpectationOperator,
    HaarMultiplierOperator,
    LevelwiseOperator,
    get_operator,
)
from dyadic_averaging.experiments.rng import MASK64, MULTIPLIER, ZERO_STATE_REPLACEMENT, XorShift64Star, split_seed
from dyadic_averaging.experiments.sweeps import (
    SweepContext,
    boundary_indices,
    en_minus_pn_sweep,
    multiplier_sweep,
    run_sweep,
    tn_bound_sweep,
    uniform_bound_sweep,
)
from dyadic_averaging.grid.operators import conditional_expectation, martingale_difference, seq_norms
from dyadic_averaging.norms.quasinorms import SmoothnessIndex, b_quasinorm
from dyadic_averaging.norms.regions import region_theorem, region_unconditional
from dyadic_averaging.output.results import RatioRow, write_csv


@pytest.fixture(scope="module")
def context(small_config):
    return SweepContext.build(small_config)


class TestRng:
    def test_one_step(self):
        rng = XorShift64Star(1)
        value = rng.next_u64()
        assert rng.state == 0x2000001
        assert value == (0x2000001 * MULTIPLIER) & MASK64

    def test_zero_state(self):
        assert XorShift64Star(0).state == ZERO_STATE_REPLACEMENT
        assert XorShift64Star(1 << 64).state == ZERO_STATE_REPLACEMENT

    def test_deterministic_streams(self):
        a = XorShift64Star.for_stream(7, "jump", 0, 3)
        b = XorShift64Star.for_stream(7, "jump", 0, 3)
        assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]

    def test_split_seed(self):
        assert split_seed(7, "a", 1) == split_seed(7, "a", 1)
        assert split_seed(7, "a", 1) != split_seed(7, "a", 2)
        assert split_seed(7, "a", 1) != split_seed(8, "a", 1)
        assert 0 < split_seed(2**64 - 1, "x") <= MASK64

    def test_draws(self):
        rng = XorShift64Star.for_stream(1, "draws")
        values = [rng.random() for _ in range(1000)]
        assert min(values) >= 0.0 and max(values) < 1.0
        assert set(rng.signs(100).tolist()) <= {-1.0, 1.0}
        assert all(3 <= rng.integers(3, 9) < 9 for _ in range(100))
        with pytest.raises(ValueError):
            rng.integers(4, 4)


class TestCorpus:
    def test_labels_and_counts(self, context):
        labels = [item.label for item in context.corpus]
        assert labels[:3] == ["single_wavelet#0", "single_wavelet#1", "random_multilevel#0"]
        assert len(labels) == 8

    def test_synthesized_items_are_exact(self, context):
        for item in context.corpus:
            assert item.exact == (item.family in ("single_wavelet", "random_multilevel"))

    def test_single_wavelet(self, context):
        item = context.corpus[0]
        entries = list(item.coefficients.items())
        assert len(entries) == 1 and entries[0][0] == 5 and entries[0][2] == 1.0

    def test_random_multilevel_is_normalized(self, context):
        item = context.corpus[2]
        idx = SmoothnessIndex(p=1.0, q=math.inf, s=0.5)
        assert b_quasinorm(item.coefficients, idx) == pytest.approx(1.0, rel=1e-12)
        assert item.coefficients.nonzero_levels() == [4, 5, 6]

    def test_grid_items_are_bounded(self, context):
        for item in context.corpus[4:]:
            assert np.max(np.abs(item.function.values)) <= 1.0

    def test_deterministic(self, small_config, context):
        again = SweepContext.build(small_config)
        for a, b in zip(context.corpus, again.corpus):
            np.testing.assert_array_equal(a.function.values, b.function.values)

    def test_seed_changes_draws(self, context):
        families = [FamilyConfig(name="random_multilevel", count=1)]
        a = make_corpus(families, 1, context.wavelet, context.grid, 6)
        b = make_corpus(families, 2, context.wavelet, context.grid, 6)
        assert a[0].label == b[0].label == "random_multilevel#0"
        assert not np.array_equal(a[0].coefficients.levels[6], b[0].coefficients.levels[6])

    def test_appending_families_keeps_earlier_items(self, context):
        base = [FamilyConfig(name="smooth_bump", count=2)]
        extended = base + [FamilyConfig(name="jump", count=1)]
        a = make_corpus(base, 5, context.wavelet, context.grid, 6)
        b = make_corpus(extended, 5, context.wavelet, context.grid, 6)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.function.values, y.function.values)

    def test_unknown_family(self, context):
        with pytest.raises(ConfigError):
            make_corpus([FamilyConfig(name="sawtooth")], 0, context.wavelet, context.grid, 6)

    def test_level_without_interior_translate(self, context):
        with pytest.raises(ConfigError):
            make_corpus([FamilyConfig(name="single_wavelet", j=2)], 0, context.wavelet, context.grid, 6)


class TestOperators:
    def test_factory(self):
        assert isinstance(get_operator("E"), ExpectationOperator)
        assert isinstance(get_operator("T", family="ones"), HaarMultiplierOperator)
        assert isinstance(get_operator("S", family="ones"), LevelwiseOperator)
        with pytest.raises(ConfigError):
            get_operator("X")

    def test_expectation(self, integer_function):
        op = get_operator("E")
        np.testing.assert_array_equal(op.apply(integer_function, 3).values, conditional_expectation(integer_function, 3).values)
        assert op.multiplier(integer_function, 3) is None

    def test_haar_ones(self, integer_function):
        f = integer_function
        np.testing.assert_array_equal(get_operator("T", "ones").apply(f, 4).values, martingale_difference(f, 4).values)

    def test_unknown_haar_family(self, integer_function):
        with pytest.raises(ConfigError):
            get_operator("T", "zeros").apply(integer_function, 4)

    def test_haar_families_are_bounded(self, integer_function):
        for family in ("ones", "random_signs", "single_spike"):
            a = get_operator("T", family, seed=3, stream="x").multiplier(integer_function, 5)
            assert a.indices == range(0, 32)
            assert a.sup_norm <= 1.0
        with pytest.raises(ConfigError):
            get_operator("T", "bv_bounded").multiplier(integer_function, 2)

    def test_levelwise_ones_telescopes(self, integer_function):
        f = integer_function
        np.testing.assert_array_equal(get_operator("S", "ones").apply(f, 6).values, conditional_expectation(f, 6).values)

    def test_levelwise_families(self, integer_function):
        f = integer_function
        assert seq_norms(get_operator("S", "bv_bounded").multiplier(f, 8)) == (1.0, pytest.approx(1.0))
        alternating = get_operator("S", "alternating").multiplier(f, 4)
        np.testing.assert_array_equal(alternating.entries, [1.0, -1.0, 1.0, -1.0])
        with pytest.raises(ConfigError):
            get_operator("S", "single_spike").multiplier(f, 2)

    def test_random_signs_share_a_prefix(self, integer_function):
        op = get_operator("S", "random_signs", seed=11, stream="jump#0:1")
        short = op.multiplier(integer_function, 4).entries
        long = op.multiplier(integer_function, 9).entries
        np.testing.assert_array_equal(long[:4], short)


def _row(N: int, ratio: float) -> RatioRow:
    idx = SmoothnessIndex(1.0, 2.0, 0.5)
    return RatioRow("en", "jump#0", 1.0, 2.0, 0.5, 2.0, N, ratio, 1.0, ratio, region_theorem(idx), region_unconditional(idx), 0.5)


class TestFitting:
    def test_exact_line(self):
        ns = [1, 2, 3, 4, 5]
        slope, residual = fit_profile(ns, [2.0 ** (0.5 * n + 1) for n in ns])
        assert slope == pytest.approx(0.5)
        assert residual < 1e-12

    @pytest.mark.parametrize("slope", [-1.0, 0.0, 0.5])
    def test_recovers_slope_under_noise(self, rng, slope):
        ns = list(range(1, 10))
        noise = rng.uniform(0.99, 1.01, size=len(ns))
        fitted, residual = fit_profile(ns, [3.0 * 2.0 ** (slope * n) * e for n, e in zip(ns, noise)])
        assert fitted == pytest.approx(slope, abs=0.05)
        assert residual < 0.05

    def test_nonpositive_ratios_dropped(self):
        slope, _ = fit_profile([1, 2, 3, 4, 5], [0.0, 1.0, 1.0, 1.0, 1.0])
        assert slope == pytest.approx(0.0, abs=1e-12)
        with pytest.raises(InsufficientDataError):
            fit_profile([1, 2, 3, 4], [0.0, 1.0, 1.0, 1.0])

    def test_rows(self):
        rows = [_row(n, 2.0**-n) for n in (5, 1, 3, 2, 4)]
        slope, _ = fit_growth_exponent(rows)
        assert slope == pytest.approx(-1.0)

    def test_max_profile(self):
        rows = [_row(1, 0.5), _row(1, 2.0), _row(2, 1.0)]
        assert max_profile(rows) == ([1, 2], [2.0, 1.0])


class TestSweeps:
    def test_en_rows(self, small_config, context):
        report = uniform_bound_sweep(small_config, context)
        assert len(report.rows) + report.skipped == 8 * 2 * 6
        assert {row.experiment for row in report.rows} == {"en"}
        for row in report.rows:
            assert row.in_theorem == region_theorem(row.index)
            assert row.ratio == row.num / row.den
        assert [row.sort_key() for row in report.rows] == sorted(row.sort_key() for row in report.rows)

    def test_pn_keeps_coarse_levels(self, small_config, context):
        report = run_sweep("pn", small_config, context)
        for row in report.select("pn"):
            assert row.ratio <= 1.0 + 1e-12

    def test_enpn_includes_probes(self, small_config, context):
        report = en_minus_pn_sweep(small_config, context)
        assert len(report.rows) + report.skipped == 8 * 3 * 6
        assert any(row.s == 1.3 for row in report.rows)

    def test_tn_ones_matches_difference(self, small_config, context):
        report = tn_bound_sweep(small_config, a_family="ones", context=context)
        assert {row.experiment for row in report.rows} == {"tn-ones"}
        assert all(row.extra["dn_diff"] == 0.0 for row in report.rows)

    def test_multiplier_telescoping(self, small_config, context):
        en = uniform_bound_sweep(small_config, context)
        mult = multiplier_sweep(small_config, b_family="ones", scale="F", context=context)
        assert {row.experiment for row in mult.rows} == {"mult-ones-F"}
        assert check_telescoping(en, mult, small_config.thresholds).passed

    def test_multiplier_random_signs_labels(self, small_config, context):
        report = multiplier_sweep(small_config, b_family="random_signs", scale="F", context=context)
        labels = {row.family for row in report.rows}
        assert labels == {f"random_multilevel#{i}~b{k}" for i in range(2) for k in range(3)}
        assert all(row.extra["sup"] == 1.0 for row in report.rows)

    def test_multiplier_besov_scale_includes_every_index(self, small_config, context):
        report = multiplier_sweep(small_config, b_family="bv_bounded", scale="B", context=context)
        keys = {row.index_key for row in report.rows}
        assert (1.0, 4.0, 0.9, 4.0) in keys

    def test_boundary(self, small_config, context):
        indices = boundary_indices(small_config)
        assert SmoothnessIndex(1.0, 2.0, 0.3) in indices
        assert SmoothnessIndex(1.0, 2.0, 1.3) in indices
        report = run_sweep("boundary", small_config, context)
        assert {row.family.split("#")[0] for row in report.rows} == {"smooth_bump", "jump"}

    def test_unknown_experiment(self, small_config, context):
        with pytest.raises(ValueError):
            run_sweep("fourier", small_config, context)

    def test_byte_identical_csv(self, small_config, context, tmp_path):
        first = write_csv(run_sweep("enb", small_config, context), tmp_path / "a.csv")
        second = write_csv(run_sweep("enb", small_config, SweepContext.build(small_config)), tmp_path / "b.csv")
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.slow
    def test_process_pool_matches_serial(self, small_config, context, tmp_path):
        serial = write_csv(run_sweep("en", small_config, context), tmp_path / "serial.csv")
        pooled = write_csv(run_sweep("en", small_config, jobs=2), tmp_path / "pooled.csv")
        assert serial.read_bytes() == pooled.read_bytes()

