import dataclasses

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgbz import (
    DwtParams,
    PgbzParams,
    Signal,
    StftParams,
    apply_threshold,
    load_report_rows,
    mse_percent,
    nmse,
    nmse_product,
    save_report_csv,
    sine_glitch,
    sweep,
    threshold_schedule,
)


class TestThresholdSchedule:
    def test_four_values_two_levels(self):
        assert np.array_equal(threshold_schedule(np.array([1.0, 2.0, 3.0, 4.0]), 2), [2.0, 4.0])

    def test_all_equal_collapses(self):
        thresholds = threshold_schedule(np.full(100, 3.3), 7)
        assert np.array_equal(thresholds, [3.3])

    def test_equal_cardinality_subspaces(self):
        rng = np.random.default_rng(0)
        values = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
        thresholds = threshold_schedule(values, 100)
        unique = np.unique(np.abs(values))
        assert thresholds.size == 100
        counts = [np.sum((unique <= t)) for t in thresholds]
        sizes = np.diff([0] + counts)
        assert sizes.min() >= unique.size // 100
        assert sizes.max() <= unique.size // 100 + 1

    def test_monotone(self):
        rng = np.random.default_rng(1)
        thresholds = threshold_schedule(rng.standard_normal(500), 25)
        assert np.all(np.diff(thresholds) > 0)

    def test_rejections(self):
        with pytest.raises(ValueError):
            threshold_schedule(np.array([]), 3)
        with pytest.raises(ValueError):
            threshold_schedule(np.ones(5), 0)


class TestApplyThreshold:
    def test_zero_threshold_removes_only_exact_zeros(self):
        values = np.array([0.0, 0.5, -0.2, 0.0, 1.0])
        masked, nonzero = apply_threshold(values, 0.0)
        assert nonzero == 3
        assert np.array_equal(masked, values)

    def test_max_threshold_removes_all(self):
        values = np.array([0.5, -0.2, 1.0])
        masked, nonzero = apply_threshold(values, 1.0)
        assert nonzero == 0
        assert np.abs(masked).max() == 0.0

    def test_median_threshold_order_statistics(self):
        rng = np.random.default_rng(2)
        values = rng.standard_normal(1001)
        median = np.median(np.abs(values))
        _, nonzero = apply_threshold(values, median)
        assert nonzero == np.sum(np.abs(values) > median)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            apply_threshold(np.ones(3), -0.1)


class TestMsePercent:
    def test_identical(self):
        s = Signal(np.sin(np.arange(100.0)), 1.0)
        assert mse_percent(s, s) == 0.0

    def test_single_sample_perturbation(self):
        original = Signal(np.sin(np.arange(1000.0)), 1.0)
        eps = 3e-4
        perturbed = original.samples.copy()
        perturbed[123] += eps
        value_range = original.samples.max() - original.samples.min()
        expected = 100.0 * eps / (1000 * value_range)
        assert mse_percent(original, Signal(perturbed, 1.0)) == pytest.approx(expected, rel=1e-12)

    def test_matches_high_precision_oracle(self):
        rng = np.random.default_rng(3)
        a = rng.standard_normal(1000)
        b = rng.standard_normal(1000)
        with mp.workdps(50):
            diff_sq = mp.fsum((mp.mpf(x) - mp.mpf(y)) ** 2 for x, y in zip(a, b))
            value_range = mp.mpf(float(a.max())) - mp.mpf(float(a.min()))
            expected = float(100 * mp.sqrt(diff_sq) / (1000 * value_range))
        got = mse_percent(Signal(a, 1.0), Signal(b, 1.0))
        assert got == pytest.approx(expected, rel=1e-12)

    def test_rejects_constant_original(self):
        with pytest.raises(ValueError):
            mse_percent(Signal(np.ones(10), 1.0), Signal(np.zeros(10), 1.0))

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            mse_percent(Signal(np.arange(9.0), 1.0), Signal(np.arange(8.0), 1.0))


@pytest.fixture(scope="module")
def fixture_signal():
    return sine_glitch(8281, 8000.0, frequency=10 * 8000.0 / 91)  # 91 x 91 lattice


class TestSweep:
    def test_level_zero_exactness_and_counts(self, fixture_signal):
        trimmed = Signal(fixture_signal.samples[:8281], 8000.0)
        reports = {
            method: sweep(trimmed, method, params, n_levels=10)
            for method, params in [
                ("pgbz", PgbzParams()),
                ("dwt", DwtParams(levels=5)),
                ("stft", StftParams(window_len=256)),
            ]
        }
        for method, report in reports.items():
            first = report.levels[0]
            assert first.mse_percent < 1e-8, method
            assert first.removed_fraction <= 0.01
        assert reports["pgbz"].total_coefficients == 8281
        assert 7.5 <= reports["stft"].total_coefficients / 8281 <= 9.0

    def test_nonzero_strictly_decreasing(self, fixture_signal):
        report = sweep(fixture_signal, "pgbz", n_levels=12)
        counts = [record.nonzero for record in report.levels]
        assert all(a > b for a, b in zip(counts, counts[1:]))

    def test_removed_fraction_capped(self, fixture_signal):
        report = sweep(fixture_signal, "pgbz", n_levels=25)
        assert all(record.removed_fraction <= 0.96 for record in report.levels)
        assert report.levels[-1].removed_fraction > 0.9

    def test_reproducible_except_timing(self, fixture_signal):
        first = sweep(fixture_signal, "dwt", DwtParams(levels=5), n_levels=8)
        second = sweep(fixture_signal, "dwt", DwtParams(levels=5), n_levels=8)
        for a, b in zip(first.levels, second.levels):
            assert a.threshold == b.threshold
            assert a.nonzero == b.nonzero
            assert a.mse_percent == b.mse_percent

    def test_rejects_bad_inputs(self, fixture_signal):
        with pytest.raises(ValueError):
            sweep(fixture_signal, "mp3")
        with pytest.raises(ValueError):
            sweep(fixture_signal, "pgbz", max_removed=0.97)
        with pytest.raises(ValueError):
            sweep(fixture_signal, "pgbz", max_removed=0.0)

    def test_keep_reconstructions(self, fixture_signal):
        report = sweep(fixture_signal, "pgbz", n_levels=4, keep_reconstructions=True)
        assert report.reconstructions is not None
        assert len(report.reconstructions) == len(report.levels)
        assert report.reconstructions[0].shape == (8281,)


class TestNmse:
    def test_zero_error_gives_zero(self, fixture_signal):
        report = sweep(fixture_signal, "pgbz", n_levels=4)
        clean = dataclasses.replace(
            report,
            levels=(dataclasses.replace(report.levels[0], mse_percent=0.0),),
        )
        assert nmse(clean) == 0.0

    def test_product_linear_in_cpu(self):
        assert nmse_product(1.5, 5.0, 20.0) * 2 == nmse_product(1.5, 5.0, 40.0)

    @pytest.mark.parametrize(
        "mse,log_k,cpu,stated",
        [(0.65, 6.3, 232.0, 980.0), (2.06, 5.43, 52.0, 560.0), (0.98, 5.43, 64.0, 340.0)],
    )
    def test_reproduces_stated_products(self, mse, log_k, cpu, stated):
        assert nmse_product(mse, log_k, cpu) == pytest.approx(stated, rel=0.05)

    def test_uses_final_level(self, fixture_signal):
        report = sweep(fixture_signal, "pgbz", n_levels=6)
        last = report.levels[-1]
        expected = last.mse_percent * np.log10(last.nonzero) * last.cumulative_time_s
        assert nmse(report) == pytest.approx(expected)


class TestReportCsv:
    def test_round_trip(self, tmp_path, fixture_signal):
        report = sweep(fixture_signal, "dwt", DwtParams(levels=5), n_levels=6, source="fixture")
        path = tmp_path / "report.csv"
        save_report_csv(report, path)
        rows = load_report_rows(path)
        assert len(rows) == len(report.levels)
        for row, record in zip(rows, report.levels):
            assert row["method"] == "dwt"
            assert row["level"] == record.level
            assert row["nonzero"] == record.nonzero
            assert row["removed_frac"] == record.removed_fraction
            assert row["mse_percent"] == record.mse_percent
            assert row["wall_s"] == record.wall_time_s

    def test_merged_reports(self, tmp_path, fixture_signal):
        reports = [
            sweep(fixture_signal, "pgbz", n_levels=4),
            sweep(fixture_signal, "dwt", DwtParams(levels=5), n_levels=4),
        ]
        path = tmp_path / "merged.csv"
        save_report_csv(reports, path)
        rows = load_report_rows(path)
        assert {row["method"] for row in rows} == {"pgbz", "dwt"}

    def test_rejects_wrong_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            load_report_rows(path)


@settings(max_examples=15)
@given(st.integers(1, 40), st.integers(0, 2**31 - 1))
def test_schedule_covers_all_magnitudes(n_levels, seed):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(200)
    thresholds = threshold_schedule(values, n_levels)
    assert thresholds[-1] == pytest.approx(np.abs(values).max())
    masked, nonzero = apply_threshold(values, thresholds[-1])
    assert nonzero == 0
