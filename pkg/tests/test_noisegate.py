import numpy as np
import pytest

from pgbz import (
    GateParams,
    NoiseProfile,
    Signal,
    apply_filter,
    exchange_coefficients,
    gate_artifacts,
    learn_profile,
    load_profile_csv,
    noise_burst,
    porat_coefficients,
    porat_vs_nra_report,
    save_profile_csv,
    sine_glitch,
)


class TestLearnProfile:
    def test_zero_exemplar(self):
        profile = learn_profile(Signal(np.zeros(4096), 8000.0), 256)
        assert np.abs(profile.thresholds).max() == 0.0

    def test_white_noise_flat_thresholds(self):
        exemplar = noise_burst(8192, 8000.0, seed=0, burst_start=0, burst_len=8192)
        profile = learn_profile(exemplar, 256)
        cv = profile.thresholds.std() / profile.thresholds.mean()
        assert cv < 0.3

    def test_comb_exemplar_peaks_at_harmonics(self):
        # impulse train of period 32 has lines every 256/32 = 8 bins
        x = np.zeros(8192)
        x[::32] = 1.0
        profile = learn_profile(Signal(x, 8000.0), 256)
        line_bins = np.arange(8, 128, 8)
        others = np.setdiff1d(np.arange(1, 128), line_bins)
        assert profile.thresholds[line_bins].min() > 3 * np.median(profile.thresholds[others])

    def test_rejects_short_exemplar(self):
        with pytest.raises(ValueError):
            learn_profile(Signal(np.zeros(1000), 8000.0), 256)


class TestApplyFilter:
    def test_zero_reduction_is_identity(self):
        rng = np.random.default_rng(0)
        x = Signal(rng.standard_normal(8192), 8000.0)
        profile = learn_profile(Signal(np.abs(rng.standard_normal(4096)), 8000.0), 256)
        out = apply_filter(x, profile, reduction_db=0.0)
        assert len(out) == len(x)
        assert np.linalg.norm(out.samples - x.samples) / np.linalg.norm(x.samples) < 1e-10

    def test_sine_far_from_profile_passes(self):
        rate, window_len = 8000.0, 256
        comb = np.zeros(8192)
        comb[::32] = 0.05
        profile = learn_profile(Signal(comb, rate), window_len)
        freq = 19.5 * rate / window_len  # between comb lines (they sit every 8 bins)
        t = np.arange(8192) / rate
        sine = Signal(0.7 * np.sin(2 * np.pi * freq * t), rate)
        out = apply_filter(sine, profile)
        change = np.linalg.norm(out.samples - sine.samples) / np.linalg.norm(sine.samples)
        assert change < 1e-3

    def test_energy_never_increases(self):
        rng = np.random.default_rng(1)
        rate = 8000.0
        profile = learn_profile(noise_burst(4096, rate, seed=2, burst_start=0, burst_len=4096), 256)
        for samples in [
            rng.standard_normal(8192),
            np.sin(2 * np.pi * 440 * np.arange(8192) / rate),
            np.where(np.arange(8192) % 64 == 0, 1.0, 0.0),
        ]:
            x = Signal(samples, rate)
            out = apply_filter(x, profile, reduction_db=12.0)
            assert np.sum(out.samples**2) <= np.sum(x.samples**2) + 1e-9

    def test_length_preserved_exactly(self):
        rng = np.random.default_rng(3)
        profile = learn_profile(Signal(rng.standard_normal(4096), 8000.0), 256)
        for length in (8000, 8191, 9001):
            out = apply_filter(Signal(rng.standard_normal(length), 8000.0), profile)
            assert len(out) == length

    def test_rejects_negative_reduction(self):
        profile = NoiseProfile(np.zeros(256), 256, 8000.0, 2.0)
        with pytest.raises(ValueError):
            apply_filter(Signal(np.ones(4096), 8000.0), profile, reduction_db=-3.0)


class TestGateArtifacts:
    def test_end_to_end_reduces_artifact(self):
        rate = 8000.0
        t = np.arange(16384) / rate
        clean = Signal(0.6 * np.sin(2 * np.pi * 440 * t), rate)
        artifact = np.zeros(16384)
        artifact[::128] = 0.02
        artifact[64::128] = -0.02
        noisy = Signal(clean.samples + artifact, rate)
        filtered = gate_artifacts(clean, noisy, GateParams(512, 2.0, 12.0, 1.0))
        assert len(filtered) == len(clean)
        err_before = np.linalg.norm(noisy.samples - clean.samples)
        err_after = np.linalg.norm(filtered.samples - clean.samples)
        assert err_after < err_before


class TestProfileCsv:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(4)
        profile = learn_profile(Signal(rng.standard_normal(4096), 8000.0), 256)
        path = tmp_path / "profile.csv"
        save_profile_csv(profile, path)
        loaded = load_profile_csv(path)
        assert loaded.window_len == 256
        assert loaded.sample_rate == pytest.approx(8000.0)
        assert np.allclose(loaded.thresholds, profile.thresholds)

    def test_rejects_wrong_columns(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n0,1\n")
        with pytest.raises(ValueError):
            load_profile_csv(path)


class TestPoratVsNra:
    def test_identity_filter_full_set(self, basis225, geometry225):
        rng = np.random.default_rng(5)
        s = Signal(rng.standard_normal(225), 1.0)
        profile = NoiseProfile(np.zeros(16), 16, 1.0, 2.0)
        comparison = porat_vs_nra_report(
            s, basis225, np.arange(225), profile, reduction_db=0.0
        )
        assert np.abs(comparison.projection - comparison.filtered).max() < 1e-8
        assert comparison.rows().shape == (225, 5)

    def test_compressed_fixture_report(self, basis225, geometry225):
        s = sine_glitch(225, 225.0, frequency=15.0, glitch_amp=0.3)
        coeffs = exchange_coefficients(s, basis225).ravel()
        order = np.argsort(np.abs(coeffs))[::-1]
        kept = np.sort(order[:32])
        raw = (basis225.dual[:, kept] @ coeffs[kept]).real
        residual = Signal(raw - s.samples, 225.0)
        profile = learn_profile(residual, 16)
        comparison = porat_vs_nra_report(s, basis225, kept, profile)
        assert comparison.kept.size == 32
        assert comparison.rows().shape == (32, 5)
        assert np.isfinite(comparison.correlation_real)
        # agreement is reported, not asserted; the projection column must
        # still match an independent projection solve
        direct = porat_coefficients(s, basis225, kept)
        assert np.abs(comparison.projection - direct).max() < 1e-10

    def test_audio_like_fixture_report(self, basis961, geometry961):
        # richer signal variant of the comparison; agreement reported only
        from conftest import damped_harmonics

        n = geometry961.n_total
        s = damped_harmonics(n, float(n), seed=9, f0=n / 24.0)
        coeffs = exchange_coefficients(s, basis961).ravel()
        order = np.argsort(np.abs(coeffs))[::-1]
        kept = np.sort(order[: max(1, n // 25)])  # 96% compression
        raw = (basis961.dual[:, kept] @ coeffs[kept]).real
        profile = learn_profile(Signal(raw - s.samples, float(n)), 32)
        comparison = porat_vs_nra_report(s, basis961, kept, profile)
        assert comparison.rows().shape == (kept.size, 5)
        assert np.isfinite(comparison.correlation_real)
        assert np.isfinite(comparison.correlation_imag)
