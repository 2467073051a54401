"""Spectral noise gate approximating interactive noise-reduction tools.

A noise profile records per-frequency-bin magnitude thresholds (mean plus a
few standard deviations of the exemplar's short-time spectra). Filtering
attenuates every time-frequency bin whose magnitude sits at or below the
scaled threshold, smooths the gain mask over a 3x3 (bin x frame)
neighbourhood, and resynthesizes. Gains never exceed one, so the gate only
attenuates; zero reduction is the identity.

The short-time transform reuses the baseline protocol (Blackman-Harris /
Hamming, hop of window_len/8), and the default calibration exemplar is the
residual of a compression round on the same signal, which is what the
lattice-expansion artifact looks like.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from .baselines import stft_analyze, stft_synthesize, stft_with_values
from .core import Signal
from .dense import DenseBasis, exchange_coefficients, porat_coefficients, _projection_solve

__all__ = [
    "NoiseProfile",
    "GateParams",
    "NraComparison",
    "learn_profile",
    "apply_filter",
    "gate_artifacts",
    "porat_vs_nra_report",
    "save_profile_csv",
    "load_profile_csv",
]


@dataclass(frozen=True)
class NoiseProfile:
    """Per-bin gate thresholds learned from a noise exemplar."""

    thresholds: np.ndarray
    window_len: int
    sample_rate: float
    k_sigma: float

    def __post_init__(self) -> None:
        thresholds = np.asarray(self.thresholds, dtype=np.float64)
        if thresholds.shape != (self.window_len,):
            raise ValueError(
                f"expected one threshold per bin ({self.window_len}), got {thresholds.shape}"
            )
        if not np.all(np.isfinite(thresholds)) or np.any(thresholds < 0):
            raise ValueError("thresholds must be finite and non-negative")
        object.__setattr__(self, "thresholds", thresholds)

    def center_frequencies(self) -> np.ndarray:
        """Signed bin centre frequencies in Hz."""
        bins = np.arange(self.window_len)
        signed = np.where(bins <= self.window_len // 2, bins, bins - self.window_len)
        return signed * self.sample_rate / self.window_len


@dataclass(frozen=True)
class GateParams:
    window_len: int = 1024
    k_sigma: float = 2.0
    reduction_db: float = 12.0
    sensitivity: float = 1.0


def learn_profile(noise_exemplar: Signal, window_len: int, k_sigma: float = 2.0) -> NoiseProfile:
    """Per-bin threshold = mean + k_sigma * stddev of the exemplar's short-time
    magnitudes. The exemplar is typically a noise-only segment or the residual
    of a compression round."""
    if len(noise_exemplar) < 4 * window_len:
        raise ValueError(
            f"exemplar must be at least 4 windows long ({4 * window_len}), got {len(noise_exemplar)}"
        )
    magnitudes = np.abs(stft_analyze(noise_exemplar, window_len).values)
    thresholds = magnitudes.mean(axis=1) + k_sigma * magnitudes.std(axis=1)
    return NoiseProfile(thresholds, window_len, noise_exemplar.sample_rate, k_sigma)


def apply_filter(
    signal: Signal,
    profile: NoiseProfile,
    reduction_db: float = 12.0,
    sensitivity: float = 1.0,
) -> Signal:
    """Attenuate bins whose magnitude falls within the scaled gate threshold.

    Bins with |X| <= sensitivity * threshold are scaled by
    10**(-reduction_db/20); the gain mask is smoothed over 3 bins x 3 frames
    before it is applied. Output length always equals the input length.
    """
    if reduction_db < 0:
        raise ValueError("reduction_db must be non-negative")
    smap = stft_analyze(signal, profile.window_len)
    floor = 10.0 ** (-reduction_db / 20.0)
    gated = np.abs(smap.values) <= sensitivity * profile.thresholds[:, None]
    gains = np.where(gated, floor, 1.0)
    gains = uniform_filter(gains, size=3, mode="nearest")
    return stft_synthesize(stft_with_values(smap, smap.values * gains))


def gate_artifacts(original: Signal, reconstructed: Signal, params: GateParams) -> Signal:
    """Self-calibrating gate: learn the profile from the reconstruction
    residual against the original, then filter the reconstruction."""
    residual = Signal(reconstructed.samples - original.samples, original.sample_rate)
    profile = learn_profile(residual, params.window_len, params.k_sigma)
    return apply_filter(reconstructed, profile, params.reduction_db, params.sensitivity)


@dataclass(frozen=True)
class NraComparison:
    """Projection coefficients of the clean signal vs the gate-filtered
    truncated reconstruction, over the kept dual functions."""

    kept: np.ndarray
    projection: np.ndarray   # from the clean signal
    filtered: np.ndarray     # from the gated reconstruction
    correlation_real: float
    correlation_imag: float

    def rows(self) -> np.ndarray:
        """(index, Re proj, Im proj, Re filt, Im filt) rows for serialization."""
        return np.column_stack(
            [
                self.kept.astype(np.float64),
                self.projection.real,
                self.projection.imag,
                self.filtered.real,
                self.filtered.imag,
            ]
        )


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    if a.size < 2 or np.std(a) == 0 or np.std(b) == 0:
        return float("nan")
    return float(np.corrcoef(a, b)[0, 1])


def porat_vs_nra_report(
    signal: Signal,
    basis: DenseBasis,
    keep,
    profile: NoiseProfile,
    *,
    reduction_db: float = 12.0,
    sensitivity: float = 1.0,
) -> NraComparison:
    """Compare minimal-norm projection coefficients against the coefficients
    of the gate-filtered raw truncation, on the same kept dual functions.

    No agreement threshold is asserted; the correlations are reported for
    inspection.
    """
    projection = porat_coefficients(signal, basis, keep)
    full = exchange_coefficients(signal, basis).ravel()
    kept = np.unique(np.asarray(list(keep) if not isinstance(keep, np.ndarray) else keep, dtype=int))
    raw = (basis.dual[:, kept] @ full[kept]).real
    filtered_signal = apply_filter(
        Signal(raw, signal.sample_rate), profile, reduction_db, sensitivity
    )
    filtered, _, _ = _projection_solve(filtered_signal.samples, basis, kept)
    return NraComparison(
        kept=kept,
        projection=projection,
        filtered=filtered,
        correlation_real=_pearson(projection.real, filtered.real),
        correlation_imag=_pearson(projection.imag, filtered.imag),
    )


def save_profile_csv(profile: NoiseProfile, path) -> None:
    """Write (bin_index, center_frequency_hz, threshold) rows."""
    freqs = profile.center_frequencies()
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("bin_index", "center_frequency_hz", "threshold"))
        for index in range(profile.window_len):
            writer.writerow((index, repr(float(freqs[index])), repr(float(profile.thresholds[index]))))


def load_profile_csv(path) -> NoiseProfile:
    """Rebuild a profile from its CSV form. The calibration constant is not
    serialized and loads as NaN."""
    bins: list[int] = []
    freqs: list[float] = []
    thresholds: list[float] = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        expected = ("bin_index", "center_frequency_hz", "threshold")
        if tuple(reader.fieldnames or ()) != expected:
            raise ValueError(f"unexpected profile columns: {reader.fieldnames}")
        for raw in reader:
            bins.append(int(raw["bin_index"]))
            freqs.append(float(raw["center_frequency_hz"]))
            thresholds.append(float(raw["threshold"]))
    window_len = len(bins)
    if bins != list(range(window_len)) or window_len < 2:
        raise ValueError("profile rows must cover bins 0..window_len-1 in order")
    sample_rate = freqs[1] * window_len  # bin 1 sits at rate / window_len
    return NoiseProfile(np.array(thresholds), window_len, sample_rate, float("nan"))
