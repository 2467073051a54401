"""STFT and periodic orthogonal wavelet baselines for the compression sweep.

The STFT follows a fixed perfect-reconstruction protocol: Blackman-Harris
analysis window, Hamming synthesis window, hop of window_len/8 (80% overlap),
one window of zero padding at each extremity, weighted overlap-add synthesis
normalized by the accumulated window product. The wavelet transform is a
non-expansive pyramid with periodic boundaries built on a minimal-phase
Daubechies filter pair with five vanishing moments, derived once by spectral
factorization at high precision.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import mpmath as mp
import numpy as np
from scipy.signal import windows as _windows

from .core import Signal

__all__ = [
    "StftMap",
    "DwtCoeffs",
    "HOP_DIVISOR",
    "stft_analyze",
    "stft_synthesize",
    "daubechies_filters",
    "dwt_analyze",
    "dwt_synthesize",
]

HOP_DIVISOR = 8
ANALYSIS_WINDOW = "blackman_harris"  # 4-term, -92 dB sidelobes
SYNTHESIS_WINDOW = "hamming"
DWT_FAMILY = "daubechies5"
DWT_LEVEL_RANGE = (5, 10)


@dataclass(frozen=True)
class StftMap:
    """Complex bins x frames map plus the bookkeeping needed to invert it."""

    values: np.ndarray
    window_len: int
    hop: int
    pad_front: int
    pad_back: int
    orig_len: int
    sample_rate: float
    analysis_window: str = ANALYSIS_WINDOW
    synthesis_window: str = SYNTHESIS_WINDOW

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        if values.ndim != 2 or values.shape[0] != self.window_len:
            raise ValueError(f"expected window_len x frames values, got {values.shape}")
        if self.hop * HOP_DIVISOR != self.window_len:
            raise ValueError("hop must be window_len / 8")
        object.__setattr__(self, "values", values)


def _stft_windows(window_len: int) -> tuple[np.ndarray, np.ndarray]:
    analysis = _windows.blackmanharris(window_len, sym=False)
    synthesis = _windows.hamming(window_len, sym=False)
    return analysis, synthesis


def stft_analyze(signal: Signal, window_len: int) -> StftMap:
    """Frame, window, and FFT the signal, zero-padded one window each side."""
    if window_len < 16 or window_len % HOP_DIVISOR != 0:
        raise ValueError(f"window_len must be >= 16 and divisible by {HOP_DIVISOR}, got {window_len}")
    hop = window_len // HOP_DIVISOR
    x = signal.samples
    pad_front = window_len
    # extend the back pad so frames tile the padded signal exactly
    remainder = (len(x) + 2 * window_len - window_len) % hop
    pad_back = window_len + (hop - remainder) % hop
    padded = np.concatenate([np.zeros(pad_front), x, np.zeros(pad_back)])
    n_frames = (padded.size - window_len) // hop + 1
    analysis, _ = _stft_windows(window_len)
    frame_idx = hop * np.arange(n_frames)[:, None] + np.arange(window_len)[None, :]
    values = np.fft.fft(padded[frame_idx] * analysis, axis=1).T
    return StftMap(values, window_len, hop, pad_front, pad_back, len(x), signal.sample_rate)


def stft_synthesize(smap: StftMap) -> Signal:
    """Weighted overlap-add inverse, exact for unmodified maps.

    Each frame is inverse transformed, weighted by the synthesis window, and
    accumulated; the result is divided by the accumulated analysis*synthesis
    window product and the padding stripped. Frames whose offsets differ by a
    multiple of the window length do not overlap, so the overlap-add runs as
    eight blockwise vector adds.
    """
    window_len, n_frames = smap.values.shape
    hop = smap.hop
    analysis, synthesis = _stft_windows(window_len)
    frames = np.fft.ifft(smap.values.T, axis=1).real * synthesis
    padded_len = smap.orig_len + smap.pad_front + smap.pad_back
    numerator = np.zeros(padded_len)
    weight = np.zeros(padded_len)
    overlap_product = analysis * synthesis
    for group in range(HOP_DIVISOR):
        block = frames[group::HOP_DIVISOR]
        start = group * hop
        numerator[start : start + block.size] += block.reshape(-1)
        weight[start : start + block.size] += np.tile(overlap_product, block.shape[0])
    region = slice(smap.pad_front, smap.pad_front + smap.orig_len)
    denom = weight[region]
    if denom.min() < 1e-12:
        raise ValueError("degenerate overlap-add normalization; window/hop protocol violated")
    return Signal(numerator[region] / denom, smap.sample_rate)


@lru_cache(maxsize=None)
def daubechies_filters(order: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Minimal-phase Daubechies low/high-pass pair with ``order`` vanishing
    moments (filter length 2*order).

    Derived by spectral factorization of the half-band binomial polynomial:
    roots are extracted at 60-digit precision, the factor with all roots
    inside the unit circle is kept, and the result is rounded to doubles.
    The pair satisfies sum(h) = sqrt(2) and orthonormality under even shifts
    to rounding precision.
    """
    if order < 1:
        raise ValueError("order must be positive")
    with mp.workdps(60):

        def polymul(a, b):
            out = [mp.mpf(0)] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
            return out

        def polypow(a, k):
            out = [mp.mpf(1)]
            for _ in range(k):
                out = polymul(out, a)
            return out

        # z^(order-1) * P((2 - z - 1/z) / 4) with P the binomial half-band part
        y_of_z = [mp.mpf(-1) / 4, mp.mpf(1) / 2, mp.mpf(-1) / 4]  # y * z as poly in z
        half_band = [mp.mpf(0)] * (2 * (order - 1) + 1)
        for k in range(order):
            coeff = mp.binomial(order - 1 + k, k)
            term = polypow(y_of_z, k)
            for i, value in enumerate(term):
                half_band[i + order - 1 - k] += coeff * value
        if order == 1:
            inside = []
        else:
            roots = mp.polyroots(list(reversed(half_band)), maxsteps=200, extraprec=200)
            inside = [r for r in roots if abs(r) < 1]
            if len(inside) != order - 1:
                raise RuntimeError("spectral factorization failed to split the roots")
        factor = [mp.mpf(1)]
        for root in inside:
            factor = polymul(factor, [-root, mp.mpf(1)])
        scale = mp.mpf(1)
        for root in inside:
            scale *= 1 - root
        factor = [c / scale for c in factor]
        poly = polymul(polypow([mp.mpf(1) / 2, mp.mpf(1) / 2], order), factor)
        lowpass = np.array([float(mp.re(mp.sqrt(2) * c)) for c in poly])
    highpass = ((-1.0) ** np.arange(lowpass.size)) * lowpass[::-1]
    lowpass.flags.writeable = False
    highpass.flags.writeable = False
    return lowpass, highpass


@dataclass(frozen=True)
class DwtCoeffs:
    """Pyramid coefficients: per-level details (finest first) plus the final
    approximation. Total count equals the (cyclically padded) signal length."""

    details: tuple[np.ndarray, ...]
    approx: np.ndarray
    levels: int
    orig_len: int
    padded_len: int
    sample_rate: float
    family: str = DWT_FAMILY

    def __post_init__(self) -> None:
        if len(self.details) != self.levels:
            raise ValueError("one detail band per level required")
        expected = self.padded_len
        for depth, detail in enumerate(self.details, start=1):
            expected //= 2
            if detail.size != expected:
                raise ValueError(
                    f"detail band {depth} has {detail.size} values, expected {expected}"
                )
        if self.approx.size != expected:
            raise ValueError(f"approximation has {self.approx.size} values, expected {expected}")

    @property
    def total_count(self) -> int:
        return sum(d.size for d in self.details) + self.approx.size


def _check_levels(levels: int) -> None:
    low, high = DWT_LEVEL_RANGE
    if not low <= levels <= high:
        raise ValueError(f"levels must be within [{low}, {high}], got {levels}")


def _analyze_step(x: np.ndarray, lowpass: np.ndarray, highpass: np.ndarray):
    half = x.size // 2
    idx = (2 * np.arange(half)[:, None] + np.arange(lowpass.size)[None, :]) % x.size
    stacked = x[idx]
    return stacked @ lowpass, stacked @ highpass


def _synthesize_step(approx, detail, lowpass, highpass, out_len: int) -> np.ndarray:
    out = np.zeros(out_len)
    base = 2 * np.arange(approx.size)
    for tap in range(lowpass.size):
        idx = (base + tap) % out_len
        out[idx] += lowpass[tap] * approx + highpass[tap] * detail
    return out


def dwt_analyze(signal: Signal, levels: int) -> DwtCoeffs:
    """Periodic pyramidal decomposition; input is padded cyclically to the
    next multiple of 2**levels so every level halves exactly."""
    _check_levels(levels)
    lowpass, highpass = daubechies_filters()
    x = signal.samples
    block = 1 << levels
    padded_len = ((x.size + block - 1) // block) * block
    padded = np.resize(x, padded_len)  # cyclic extension
    details = []
    approx = padded
    for _ in range(levels):
        approx, detail = _analyze_step(approx, lowpass, highpass)
        details.append(detail)
    return DwtCoeffs(tuple(details), approx, levels, x.size, padded_len, signal.sample_rate)


def dwt_synthesize(coeffs: DwtCoeffs) -> Signal:
    """Invert the pyramid and strip the cyclic padding; exact round trip."""
    lowpass, highpass = daubechies_filters()
    approx = coeffs.approx
    for detail in reversed(coeffs.details):
        approx = _synthesize_step(approx, detail, lowpass, highpass, 2 * approx.size)
    if approx.size != coeffs.padded_len:
        raise ValueError("coefficient sizes are inconsistent with the recorded padding")
    return Signal(approx[: coeffs.orig_len], coeffs.sample_rate)


def stft_with_values(smap: StftMap, values: np.ndarray) -> StftMap:
    """Same framing metadata, new coefficient values (for masked synthesis)."""
    return replace(smap, values=values)


def dwt_with_values(coeffs: DwtCoeffs, flat: np.ndarray) -> DwtCoeffs:
    """Rebuild a coefficient pyramid from a flat vector in analysis order."""
    parts = []
    offset = 0
    for detail in coeffs.details:
        parts.append(np.asarray(flat[offset : offset + detail.size].real, dtype=np.float64))
        offset += detail.size
    approx = np.asarray(flat[offset : offset + coeffs.approx.size].real, dtype=np.float64)
    return DwtCoeffs(
        tuple(parts), approx, coeffs.levels, coeffs.orig_len, coeffs.padded_len,
        coeffs.sample_rate, coeffs.family,
    )
