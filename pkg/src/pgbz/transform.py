"""Fast critically sampled Gabor analysis and synthesis via the Zak transform.

Analysis computes the inner products of the signal with every time-frequency
shift of the localized window (the sparse, biorthogonally exchanged
convention) without ever forming a matrix:

    coeffs[n, m] = fft_over_j( ifft_over_k( Z_signal * conj(Z_window) ) )

with j the intra-cell row and k the cell-frequency column of the Zak maps,
O(N log N) overall. Synthesis expands on
the delocalized dual lattice by inverting those steps; that is where the
division by the window's Zak transform enters, so the window is validated to
stay clear of Zak zeros (odd cell size, grid-centred Gaussian).

Normalization convention (sample units, pinned by the dense-basis oracle):
the window/dual Zak product is 1/window_len, analysis is exactly
``conj(basis_column) . signal``, and synthesize(analyze(s)) == s to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LatticeGeometry, Signal, Window
from .zak import ZakMap, zak_forward, zak_inverse

__all__ = [
    "CoefficientMap",
    "WindowZakZeroError",
    "ZAK_ZERO_REL",
    "analyze",
    "synthesize",
    "residual_period_check",
]

# Relative floor for |Z_window|; below this the lattice is unusable and the
# geometry must be regenerated rather than the division regularized.
ZAK_ZERO_REL = 1e-10

_KINDS = ("pgbz", "pg_direct")


class WindowZakZeroError(ValueError):
    """Raised when the window's Zak transform has a (near-)zero on the grid."""


@dataclass(frozen=True)
class CoefficientMap:
    """Time-frequency coefficient grid: window_count rows x window_len columns.

    Row ``n`` is the time cell, column ``m`` the harmonic. ``kind`` records
    which convention produced the values: "pgbz" for localized-window analysis
    (sparse), "pg_direct" for dual-window analysis (non-sparse).
    """

    values: np.ndarray
    geometry: LatticeGeometry
    kind: str = "pgbz"

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        expected = (self.geometry.window_count, self.geometry.window_len)
        if values.shape != expected:
            raise ValueError(f"coefficient map shape {values.shape} does not match geometry {expected}")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "values", values)

    def ravel(self) -> np.ndarray:
        """Flatten to the canonical single-index order (time cell fastest)."""
        return self.values.reshape(-1, order="F")

    @classmethod
    def from_flat(cls, flat, geometry: LatticeGeometry, kind: str = "pgbz") -> "CoefficientMap":
        values = np.asarray(flat).reshape(
            (geometry.window_count, geometry.window_len), order="F"
        )
        return cls(values, geometry, kind)


def _checked_window_zak(window: Window) -> ZakMap:
    zmap = zak_forward(window.values, window.geometry)
    mags = np.abs(zmap.values)
    if mags.min() < ZAK_ZERO_REL * mags.max():
        raise WindowZakZeroError(
            f"window Zak transform has a near-zero (min/max = {mags.min() / mags.max():.3e}); "
            "regenerate the geometry with an odd window length and a grid-centred window"
        )
    return zmap


def _check_signal(signal: Signal, geometry: LatticeGeometry) -> None:
    if len(signal) != geometry.n_total:
        raise ValueError(
            f"signal length {len(signal)} does not match geometry n_total={geometry.n_total}; "
            "trim to a whole number of cells first"
        )
    if abs(signal.sample_rate * geometry.sample_spacing - 1.0) > 1e-6:
        raise ValueError("signal sample rate does not match the lattice geometry")


def analyze(signal: Signal, window: Window) -> CoefficientMap:
    """Project a trimmed signal onto the localized window lattice.

    Equivalent to ``conj(G).T @ samples`` for the dense lattice matrix ``G``,
    computed with two Zak transforms and a mixed 2-D FFT. No division by the
    window's Zak transform occurs here, but the window is validated anyway so
    that the resulting map is guaranteed to be synthesizable.
    """
    geometry = window.geometry
    _check_signal(signal, geometry)
    z_window = _checked_window_zak(window)
    z_signal = zak_forward(signal.samples, geometry)
    product = z_signal.values * np.conj(z_window.values)  # [j, k]
    mat = np.fft.fft(np.fft.ifft(product, axis=1), axis=0)  # [m, n]
    return CoefficientMap(mat.T, geometry, "pgbz")


def synthesize(coeffs: CoefficientMap, window: Window, *, max_imag_rel: float = 1e-9) -> Signal:
    """Expand a coefficient map on the dual lattice back into a signal.

    Inverts :func:`analyze`: mixed 2-D FFT of the map, division by
    ``window_len * conj(Z_window)`` (the dual window's Zak transform is the
    reciprocal of the window's, times 1/window_len), then the inverse Zak
    transform. The imaginary residual is asserted below ``max_imag_rel``
    relative to the signal; maps produced from real signals keep it at
    rounding level, but magnitude masking can split a conjugate pair on a
    floating-point near-tie at the threshold, so mask-and-synthesize callers
    pass a relaxed bound.
    """
    geometry = coeffs.geometry
    if window.geometry != geometry:
        raise ValueError("coefficient map and window use different geometries")
    z_window = _checked_window_zak(window)
    mat = coeffs.values.T  # [m, n]
    window_len = geometry.window_len
    spread = window_len * np.fft.fft(np.fft.ifft(mat, axis=0), axis=1)  # [j, k]
    z_values = spread / (window_len * np.conj(z_window.values))
    x = zak_inverse(ZakMap(z_values, geometry))
    norm = np.linalg.norm(x)
    if norm > 0.0:
        imag_rel = np.linalg.norm(x.imag) / norm
        if imag_rel > max_imag_rel:
            raise ValueError(
                f"synthesis imaginary residual {imag_rel:.3e} exceeds {max_imag_rel:.1e}; "
                "the coefficient map does not describe a real signal"
            )
    return Signal(x.real, geometry.sample_rate)


def residual_period_check(
    original: Signal, reconstructed: Signal, geometry: LatticeGeometry | None = None
) -> int:
    """Dominant repeat distance of the reconstruction residual, in samples.

    Each candidate period is scored by its circular-autocorrelation magnitude
    averaged over all of its multiples, so only globally repeating structure
    scores high; intra-spike correlation at a handful of small lags dilutes
    away. The smallest candidate within 60% of the best score is returned,
    which maps an alternating-sign spike train (periodic at twice its
    spacing, strongly anticorrelated at the spacing itself) to its spacing.
    Candidates run up to n/16 so at least eight repeats contribute.

    Compression artifacts of the lattice expansion repeat once per time cell,
    making ``window_len`` the expected value. Returns 0 for an identically
    zero residual; reports only, asserts nothing.
    """
    a = original.samples
    b = reconstructed.samples
    if a.size != b.size:
        raise ValueError("signals must have equal length")
    if geometry is not None and a.size != geometry.n_total:
        raise ValueError("signal length does not match the supplied geometry")
    residual = b - a
    n = residual.size
    if n < 4:
        return 0
    autocorr = np.fft.irfft(np.abs(np.fft.rfft(residual)) ** 2, n=n)
    if autocorr[0] == 0.0:
        return 0
    magnitudes = np.abs(autocorr) / autocorr[0]
    half = n // 2
    p_max = max(2, n // 16)
    scores = np.zeros(p_max + 1)
    for period in range(2, p_max + 1):
        scores[period] = magnitudes[period : half + 1 : period].mean()
    return int(np.nonzero(scores >= 0.6 * scores.max())[0][0])
