"""Discrete Zak transform on the critically sampled lattice.

A length ``L*M`` signal is folded into an ``L x M`` rectangle: row ``j`` holds
the ``j``-th sample of every cell, and an unnormalized length-``M`` FFT across
the cells gives the column (frequency) axis,

    Z[j, k] = sum_m x[j + m*L] * exp(-2j*pi*m*k/M).

The inverse applies the matching (1/M)-normalized inverse FFT, so the round
trip is the identity. Cost is O(N log M).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LatticeGeometry

__all__ = ["ZakMap", "zak_forward", "zak_inverse", "semi_periodicity_check", "min_abs"]


@dataclass(frozen=True)
class ZakMap:
    """Complex window_len x window_count rectangle holding a Zak transform."""

    values: np.ndarray
    geometry: LatticeGeometry

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        expected = (self.geometry.window_len, self.geometry.window_count)
        if values.shape != expected:
            raise ValueError(f"Zak map shape {values.shape} does not match geometry {expected}")
        object.__setattr__(self, "values", values)


def zak_forward(x, geometry: LatticeGeometry) -> ZakMap:
    """Fold ``x`` (length n_total) into its Zak rectangle."""
    x = np.asarray(x)
    if x.shape != (geometry.n_total,):
        raise ValueError(f"signal length {x.shape} does not match geometry n_total={geometry.n_total}")
    folded = x.reshape(geometry.window_count, geometry.window_len)
    values = np.fft.fft(folded, axis=0).T  # rows j = 0..L-1, cols k = 0..M-1
    return ZakMap(np.ascontiguousarray(values), geometry)


def zak_inverse(zmap: ZakMap) -> np.ndarray:
    """Invert a Zak rectangle back to the complex length-n_total signal."""
    folded = np.fft.ifft(zmap.values, axis=1).T  # [m, j]
    return folded.reshape(-1)


def semi_periodicity_check(zmap: ZakMap) -> float:
    """Deviation from the cell-shift covariance of the Zak transform.

    Shifting the underlying signal cyclically by one cell multiplies the Zak
    map by exp(2j*pi*k/M); returns the max absolute violation of that
    identity, which should sit at rounding level for any input.
    """
    geometry = zmap.geometry
    x = zak_inverse(zmap)
    shifted = np.roll(x, -geometry.window_len)
    z_shifted = zak_forward(shifted, geometry).values
    phase = np.exp(2j * np.pi * np.arange(geometry.window_count) / geometry.window_count)
    return float(np.abs(z_shifted - phase[None, :] * zmap.values).max())


def min_abs(zmap: ZakMap) -> float:
    """Smallest magnitude on the Zak grid; synthesis divides by these values."""
    return float(np.abs(zmap.values).min())
