"""Dense reference implementation of the lattice basis and its dual.

Builds the full N x N matrix of time-frequency shifted windows, the Hermitian
overlap (Gram) matrix, and the biorthogonal dual basis via a Cholesky solve
with one refinement pass. Serves as ground truth for the O(N log N) Zak path
and hosts the minimal-norm (least-squares projection) reconstruction from a
kept subset of dual functions. Memory is O(N^2), so construction is guarded
by a size cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import LatticeGeometry, Signal, Window
from .transform import CoefficientMap

__all__ = [
    "DenseBasis",
    "DEFAULT_SIZE_CAP",
    "CONDITION_LIMIT",
    "build_basis",
    "direct_coefficients",
    "exchange_coefficients",
    "expand",
    "porat_reconstruct",
    "porat_coefficients",
]

DEFAULT_SIZE_CAP = 4096
CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class DenseBasis:
    """Explicit lattice basis: columns of ``gabor`` are the shifted/modulated
    windows, ``overlap`` their Gram matrix, ``dual`` the biorthogonal columns
    satisfying ``gabor^H @ dual == I``. Column ``n + window_count * m`` holds
    time cell ``n``, harmonic ``m`` (same packing as CoefficientMap.ravel)."""

    gabor: np.ndarray
    overlap: np.ndarray
    dual: np.ndarray
    geometry: LatticeGeometry


def build_basis(
    geometry: LatticeGeometry, window: Window, size_cap: int = DEFAULT_SIZE_CAP
) -> DenseBasis:
    """Construct the dense basis, Gram matrix, and dual basis.

    Rejects lattices above ``size_cap`` coefficients: the dense route needs
    O(N^2) memory and O(N^3) time, which is exactly what the Zak path avoids.
    """
    n = geometry.n_total
    if n > size_cap:
        raise ValueError(
            f"lattice size {n} exceeds the dense cap {size_cap}; "
            "use the Zak-transform analysis/synthesis instead"
        )
    if window.geometry != geometry:
        raise ValueError("window was built for a different geometry")
    window_len, window_count = geometry.window_len, geometry.window_count
    shifts = np.stack(
        [np.roll(window.values, cell * window_len) for cell in range(window_count)], axis=1
    )  # n x window_count
    phases = np.exp(
        2j * np.pi * np.outer(np.arange(n), np.arange(window_len)) / window_len
    )  # n x window_len
    gabor = (phases[:, :, None] * shifts[:, None, :]).reshape(n, n)
    overlap = gabor.conj().T @ gabor
    try:
        factor = scipy.linalg.cho_factor(overlap)
    except scipy.linalg.LinAlgError as exc:
        raise ValueError(f"overlap matrix is not positive definite: {exc}") from exc
    rhs = gabor.conj().T
    solved = scipy.linalg.cho_solve(factor, rhs)
    solved += scipy.linalg.cho_solve(factor, rhs - overlap @ solved)  # one refinement pass
    dual = solved.conj().T
    return DenseBasis(gabor, overlap, dual, geometry)


def _check_signal(samples: np.ndarray, basis: DenseBasis) -> np.ndarray:
    samples = np.asarray(samples)
    if samples.shape != (basis.geometry.n_total,):
        raise ValueError(
            f"signal length {samples.shape} does not match lattice size {basis.geometry.n_total}"
        )
    return samples


def direct_coefficients(signal: Signal, basis: DenseBasis) -> CoefficientMap:
    """Expansion coefficients on the window lattice itself: dual^H @ s.

    These reconstruct exactly through the window columns but are non-sparse,
    since the dual functions doing the projecting are delocalized.
    """
    samples = _check_signal(signal.samples, basis)
    flat = basis.dual.conj().T @ samples
    return CoefficientMap.from_flat(flat, basis.geometry, "pg_direct")


def exchange_coefficients(signal: Signal, basis: DenseBasis) -> CoefficientMap:
    """Exchanged-role coefficients: gabor^H @ s.

    The localized windows compute the coefficients and the delocalized duals
    serve as the expansion set, which is what makes the map sparse. Matches
    the fast Zak-path analysis to rounding.
    """
    samples = _check_signal(signal.samples, basis)
    flat = basis.gabor.conj().T @ samples
    return CoefficientMap.from_flat(flat, basis.geometry, "pgbz")


def expand(basis: DenseBasis, coeffs: CoefficientMap) -> np.ndarray:
    """Complex reconstruction matching the map's convention.

    "pgbz" maps expand on the dual columns, "pg_direct" maps on the window
    columns; either way expand(analyze(s)) == s for the full map.
    """
    flat = coeffs.ravel()
    matrix = basis.dual if coeffs.kind == "pgbz" else basis.gabor
    return matrix @ flat


def _kept_indices(keep, n: int) -> np.ndarray:
    kept = np.unique(np.asarray(list(keep) if not isinstance(keep, np.ndarray) else keep, dtype=int))
    if kept.size == 0:
        raise ValueError("kept index set must be non-empty")
    if kept.min() < 0 or kept.max() >= n:
        raise ValueError(f"kept indices must lie in 0..{n - 1}")
    return kept


def _projection_solve(samples: np.ndarray, basis: DenseBasis, keep) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Least-squares coefficients of ``samples`` on the kept dual columns."""
    kept = _kept_indices(keep, basis.geometry.n_total)
    sub = basis.dual[:, kept]
    cond = np.linalg.cond(sub)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise ValueError(
            f"kept dual columns are rank deficient (condition number {cond:.3e} "
            f"exceeds {CONDITION_LIMIT:.1e})"
        )
    gram = sub.conj().T @ sub
    factor = scipy.linalg.cho_factor(gram)
    rhs = sub.conj().T @ samples
    coef = scipy.linalg.cho_solve(factor, rhs)
    coef += scipy.linalg.cho_solve(factor, rhs - gram @ coef)
    return coef, sub, kept


def porat_reconstruct(signal: Signal, basis: DenseBasis, keep) -> Signal:
    """Minimal-norm reconstruction from a kept subset of dual functions.

    Orthogonally projects the signal onto the span of the kept dual columns,
    so the error never exceeds that of the raw truncated expansion (masking
    the coefficient map and expanding). ``keep`` is any collection of flat
    coefficient indices.
    """
    samples = _check_signal(signal.samples, basis)
    coef, sub, _ = _projection_solve(samples, basis, keep)
    return Signal((sub @ coef).real, signal.sample_rate)


def porat_coefficients(signal: Signal, basis: DenseBasis, keep) -> np.ndarray:
    """Projection coefficients over the kept dual columns (full set: the
    exchanged coefficients)."""
    samples = _check_signal(signal.samples, basis)
    coef, _, _ = _projection_solve(samples, basis, keep)
    return coef
