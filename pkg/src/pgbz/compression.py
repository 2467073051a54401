"""Magnitude-threshold compression sweep shared by all transforms.

The schedule sorts the unique coefficient magnitudes ascending, splits them
into equal-cardinality subspaces, and removes one subspace per level (entries
with magnitude <= threshold are zeroed). Each level reconstructs the signal
from the masked map and scores it with the normalized error metric

    mse_percent = 100 * ||orig - recons||_2 / (n * (max(orig) - min(orig))),

Euclidean norm, not squared. The sweep stops once more than ``max_removed``
of the map would be gone (capped at 96%). The harness is identical for every
method; only the analyze/reconstruct callbacks differ.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np

from . import baselines, noisegate, transform
from .core import Signal, derive_geometry, periodized_gaussian

__all__ = [
    "LevelRecord",
    "CompressionReport",
    "MAX_REMOVED_CAP",
    "METHODS",
    "REPORT_COLUMNS",
    "threshold_schedule",
    "apply_threshold",
    "mse_percent",
    "sweep",
    "nmse",
    "nmse_product",
    "save_report_csv",
    "load_report_rows",
]

MAX_REMOVED_CAP = 0.96
METHODS = ("pgbz", "stft", "dwt")
REPORT_COLUMNS = ("method", "level", "nonzero", "removed_frac", "mse_percent", "wall_s")


@dataclass(frozen=True)
class LevelRecord:
    level: int
    threshold: float
    nonzero: int
    removed_fraction: float
    mse_percent: float
    wall_time_s: float       # analyze + mask + reconstruct for this level
    cumulative_time_s: float  # analyze + all mask/reconstruct work so far


@dataclass(frozen=True)
class CompressionReport:
    method: str
    source: str
    total_coefficients: int
    levels: tuple[LevelRecord, ...]
    geometry_note: str = ""
    non_monotone_levels: tuple[int, ...] = ()
    reconstructions: tuple[np.ndarray, ...] | None = field(default=None, repr=False)


@dataclass(frozen=True)
class PgbzParams:
    sigma: float | None = None
    nra: "noisegate.GateParams | None" = None


@dataclass(frozen=True)
class StftParams:
    window_len: int = 1024


@dataclass(frozen=True)
class DwtParams:
    levels: int = 8


def threshold_schedule(map_values, n_levels: int) -> np.ndarray:
    """Ascending per-level thresholds: maxima of equal-cardinality splits of
    the sorted unique magnitudes. Fewer unique values than levels collapse to
    fewer thresholds."""
    if n_levels < 1:
        raise ValueError("n_levels must be at least 1")
    values = np.asarray(map_values).ravel()
    if values.size == 0:
        raise ValueError("empty coefficient map")
    unique = np.unique(np.abs(values))
    chunks = np.array_split(unique, min(n_levels, unique.size))
    return np.array([chunk[-1] for chunk in chunks if chunk.size])


def apply_threshold(map_values, threshold: float) -> tuple[np.ndarray, int]:
    """Zero every entry with magnitude <= threshold; returns (masked, survivors)."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    values = np.asarray(map_values)
    keep = np.abs(values) > threshold
    return np.where(keep, values, 0), int(np.count_nonzero(keep))


def _mse_percent(original: np.ndarray, reconstructed: np.ndarray) -> float:
    if original.shape != reconstructed.shape:
        raise ValueError("signals must have equal length")
    value_range = float(original.max() - original.min())
    if value_range <= 0:
        raise ValueError("original signal is constant; the error metric is undefined")
    return 100.0 * float(np.linalg.norm(original - reconstructed)) / (original.size * value_range)


def mse_percent(original: Signal, reconstructed: Signal) -> float:
    """Normalized reconstruction error in percent (see module docstring)."""
    return _mse_percent(original.samples, reconstructed.samples)


class _PgbzCodec:
    method = "pgbz"

    def __init__(self, signal: Signal, params: PgbzParams):
        geometry, trimmed_len = derive_geometry(len(signal), signal.sample_rate)
        self.geometry = geometry
        self.window = periodized_gaussian(geometry, params.sigma)
        self.reference = Signal(signal.samples[:trimmed_len], signal.sample_rate)
        self.note = f"window_len={geometry.window_len} window_count={geometry.window_count}"

    def analyze(self) -> np.ndarray:
        self._map = transform.analyze(self.reference, self.window)
        return self._map.ravel()

    def reconstruct(self, flat: np.ndarray) -> np.ndarray:
        coeffs = transform.CoefficientMap.from_flat(flat, self.geometry, "pgbz")
        # magnitude thresholding can split a conjugate pair at the threshold
        # (floating-point near-ties), so allow a modest imaginary residual
        return transform.synthesize(coeffs, self.window, max_imag_rel=1e-2).samples


class _StftCodec:
    method = "stft"

    def __init__(self, signal: Signal, params: StftParams):
        self.window_len = params.window_len
        self.reference = signal
        self.note = f"stft_window={params.window_len} hop={params.window_len // baselines.HOP_DIVISOR}"

    def analyze(self) -> np.ndarray:
        self._map = baselines.stft_analyze(self.reference, self.window_len)
        return self._map.values.ravel()

    def reconstruct(self, flat: np.ndarray) -> np.ndarray:
        masked = baselines.stft_with_values(self._map, flat.reshape(self._map.values.shape))
        return baselines.stft_synthesize(masked).samples


class _DwtCodec:
    method = "dwt"

    def __init__(self, signal: Signal, params: DwtParams):
        self.levels = params.levels
        self.reference = signal
        self.note = f"dwt_levels={params.levels}"

    def analyze(self) -> np.ndarray:
        self._coeffs = baselines.dwt_analyze(self.reference, self.levels)
        return np.concatenate([*self._coeffs.details, self._coeffs.approx])

    def reconstruct(self, flat: np.ndarray) -> np.ndarray:
        masked = baselines.dwt_with_values(self._coeffs, flat)
        return baselines.dwt_synthesize(masked).samples


_CODECS = {"pgbz": (_PgbzCodec, PgbzParams), "stft": (_StftCodec, StftParams), "dwt": (_DwtCodec, DwtParams)}


def sweep(
    signal: Signal,
    method: str,
    params=None,
    *,
    n_levels: int = 25,
    max_removed: float = MAX_REMOVED_CAP,
    keep_reconstructions: bool = False,
    source: str = "<memory>",
) -> CompressionReport:
    """Run the full threshold sweep for one method.

    Level 0 keeps the whole map (threshold 0 removes only exact zeros); each
    further level removes one subspace of unique magnitudes, up to the
    ``max_removed`` cap. Wall times cover analyze + mask + reconstruct (plus
    the optional gate), never scoring or I/O.
    """
    if method not in _CODECS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if not 0 < max_removed <= MAX_REMOVED_CAP:
        raise ValueError(f"max_removed must be in (0, {MAX_REMOVED_CAP}], got {max_removed}")
    codec_cls, params_cls = _CODECS[method]
    codec = codec_cls(signal, params if params is not None else params_cls())

    start = time.perf_counter()
    full = codec.analyze()
    analyze_time = time.perf_counter() - start

    total = full.size
    thresholds = np.concatenate([[0.0], threshold_schedule(full, n_levels)])
    gate = getattr(params, "nra", None) if method == "pgbz" else None
    reference = codec.reference

    records: list[LevelRecord] = []
    recons: list[np.ndarray] = []
    cumulative = analyze_time
    previous_mse = -np.inf
    non_monotone: list[int] = []
    for level, threshold in enumerate(thresholds):
        tick = time.perf_counter()
        masked, nonzero = apply_threshold(full, threshold)
        removed = 1.0 - nonzero / total
        if removed > max_removed:
            break
        samples = codec.reconstruct(masked)
        if gate is not None:
            samples = noisegate.gate_artifacts(reference, Signal(samples, reference.sample_rate), gate).samples
        elapsed = time.perf_counter() - tick
        cumulative += elapsed
        mse = _mse_percent(reference.samples, samples)
        if mse < previous_mse:
            non_monotone.append(level)
        previous_mse = mse
        records.append(
            LevelRecord(level, float(threshold), nonzero, removed, mse, analyze_time + elapsed, cumulative)
        )
        if keep_reconstructions:
            recons.append(samples)
    return CompressionReport(
        method=method,
        source=source,
        total_coefficients=total,
        levels=tuple(records),
        geometry_note=codec.note,
        non_monotone_levels=tuple(non_monotone),
        reconstructions=tuple(recons) if keep_reconstructions else None,
    )


def nmse_product(mse_percent_value: float, log10_nonzero: float, cpu_seconds: float) -> float:
    """Final-score product: error * log10(coefficient count) * CPU seconds."""
    return mse_percent_value * log10_nonzero * cpu_seconds


def nmse(report: CompressionReport) -> float:
    """Normalized final score of a sweep, taken at its last (most compressed)
    level with the cumulative time needed to reach it."""
    if not report.levels:
        raise ValueError("report has no levels")
    last = report.levels[-1]
    if last.nonzero < 1:
        raise ValueError("final level retains no coefficients")
    if last.mse_percent == 0.0:
        return 0.0
    return nmse_product(last.mse_percent, float(np.log10(last.nonzero)), last.cumulative_time_s)


def save_report_csv(reports, path) -> None:
    """Serialize one report or an iterable of reports, one row per level."""
    if isinstance(reports, CompressionReport):
        reports = [reports]
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(REPORT_COLUMNS)
        for report in reports:
            for record in report.levels:
                writer.writerow(
                    [
                        report.method,
                        record.level,
                        record.nonzero,
                        repr(record.removed_fraction),
                        repr(record.mse_percent),
                        repr(record.wall_time_s),
                    ]
                )


def load_report_rows(path) -> list[dict]:
    """Parse a report CSV back into typed row dictionaries."""
    rows = []
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if tuple(reader.fieldnames or ()) != REPORT_COLUMNS:
            raise ValueError(f"unexpected report columns: {reader.fieldnames}")
        for raw in reader:
            rows.append(
                {
                    "method": raw["method"],
                    "level": int(raw["level"]),
                    "nonzero": int(raw["nonzero"]),
                    "removed_frac": float(raw["removed_frac"]),
                    "mse_percent": float(raw["mse_percent"]),
                    "wall_s": float(raw["wall_s"]),
                }
            )
    return rows
