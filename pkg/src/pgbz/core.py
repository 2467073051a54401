"""Signal containers, lattice geometry, windows, and synthetic test signals.

Everything downstream works on a critically sampled time-frequency grid:
``window_count`` time cells of ``window_len`` samples each, one lattice
function per (cell, harmonic) pair, so ``n_total = window_len * window_count``
coefficients represent ``n_total`` samples. Basis math runs in sample units
(unit grid spacing, plain Euclidean inner products); physical seconds enter
only as bookkeeping through ``sample_rate`` / ``sample_spacing``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Signal",
    "LatticeGeometry",
    "Window",
    "derive_geometry",
    "dirichlet",
    "wrapped_gaussian",
    "periodized_gaussian",
    "discrete_inner",
    "make_test_signal",
    "sine_glitch",
    "chirp",
    "noise_burst",
]


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled real waveform, nominally in [-1, 1]."""

    samples: np.ndarray
    sample_rate: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must all be finite")
        if not self.sample_rate > 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", float(self.sample_rate))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        """Signal length in seconds."""
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class LatticeGeometry:
    """Critically sampled lattice: one coefficient per 2*pi of TF area.

    ``window_len`` is the number of samples per time cell (and the number of
    harmonic rows), ``window_count`` the number of time cells. The analysis
    pipeline requires ``window_len`` odd so that the window's Zak transform
    has no zero on the sampling grid; the constraint is enforced where the
    window is built, not here, so that plain Zak utilities remain usable on
    arbitrary (even included) cell sizes.
    """

    window_len: int
    window_count: int
    sample_spacing: float = 1.0  # seconds per sample

    def __post_init__(self) -> None:
        if self.window_len < 1 or self.window_count < 1:
            raise ValueError("window_len and window_count must be positive integers")
        if not self.sample_spacing > 0:
            raise ValueError("sample_spacing must be positive")

    @property
    def n_total(self) -> int:
        """Total number of samples / lattice coefficients."""
        return self.window_len * self.window_count

    @property
    def cell_time(self) -> float:
        """Duration of one time cell in seconds."""
        return self.window_len * self.sample_spacing

    @property
    def total_time(self) -> float:
        """Total covered duration in seconds."""
        return self.n_total * self.sample_spacing

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.sample_spacing


@dataclass(frozen=True)
class Window:
    """Unit-norm periodized window sampled on the full grid."""

    values: np.ndarray
    geometry: LatticeGeometry

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.geometry.n_total,):
            raise ValueError(
                f"window length {values.shape} does not match geometry "
                f"n_total={self.geometry.n_total}"
            )
        norm = np.linalg.norm(values)
        if not math.isfinite(norm) or abs(norm - 1.0) > 1e-6:
            raise ValueError(f"window must have unit norm, got {norm!r}")
        object.__setattr__(self, "values", values)


def derive_geometry(signal_len: int, sample_rate: float = 1.0) -> tuple[LatticeGeometry, int]:
    """Choose the lattice for a signal of ``signal_len`` samples.

    The cell size is the largest odd integer not exceeding sqrt(signal_len);
    the cell count is however many whole cells fit. Returns the geometry and
    the trimmed length ``window_len * window_count`` (strictly more than
    ``signal_len - 2 * window_len``); callers drop the trailing remainder.
    """
    if signal_len < 9:
        raise ValueError(f"need at least 9 samples to build a lattice, got {signal_len}")
    root = math.isqrt(signal_len)
    window_len = root if root % 2 == 1 else root - 1
    window_count = signal_len // window_len
    geometry = LatticeGeometry(window_len, window_count, 1.0 / sample_rate)
    return geometry, geometry.n_total


def dirichlet(i: int, t, geometry: LatticeGeometry):
    """Periodic sinc kernel centred on grid point ``i``, evaluated at time ``t``.

    ``t`` is in seconds (scalar or array), taken modulo the total duration by
    periodicity. The kernel peaks at sqrt(N/T) on its own grid point, vanishes
    on every other grid point, and the family over all centres is orthonormal
    on one period. The removable singularity at the centre is evaluated by
    its limit.
    """
    n = geometry.n_total
    total = geometry.total_time
    if not 0 <= i < n:
        raise ValueError(f"centre index {i} outside 0..{n - 1}")
    t_arr = np.asarray(t, dtype=np.float64)
    u = np.pi * (t_arr - i * geometry.sample_spacing) / total
    num = np.sin(n * u)
    den = np.sin(u)
    small = np.abs(den) < 1e-12
    ratio = np.where(
        small,
        n * np.cos(n * u) / np.where(small, np.cos(u), 1.0),
        num / np.where(small, 1.0, den),
    )
    out = np.exp(1j * u) * ratio / math.sqrt(total * n)
    if np.isscalar(t) or t_arr.ndim == 0:
        return complex(out)
    return out


def discrete_inner(f, g) -> complex:
    """Conjugated dot product sum_i conj(f_i) g_i of equal-length vectors.

    With unit sample spacing this equals the continuous inner product of the
    periodic band-limited interpolants of ``f`` and ``g`` over one period.
    """
    f = np.asarray(f)
    g = np.asarray(g)
    if f.ndim != 1 or f.shape != g.shape:
        raise ValueError(f"length mismatch: {f.shape} vs {g.shape}")
    return complex(np.vdot(f, g))


def wrapped_gaussian(n_total: int, center: float, sigma: float, tail: float = 1e-18) -> np.ndarray:
    """Unnormalized Gaussian wrapped onto a cyclic grid of ``n_total`` samples.

    Wrap terms are accumulated until a whole ring contributes less than
    ``tail`` relative to the unit peak, i.e. the periodization has converged
    to (well below) double precision.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    idx = np.arange(n_total, dtype=np.float64)
    two_var = 2.0 * sigma * sigma
    values = np.exp(-((idx - center) ** 2) / two_var)
    k = 1
    while True:
        ring = np.exp(-((idx - center + k * n_total) ** 2) / two_var)
        ring += np.exp(-((idx - center - k * n_total) ** 2) / two_var)
        values += ring
        if ring.max() < tail:
            break
        k += 1
    return values


def periodized_gaussian(geometry: LatticeGeometry, sigma: float | None = None) -> Window:
    """Unit-norm wrapped Gaussian centred on a grid point of the first cell.

    ``sigma`` is in seconds; the default ``cell_time / sqrt(2*pi)`` balances
    the window's time and frequency extents against the cell aspect ratio at
    critical sampling. Centre sample (window_len - 1) / 2 together with odd
    ``window_len`` keeps the window's Zak transform clear of zeros on the
    grid, which synthesis relies on.
    """
    if geometry.window_len % 2 == 0:
        raise ValueError(
            "window_len must be odd: an even cell size puts a zero of the "
            "window's Zak transform on the sampling grid"
        )
    sigma_sec = geometry.cell_time / math.sqrt(2.0 * math.pi) if sigma is None else sigma
    if sigma_sec <= 0:
        raise ValueError("sigma must be positive")
    sigma_samples = sigma_sec / geometry.sample_spacing
    center = (geometry.window_len - 1) / 2  # a grid point, since window_len is odd
    values = wrapped_gaussian(geometry.n_total, center, sigma_samples)
    values /= np.linalg.norm(values)
    return Window(values, geometry)


def sine_glitch(
    length: int,
    sample_rate: float,
    *,
    frequency: float = 440.0,
    amplitude: float = 0.8,
    glitch_pos: int | None = None,
    glitch_width: float = 2.0,
    glitch_amp: float = 0.5,
) -> Signal:
    """Single-frequency sine with a localized additive Gaussian spike."""
    if length < 9:
        raise ValueError("length must be at least 9")
    if frequency < 0:
        raise ValueError("frequency must be non-negative")
    if glitch_width <= 0:
        raise ValueError("glitch_width must be positive")
    pos = length // 2 if glitch_pos is None else glitch_pos
    if not 0 <= pos < length:
        raise ValueError(f"glitch position {pos} outside the signal")
    t = np.arange(length) / sample_rate
    x = amplitude * np.sin(2.0 * np.pi * frequency * t)
    if glitch_amp != 0.0:
        x += glitch_amp * np.exp(-((np.arange(length) - pos) ** 2) / (2.0 * glitch_width**2))
    return Signal(x, sample_rate)


def chirp(
    length: int,
    sample_rate: float,
    *,
    f0: float = 50.0,
    f1: float = 2000.0,
    amplitude: float = 0.8,
) -> Signal:
    """Linear chirp sweeping f0 to f1 over the full duration."""
    if length < 9:
        raise ValueError("length must be at least 9")
    if f0 < 0 or f1 < 0:
        raise ValueError("chirp frequencies must be non-negative")
    t = np.arange(length) / sample_rate
    duration = length / sample_rate
    phase = 2.0 * np.pi * (f0 * t + (f1 - f0) * t**2 / (2.0 * duration))
    return Signal(amplitude * np.sin(phase), sample_rate)


def noise_burst(
    length: int,
    sample_rate: float,
    *,
    seed: int = 0,
    burst_start: int | None = None,
    burst_len: int | None = None,
    amplitude: float = 0.2,
) -> Signal:
    """Seeded Gaussian noise confined to a burst window (zeros elsewhere)."""
    if length < 9:
        raise ValueError("length must be at least 9")
    start = length // 4 if burst_start is None else burst_start
    span = length // 2 if burst_len is None else burst_len
    if not 0 <= start < length or span < 1 or start + span > length:
        raise ValueError("burst window must lie inside the signal")
    rng = np.random.default_rng(seed)
    x = np.zeros(length)
    x[start : start + span] = amplitude * rng.standard_normal(span)
    return Signal(x, sample_rate)


_GENERATORS = {"sine_glitch": sine_glitch, "chirp": chirp, "noise_burst": noise_burst}


def make_test_signal(kind: str, length: int, sample_rate: float, **params) -> Signal:
    """Dispatch to one of the deterministic synthetic generators."""
    try:
        generator = _GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown test signal kind {kind!r}; choose from {sorted(_GENERATORS)}") from None
    return generator(length, sample_rate, **params)
