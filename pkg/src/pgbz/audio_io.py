"""WAV ingestion and export.

Accepts 16-bit integer PCM and 32-bit float RIFF files, mono or stereo;
stereo is averaged to mono. Samples use the symmetric 1/32768 scaling, so a
PCM load/save round trip is exact to one quantization step. Out-of-range
samples are clipped on export and counted.
"""

from __future__ import annotations

import os
import warnings

import numpy as np
from scipy.io import wavfile

from .core import Signal

__all__ = ["load_wav", "save_wav"]

_PCM_SCALE = 32768.0


def _validate_riff(path) -> None:
    # scipy can silently truncate a short data chunk; check sizes up front.
    size = os.path.getsize(path)
    with open(path, "rb") as handle:
        head = handle.read(12)
    if len(head) < 12 or head[:4] != b"RIFF" or head[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")
    declared = int.from_bytes(head[4:8], "little") + 8
    if size < declared:
        raise ValueError(f"{path}: truncated WAV file ({size} bytes, header declares {declared})")


def load_wav(path) -> Signal:
    """Read a WAV file into a mono [-1, 1] signal."""
    _validate_riff(path)
    try:
        rate, data = wavfile.read(path)
    except Exception as exc:
        raise ValueError(f"{path}: cannot parse WAV file: {exc}") from exc
    if data.dtype == np.int16:
        samples = data / _PCM_SCALE
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise ValueError(
            f"{path}: unsupported WAV encoding {data.dtype}; expected 16-bit PCM or 32-bit float"
        )
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    if samples.size == 0:
        raise ValueError(f"{path}: WAV file contains no samples")
    return Signal(samples, float(rate))


def save_wav(signal: Signal, path) -> int:
    """Write 16-bit PCM; returns (and warns about) the clipped-sample count."""
    scaled = np.rint(signal.samples * _PCM_SCALE)
    clipped = int(np.count_nonzero((scaled > 32767.0) | (scaled < -32768.0)))
    if clipped:
        warnings.warn(f"{path}: clipped {clipped} out-of-range samples", stacklevel=2)
    data = np.clip(scaled, -32768.0, 32767.0).astype(np.int16)
    wavfile.write(path, int(round(signal.sample_rate)), data)
    return clipped
