import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pgbz import LatticeGeometry, Signal, Window, build_basis, periodized_gaussian

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def geometry225():
    return LatticeGeometry(15, 15, 1.0)


@pytest.fixture(scope="session")
def window225(geometry225):
    return periodized_gaussian(geometry225)


@pytest.fixture(scope="session")
def basis225(geometry225, window225):
    return build_basis(geometry225, window225)


@pytest.fixture(scope="session")
def geometry961():
    return LatticeGeometry(31, 31, 1.0)


@pytest.fixture(scope="session")
def window961(geometry961):
    return periodized_gaussian(geometry961)


@pytest.fixture(scope="session")
def basis961(geometry961, window961):
    return build_basis(geometry961, window961)


def damped_harmonics(length: int, rate: float, seed: int = 0, f0: float = 110.0,
                     noise: float = 2e-4) -> Signal:
    """Plucked-string-like fixture: damped inharmonic partials over a pink
    noise floor; stands in for recorded audio."""
    rng = np.random.default_rng(seed)
    t = np.arange(length) / rate
    x = np.zeros(length)
    for h in range(1, 13):
        x += (0.5 / h) * np.exp(-t * h / 1.5) * np.sin(
            2 * np.pi * f0 * h * (1 + 2e-4 * h * h) * t + rng.uniform(0, 2 * np.pi)
        )
    if noise:
        z = rng.standard_normal(length)
        spectrum = np.fft.rfft(z)
        spectrum /= np.sqrt(np.maximum(np.fft.rfftfreq(length, 1 / rate), 1.0))
        z = np.fft.irfft(spectrum, n=length)
        x += noise * z / z.std()
    x *= 0.8 / np.abs(x).max()
    return Signal(x, rate)


def even_window(window_len: int = 16, window_count: int = 16) -> Window:
    """Geometry-violating test construction: even cell size with the Gaussian
    centred on a grid point puts a Zak zero exactly on the grid."""
    from pgbz import wrapped_gaussian

    geometry = LatticeGeometry(window_len, window_count, 1.0)
    sigma = window_len / np.sqrt(2 * np.pi)
    values = wrapped_gaussian(geometry.n_total, window_len // 2, sigma)
    values /= np.linalg.norm(values)
    return Window(values, geometry)
