"""Critically sampled periodic Gabor audio compression via the fast Zak
transform, with a dense-basis oracle, STFT and wavelet baselines, a spectral
noise gate, and a shared compression-sweep harness."""

from .baselines import (
    DwtCoeffs,
    StftMap,
    daubechies_filters,
    dwt_analyze,
    dwt_synthesize,
    stft_analyze,
    stft_synthesize,
)
from .compression import (
    CompressionReport,
    DwtParams,
    LevelRecord,
    PgbzParams,
    StftParams,
    apply_threshold,
    load_report_rows,
    mse_percent,
    nmse,
    nmse_product,
    save_report_csv,
    sweep,
    threshold_schedule,
)
from .core import (
    LatticeGeometry,
    Signal,
    Window,
    chirp,
    derive_geometry,
    dirichlet,
    discrete_inner,
    make_test_signal,
    noise_burst,
    periodized_gaussian,
    sine_glitch,
    wrapped_gaussian,
)
from .dense import (
    DenseBasis,
    build_basis,
    direct_coefficients,
    exchange_coefficients,
    expand,
    porat_coefficients,
    porat_reconstruct,
)
from .audio_io import load_wav, save_wav
from .noisegate import (
    GateParams,
    NoiseProfile,
    apply_filter,
    gate_artifacts,
    learn_profile,
    load_profile_csv,
    porat_vs_nra_report,
    save_profile_csv,
)
from .transform import (
    CoefficientMap,
    WindowZakZeroError,
    analyze,
    residual_period_check,
    synthesize,
)
from .zak import ZakMap, min_abs, semi_periodicity_check, zak_forward, zak_inverse

__version__ = "0.1.0"
