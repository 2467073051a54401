"""Command line front end.

Subcommands:
  compress   one method's threshold sweep on a WAV file -> report CSV
             (optionally per-level reconstructed WAVs)
  compare    all selected methods on one file -> merged report CSV, suitable
             for plotting error against nonzero count (inverse-log x axis)
  synthetic  write the deterministic test fixtures as WAV files
  oracle     dense-basis validation battery and the projection-vs-gate
             coefficient comparison, for small lattices

Options may also come from a ``key=value`` config file (``--config``); flags
override file values. Exit status is 0 on success, 2 on a usage/config error,
1 on a failed oracle check.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import compression, dense, noisegate, transform
from .audio_io import load_wav, save_wav
from .core import (
    LatticeGeometry,
    Signal,
    chirp,
    derive_geometry,
    noise_burst,
    periodized_gaussian,
    sine_glitch,
)
from .zak import min_abs, zak_forward

__all__ = ["RunConfig", "main", "build_parser"]


@dataclass
class RunConfig:
    input: Path | None = None
    methods: tuple[str, ...] = compression.METHODS
    n_levels: int = 25
    max_removed: float = 0.96
    dwt_levels: int = 8
    stft_window: int = 1024
    nra: bool = False
    nra_window: int = 1024
    k_sigma: float = 2.0
    reduction_db: float = 12.0
    sensitivity: float = 1.0
    sigma: float | None = None
    out_dir: Path = Path(".")
    seed: int = 0
    save_wavs: bool = False

    def validate(self) -> None:
        if not 0 < self.max_removed <= compression.MAX_REMOVED_CAP:
            raise ValueError(
                f"max-removed must be in (0, {compression.MAX_REMOVED_CAP}], got {self.max_removed}"
            )
        if not self.methods:
            raise ValueError("at least one method must be selected")
        for method in self.methods:
            if method not in compression.METHODS:
                raise ValueError(f"unknown method {method!r}; choose from {compression.METHODS}")
        if self.n_levels < 1:
            raise ValueError("levels must be at least 1")

    def method_params(self, method: str):
        if method == "pgbz":
            gate = (
                noisegate.GateParams(
                    self.nra_window, self.k_sigma, self.reduction_db, self.sensitivity
                )
                if self.nra
                else None
            )
            return compression.PgbzParams(sigma=self.sigma, nra=gate)
        if method == "stft":
            return compression.StftParams(window_len=self.stft_window)
        return compression.DwtParams(levels=self.dwt_levels)


_CONFIG_TYPES = {
    "input": Path,
    "methods": lambda text: tuple(part.strip() for part in text.split(",") if part.strip()),
    "n_levels": int,
    "max_removed": float,
    "dwt_levels": int,
    "stft_window": int,
    "nra": lambda text: text.strip().lower() in ("1", "true", "yes", "on"),
    "nra_window": int,
    "k_sigma": float,
    "reduction_db": float,
    "sensitivity": float,
    "sigma": float,
    "out_dir": Path,
    "seed": int,
    "save_wavs": lambda text: text.strip().lower() in ("1", "true", "yes", "on"),
}


_CONFIG_ALIASES = {"levels": "n_levels", "method": "methods"}


def _read_config_file(path: Path) -> dict:
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip().replace("-", "_")
        key = _CONFIG_ALIASES.get(key, key)
        if key not in _CONFIG_TYPES:
            raise ValueError(f"{path}:{lineno}: unknown option {key!r}")
        values[key] = _CONFIG_TYPES[key](raw.strip())
    return values


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value config file; flags override it")
    parser.add_argument("--levels", dest="n_levels", type=int, help="threshold subspaces (default 25)")
    parser.add_argument("--max-removed", dest="max_removed", type=float,
                        help="stop once this fraction of coefficients is removed (<= 0.96)")
    parser.add_argument("--dwt-levels", dest="dwt_levels", type=int, help="wavelet depth, 5..10 (default 8)")
    parser.add_argument("--stft-window", dest="stft_window", type=int, help="STFT window length (default 1024)")
    parser.add_argument("--nra", action="store_true", default=None,
                        help="gate the reconstructions with the spectral noise filter")
    parser.add_argument("--nra-window", dest="nra_window", type=int, help="gate STFT window (default 1024)")
    parser.add_argument("--k-sigma", dest="k_sigma", type=float, help="gate threshold sigmas (default 2)")
    parser.add_argument("--reduction-db", dest="reduction_db", type=float, help="gate attenuation (default 12)")
    parser.add_argument("--sensitivity", dest="sensitivity", type=float, help="gate threshold scale (default 1)")
    parser.add_argument("--sigma", type=float, help="analysis window width in seconds (default: balanced)")
    parser.add_argument("--out-dir", dest="out_dir", type=Path, help="output directory (default .)")
    parser.add_argument("--seed", type=int, help="seed for synthetic signals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgbz", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compress = sub.add_parser("compress", help="one method's sweep on a WAV file")
    p_compress.add_argument("input", type=Path)
    p_compress.add_argument("--method", required=True, choices=compression.METHODS)
    p_compress.add_argument("--save-wavs", action="store_true", default=None,
                            help="also write one reconstructed WAV per level")
    _add_common(p_compress)

    p_compare = sub.add_parser("compare", help="sweep several methods, merged CSV")
    p_compare.add_argument("input", type=Path)
    p_compare.add_argument("--method", action="append", choices=compression.METHODS,
                           help="repeatable; default: all three")
    _add_common(p_compare)

    p_synth = sub.add_parser("synthetic", help="write deterministic fixture WAVs")
    p_synth.add_argument("--duration", type=float, default=2.0, help="seconds (default 2)")
    p_synth.add_argument("--rate", type=float, default=22050.0, help="sample rate (default 22050)")
    _add_common(p_synth)

    p_oracle = sub.add_parser("oracle", help="dense-basis validation battery")
    p_oracle.add_argument("--n", type=int, default=225, help="lattice size (default 225)")
    p_oracle.add_argument("--nra-report", type=Path, default=None,
                          help="also write the projection-vs-gate coefficient CSV here")
    _add_common(p_oracle)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    if getattr(args, "config", None) is not None:
        for key, value in _read_config_file(args.config).items():
            setattr(config, key, value)
    names = {f.name for f in fields(RunConfig)}
    for key, value in vars(args).items():
        if key in names and value is not None:
            setattr(config, key, value)
    if getattr(args, "method", None):
        method = args.method
        config.methods = tuple(method) if isinstance(method, list) else (method,)
    config.validate()
    return config


def _trimmed(signal: Signal) -> tuple[Signal, LatticeGeometry]:
    # one trim for every method keeps the comparison sample-for-sample fair
    geometry, trimmed_len = derive_geometry(len(signal), signal.sample_rate)
    return Signal(signal.samples[:trimmed_len], signal.sample_rate), geometry


def _run_sweeps(config: RunConfig, methods) -> tuple[list[compression.CompressionReport], Signal]:
    signal = load_wav(config.input)
    trimmed, _ = _trimmed(signal)
    reports = []
    for method in methods:
        reports.append(
            compression.sweep(
                trimmed,
                method,
                config.method_params(method),
                n_levels=config.n_levels,
                max_removed=config.max_removed,
                keep_reconstructions=config.save_wavs,
                source=str(config.input),
            )
        )
    return reports, trimmed


def cmd_compress(config: RunConfig) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    method = config.methods[0]
    reports, trimmed = _run_sweeps(config, [method])
    report = reports[0]
    stem = config.input.stem
    out_csv = config.out_dir / f"{stem}.{method}.report.csv"
    compression.save_report_csv(report, out_csv)
    print(f"wrote {out_csv} ({len(report.levels)} levels)")
    if config.save_wavs and report.reconstructions is not None:
        for record, samples in zip(report.levels, report.reconstructions):
            out_wav = config.out_dir / f"{stem}.{method}.L{record.level}.wav"
            save_wav(Signal(samples, trimmed.sample_rate), out_wav)
        print(f"wrote {len(report.reconstructions)} reconstructed WAVs")
    return 0


def cmd_compare(config: RunConfig) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    reports, _ = _run_sweeps(config, config.methods)
    stem = config.input.stem
    out_csv = config.out_dir / f"{stem}.compare.report.csv"
    compression.save_report_csv(reports, out_csv)
    for report in reports:
        last = report.levels[-1]
        print(
            f"{report.method}: {len(report.levels)} levels, "
            f"final nonzero {last.nonzero}, final error {last.mse_percent:.4g}%, "
            f"score {compression.nmse(report):.4g}"
        )
    print(f"wrote {out_csv}")
    return 0


def cmd_synthetic(config: RunConfig, duration: float, rate: float) -> int:
    config.out_dir.mkdir(parents=True, exist_ok=True)
    length = int(round(duration * rate))
    fixtures = {
        "sine_glitch": sine_glitch(length, rate),
        "chirp": chirp(length, rate),
        "noise_burst": noise_burst(length, rate, seed=config.seed),
    }
    for name, signal in fixtures.items():
        path = config.out_dir / f"{name}.wav"
        save_wav(signal, path)
        print(f"wrote {path}")
    return 0


def cmd_oracle(config: RunConfig, n: int, nra_report: Path | None) -> int:
    geometry, _ = derive_geometry(n)
    window = periodized_gaussian(geometry, config.sigma)
    size = geometry.n_total
    print(f"lattice: window_len={geometry.window_len} window_count={geometry.window_count} n={size}")

    checks: list[tuple[str, float, float]] = []  # (name, value, bound)
    basis = dense.build_basis(geometry, window)
    eye = np.eye(size)
    checks.append(
        ("biorthogonality max|G^H D - I|",
         float(np.abs(basis.gabor.conj().T @ basis.dual - eye).max()), 1e-8)
    )
    z_window = zak_forward(window.values, geometry)
    z_dual = zak_forward(basis.dual[:, 0], geometry)
    checks.append(
        ("window-dual Zak product max|Zw* Zd - 1/L|",
         float(np.abs(z_window.values.conj() * z_dual.values - 1.0 / geometry.window_len).max()),
         1e-8)
    )
    checks.append(("window Zak min/max (want > 1e-4)",
                   min_abs(z_window) / float(np.abs(z_window.values).max()), None))

    rng = np.random.default_rng(config.seed)
    sample = Signal(rng.standard_normal(size), geometry.sample_rate)
    fast = transform.analyze(sample, window).ravel()
    slow = dense.exchange_coefficients(sample, basis).ravel()
    checks.append(("fast vs dense analysis max diff", float(np.abs(fast - slow).max()), 1e-8))
    round_trip = transform.synthesize(transform.analyze(sample, window), window)
    checks.append(
        ("round-trip relative error",
         float(np.linalg.norm(round_trip.samples - sample.samples) / np.linalg.norm(sample.samples)),
         1e-10)
    )

    glitchy = sine_glitch(size, geometry.sample_rate, frequency=size / 16.0)
    coeffs = dense.exchange_coefficients(glitchy, basis).ravel()
    order = np.argsort(np.abs(coeffs))[::-1]
    kept = order[: max(1, size // 25)]
    porat = dense.porat_reconstruct(glitchy, basis, kept)
    raw = (basis.dual[:, np.sort(kept)] @ coeffs[np.sort(kept)]).real
    err_porat = float(np.linalg.norm(glitchy.samples - porat.samples))
    err_raw = float(np.linalg.norm(glitchy.samples - raw))
    checks.append(("projection error minus raw error (want <= 0)", err_porat - err_raw, 1e-12))

    failed = 0
    for name, value, bound in checks:
        if bound is None:
            print(f"  INFO {name}: {value:.3e}")
            continue
        ok = value <= bound
        failed += 0 if ok else 1
        print(f"  {'PASS' if ok else 'FAIL'} {name}: {value:.3e} (bound {bound:.1e})")

    if nra_report is not None:
        masked, _ = compression.apply_threshold(coeffs, float(np.abs(coeffs[order[size // 25]])))
        raw_rec = (basis.dual @ masked).real
        residual = Signal(raw_rec - glitchy.samples, geometry.sample_rate)
        gate_window = min(config.nra_window, 8 * (len(residual) // 32))
        profile = noisegate.learn_profile(residual, gate_window, config.k_sigma)
        comparison = noisegate.porat_vs_nra_report(
            glitchy, basis, kept, profile,
            reduction_db=config.reduction_db, sensitivity=config.sensitivity,
        )
        np.savetxt(
            nra_report,
            comparison.rows(),
            delimiter=",",
            header="index,projection_re,projection_im,filtered_re,filtered_im",
            comments="",
        )
        print(
            f"  INFO projection-vs-gate correlations: "
            f"re={comparison.correlation_real:.4f} im={comparison.correlation_imag:.4f}"
        )
        print(f"wrote {nra_report}")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.command == "compress":
            return cmd_compress(config)
        if args.command == "compare":
            return cmd_compare(config)
        if args.command == "synthetic":
            return cmd_synthetic(config, args.duration, args.rate)
        return cmd_oracle(config, args.n, args.nra_report)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
