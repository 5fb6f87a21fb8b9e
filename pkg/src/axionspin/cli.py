"""Command-line pipeline: simulate, filter, psd, snr, scan, demo.

Each stage reads the validated run configuration, writes its artifacts into
the run directory, and records their checksums in ``manifest.json``.  The
``demo`` command chains every stage and emits SVG figures of the time
domain, spectra, cumulative power, dynamic SNR, and sensitivity curves.

Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 I/O
error.  On failure a machine-readable ``error.json`` is left in the run
directory when one exists.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, io, plots
from .config import (ConfigError, RunConfig, default_snr_bands, load_config)
from .filters import design_bandpass, filter_causal, filter_zero_phase, \
    save_realization
from .manifest import MANIFEST_NAME, RunManifest, config_hash
from .noise import compose_noise
from .physics import (apply_decoherence, axion_frequency, larmor_frequency,
                      sigma_x_trace, sigma_z_trace)
from .sensitivity import (CURRENT_DEVICE_SCENARIO, NEXT_GEN_SCENARIO,
                          DfszModel, scan, snr_amp, stellar_cooling_limit)
from .spectral import cumulative_power, detect_sidebands, dynamic_snr, \
    estimate_psd, snr_db

ENV_OUTPUT_ROOT = "AXIONSPIN_OUTPUT_ROOT"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def resolve_out_dir(cfg: RunConfig) -> Path:
    """Unique, deterministic run directory keyed on (config, seed)."""
    if cfg.out_dir:
        return Path(cfg.out_dir)
    root = Path(os.environ.get(ENV_OUTPUT_ROOT, "runs"))
    return root / f"run-{config_hash(cfg)[:10]}-seed{cfg.seed}"


def _trace_path(out_dir: Path, stem: str, cfg: RunConfig) -> Path:
    ext = ".csv" if cfg.trace_format == "csv" else ".bin"
    return out_dir / (stem + ext)


def _read_stage_trace(out_dir: Path, stem: str, cfg: RunConfig):
    path = _trace_path(out_dir, stem, cfg)
    if not path.exists():
        raise FileNotFoundError(
            f"{path} not found; run the simulate stage into this directory first")
    return io.read_trace(path)


def stage_simulate(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    clean = apply_decoherence(
        sigma_x_trace(cfg.axion, cfg.qubit, cfg.grid, cfg.amplitude_scale),
        cfg.qubit, "transverse")
    noise = compose_noise(cfg.grid, cfg.noise)
    noisy = clean.with_values(clean.values + noise.values, name="sigma_x_noisy")
    sz_clean = sigma_z_trace(1 / np.sqrt(2), 1 / np.sqrt(2), cfg.grid)
    sz_noisy = sz_clean.with_values(sz_clean.values + noise.values,
                                    name="sigma_z_noisy")
    files = {}
    for stem, trace, label in (
            ("sigma_x_clean", clean, "sigma_x"),
            ("sigma_x_noisy", noisy, "sigma_x"),
            ("sigma_z_clean", sz_clean, "sigma_z"),
            ("sigma_z_noisy", sz_noisy, "sigma_z"),
            ("noise", noise, "noise")):
        files[stem] = io.write_trace(out_dir / stem, trace, cfg.trace_format,
                                     label)
    return files


def stage_filter(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    realization = design_bandpass(cfg.bandpass, cfg.grid.sample_rate)
    files = {}
    for stem in ("sigma_x_noisy", "sigma_z_noisy"):
        trace = _read_stage_trace(out_dir, stem, cfg)
        base = stem.replace("_noisy", "")
        causal = filter_causal(trace, realization)
        zerophase = filter_zero_phase(trace, realization)
        files[f"{base}_causal"] = io.write_trace(
            out_dir / f"{base}_causal", causal, cfg.trace_format, base)
        files[f"{base}_zerophase"] = io.write_trace(
            out_dir / f"{base}_zerophase", zerophase, cfg.trace_format, base)
    filter_path = out_dir / "filter.json"
    save_realization(realization, filter_path)
    files["filter"] = filter_path
    return files


def stage_psd(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    files = {}
    window = cfg.analysis.psd_window
    psds = {}
    for stem, out in (("sigma_x_noisy", "psd_noisy"),
                      ("sigma_x_zerophase", "psd_filtered"),
                      ("noise", "psd_noise")):
        trace = _read_stage_trace(out_dir, stem, cfg)
        psd = estimate_psd(trace, window=window, segment_len=len(trace),
                           overlap=0.0)
        path = out_dir / f"{out}.csv"
        io.write_psd_csv(path, psd)
        files[out] = path
        psds[out] = psd

    f_main = larmor_frequency(cfg.qubit)
    f_axion = axion_frequency(cfg.axion)
    report = detect_sidebands(psds["psd_filtered"], f_main, f_axion,
                              cfg.analysis.n_max)
    report_path = out_dir / "sidebands.json"
    io.write_sideband_json(report_path, report)
    files["sidebands"] = report_path

    curve = cumulative_power(psds["psd_filtered"])
    cumulative_path = out_dir / "cumulative_power.csv"
    io.write_cumulative_csv(cumulative_path, psds["psd_filtered"], curve)
    files["cumulative"] = cumulative_path
    return files


def stage_snr(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    trace = _read_stage_trace(out_dir, "sigma_x_zerophase", cfg)
    f_main = larmor_frequency(cfg.qubit)
    f_axion = axion_frequency(cfg.axion)
    sideband_band, noise_band = default_snr_bands(
        f_main, f_axion, cfg.analysis.band_fraction)
    series = dynamic_snr(trace, cfg.analysis.window, sideband_band,
                         noise_band, hop=cfg.analysis.hop)
    series_path = out_dir / "dynamic_snr.csv"
    io.write_dynamic_snr_csv(series_path, series)

    amp = snr_amp(cfg.scenario, cfg.axion, cfg.qubit)
    summary = {
        "dynamic_mean_db": series.mean_db(),
        "dynamic_min_db": float(np.min(series.values)),
        "dynamic_max_db": float(np.max(series.values)),
        "window": series.window,
        "hop": series.hop,
        "sideband_band_hz": list(series.sideband_band),
        "noise_band_hz": list(series.noise_band),
        "scenario_snr_amp": amp,
        "scenario_snr_db": snr_db(amp) if amp > 0 else None,
    }
    summary_path = out_dir / "snr_summary.json"
    io.write_json(summary_path, summary)
    return {"dynamic_snr": series_path, "snr_summary": summary_path}


def stage_scan(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    scenarios = {"current": CURRENT_DEVICE_SCENARIO,
                 "next_gen": NEXT_GEN_SCENARIO}
    model = DfszModel(tan_beta_a=1.0, f_a=1e9, variant="I")
    masses = np.logspace(-6, -3, 61)
    rows = scan(masses, scenarios, model, rho_a=cfg.axion.rho_a,
                v=cfg.axion.v, cos_theta0=cfg.axion.cos_theta0)
    table_path = out_dir / "sensitivity.csv"
    io.write_scan_csv(table_path, rows)
    summary = {
        "scenarios": {name: {"Q": s.Q, "N": s.N, "t_s": s.t,
                             "eta_B_t_per_sqrt_hz": s.eta_B, "T2_s": s.T2,
                             "entangled": s.entangled}
                      for name, s in scenarios.items()},
        "dfsz": {"variant": model.variant, "f_a_gev": model.f_a,
                 "tan_beta_a_range": [0.1, 50.0]},
        "stellar_cooling_g_ae": stellar_cooling_limit(),
    }
    summary_path = out_dir / "scan_summary.json"
    io.write_json(summary_path, summary)
    return {"sensitivity": table_path, "scan_summary": summary_path}


def stage_plots(cfg: RunConfig, out_dir: Path) -> dict[str, Path]:
    files = {}
    f_main = larmor_frequency(cfg.qubit)
    f_axion = axion_frequency(cfg.axion)
    lines = {"carrier": f_main}
    for n in range(1, cfg.analysis.n_max + 1):
        lines[f"-{n}"] = f_main - n * f_axion
        lines[f"+{n}"] = f_main + n * f_axion

    noisy = _read_stage_trace(out_dir, "sigma_x_noisy", cfg)
    zerophase = _read_stage_trace(out_dir, "sigma_x_zerophase", cfg)
    clean = _read_stage_trace(out_dir, "sigma_x_clean", cfg)
    path = out_dir / "fig_time_domain.svg"
    plots.plot_time_domain(path, noisy.times(), {
        "noisy": noisy.values, "filtered": zerophase.values,
        "clean": clean.values}, title="Transverse polarization")
    files["fig_time_domain"] = path

    def load_psd(name):
        data = np.loadtxt(out_dir / f"{name}.csv", delimiter=",", skiprows=1)
        return data[:, 0], data[:, 1]

    path = out_dir / "fig_psd.svg"
    plots.plot_psd(path, {"noisy": load_psd("psd_noisy"),
                          "filtered": load_psd("psd_filtered")},
                   lines=lines, title="Received-signal PSD")
    files["fig_psd"] = path

    path = out_dir / "fig_noise_psd.svg"
    plots.plot_psd(path, {"noise": load_psd("psd_noise")},
                   lines={"carrier": f_main}, title="Noise-only PSD")
    files["fig_noise_psd"] = path

    cumulative = np.loadtxt(out_dir / "cumulative_power.csv", delimiter=",",
                            skiprows=1)
    path = out_dir / "fig_cumulative_power.svg"
    plots.plot_cumulative(path, cumulative[:, 0], cumulative[:, 1], lines)
    files["fig_cumulative_power"] = path

    snr_data = np.loadtxt(out_dir / "dynamic_snr.csv", delimiter=",",
                          skiprows=1)
    path = out_dir / "fig_dynamic_snr.svg"
    plots.plot_dynamic_snr(path, snr_data[:, 0], snr_data[:, 1],
                           threshold_db=snr_db(5.0))
    files["fig_dynamic_snr"] = path

    scan_rows = _reload_scan_rows(out_dir)
    path = out_dir / "fig_sensitivity.svg"
    plots.plot_sensitivity(path, scan_rows,
                           stellar_limit=stellar_cooling_limit())
    files["fig_sensitivity"] = path
    return files


def _reload_scan_rows(out_dir: Path):
    from .sensitivity import ScanRow

    with open(out_dir / "sensitivity.csv") as fh:
        header = fh.readline().strip().split(",")
        rows = []
        names = [c[len("g_ae_limit_"):] for c in header
                 if c.startswith("g_ae_limit_")]
        for line in fh:
            vals = [float(x) for x in line.strip().split(",")]
            rows.append(ScanRow(
                m_a_ev=vals[0], f_axion_hz=vals[1],
                g_ae_limits=dict(zip(names, vals[2:2 + len(names)])),
                dfsz_low=vals[-3], dfsz_mid=vals[-2], dfsz_high=vals[-1]))
    return rows


STAGES = {
    "simulate": (stage_simulate,),
    "filter": (stage_filter,),
    "psd": (stage_psd,),
    "snr": (stage_snr,),
    "scan": (stage_scan,),
    "demo": (stage_simulate, stage_filter, stage_psd, stage_snr, stage_scan,
             stage_plots),
}


def run_command(command: str, cfg: RunConfig, defaulted: list[str]) -> Path:
    """Run one pipeline command, returning the run directory."""
    out_dir = resolve_out_dir(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    if (out_dir / MANIFEST_NAME).exists():
        manifest = RunManifest.load(out_dir)
        if manifest.config_sha256 != config_hash(cfg):
            manifest = RunManifest.for_run(cfg, defaulted)
    else:
        manifest = RunManifest.for_run(cfg, defaulted)
    for stage in STAGES[command]:
        name = stage.__name__.removeprefix("stage_")
        files = stage(cfg, out_dir)
        manifest.record_stage(name, files)
        manifest.save(out_dir)
    return out_dir


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="axionspin",
        description="Axion-modulated spin-qubit simulation pipeline")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("simulate", "emit clean and noisy polarization traces"),
            ("filter", "apply causal and zero-phase band-pass filters"),
            ("psd", "estimate PSDs and detect modulation sidebands"),
            ("snr", "compute the sliding-window dynamic SNR"),
            ("scan", "emit the coupling sensitivity table"),
            ("demo", "run every stage and emit SVG figures")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, default=None,
                       help="JSON run configuration (defaults when omitted)")
        p.add_argument("--seed", type=int, default=None,
                       help="override run.seed")
        p.add_argument("--out", type=str, default=None,
                       help="run directory (default derives from config+seed "
                            f"under the {ENV_OUTPUT_ROOT} root)")
        p.add_argument("--scale", type=float, default=None,
                       help="override run.amplitude_scale")
        p.add_argument("--format", choices=("csv", "bin"), default=None,
                       help="trace container format")
    return parser


def _write_error_record(out_dir: Path | None, command: str, exc: Exception,
                        code: int) -> None:
    if out_dir is None or not out_dir.exists():
        return
    payload = {"stage": command, "error_type": type(exc).__name__,
               "message": str(exc), "exit_code": code}
    with open(out_dir / "error.json", "w") as fh:
        json.dump(payload, fh, indent=2)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, defaulted = load_config(args.config, seed=args.seed,
                                     amplitude_scale=args.scale,
                                     out_dir=args.out,
                                     trace_format=args.format)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = resolve_out_dir(cfg)
    try:
        out_dir = run_command(args.command, cfg, defaulted)
        print(out_dir)
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        _write_error_record(out_dir, args.command, exc, EXIT_CONFIG)
        return EXIT_CONFIG
    except (OSError, FileNotFoundError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        _write_error_record(out_dir, args.command, exc, EXIT_IO)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        _write_error_record(out_dir, args.command, exc, EXIT_NUMERIC)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
