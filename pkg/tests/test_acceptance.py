"""Acceptance suite: one test per release criterion, stated tolerances only.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass line per
criterion.  Criteria 2, 6 and 11 exercise the full pipeline through the CLI
stage functions on the bundled reference configuration.
"""

import dataclasses
import json
import math
import time

import numpy as np
import pytest

from axionspin import (AxionParams, DeviceScenario, NoiseConfig, QubitConfig,
                       TimeGrid, Trace, apply_decoherence, axion_frequency,
                       compose_noise, design_bandpass, detect_sidebands,
                       dynamic_snr, effective_signal, filter_causal,
                       filter_zero_phase, gen_rtn_trace, larmor_frequency,
                       sideband_amplitudes, sigma_x_trace, sigma_z_trace,
                       snr_amp, snr_db)
from axionspin.cli import run_command
from axionspin.config import bundled_config_path, bundled_seed_set, \
    default_snr_bands, load_config
from axionspin.manifest import RunManifest
from axionspin.noise import RtnEnsemble, RtnSource, ensemble_psd, gen_white, \
    rtn_psd
from axionspin.sensitivity import (BEST_CASE_SCENARIO,
                                   CURRENT_DEVICE_SCENARIO, NEXT_GEN_SCENARIO,
                                   DfszModel, beta_min, dfsz_band,
                                   dfsz_band_range, scan)
from axionspin.spectral import estimate_psd, periodogram_psd

FIVE_SIGMA_DB = 20 * math.log10(5.0)  # 13.98 dB amplitude threshold


def report(num: int, text: str) -> None:
    print(f"\n[criterion {num:02d}] PASS - {text}")


@pytest.fixture(scope="module")
def reference_config():
    cfg, defaulted = load_config(bundled_config_path())
    return cfg, defaulted


@pytest.fixture(scope="module")
def demo_dir(reference_config, tmp_path_factory):
    """One full pipeline run on the bundled configuration."""
    cfg, defaulted = reference_config
    out = tmp_path_factory.mktemp("acceptance-demo")
    cfg = dataclasses.replace(cfg, out_dir=str(out))
    run_command("demo", cfg, defaulted)
    return out


def test_criterion_01_carrier_placement(reference_config):
    """Noiseless scaled trace: PSD peak at 14 GHz within one bin, < 10 s."""
    cfg, _ = reference_config
    start = time.monotonic()
    trace = apply_decoherence(
        sigma_x_trace(cfg.axion, cfg.qubit, cfg.grid, cfg.amplitude_scale),
        cfg.qubit)
    psd = periodogram_psd(trace)
    peak = psd.frequencies[np.argmax(psd.power)]
    elapsed = time.monotonic() - start
    bin_width = psd.bin_width
    assert bin_width == pytest.approx(5.556e6, rel=1e-3)
    assert abs(peak - larmor_frequency(cfg.qubit)) <= bin_width
    assert elapsed < 10.0
    report(1, f"carrier at {peak/1e9:.4f} GHz (bin {bin_width/1e6:.2f} MHz), "
              f"{elapsed:.2f} s")


def test_criterion_02_sideband_placement(reference_config, demo_dir):
    """First sidebands at f_main +- 725.4 MHz; rounded 13.27/14.73 GHz within
    1% of the offset."""
    cfg, _ = reference_config
    f_axion = axion_frequency(cfg.axion)
    assert f_axion == pytest.approx(7.254e8, rel=1e-3)
    with open(demo_dir / "sidebands.json") as fh:
        rep = json.load(fh)
    first = {s["side"]: s for s in rep["sidebands"] if s["order"] == 1}
    assert first[-1]["found"] and first[1]["found"]
    f_main = larmor_frequency(cfg.qubit)
    bin_width = 1.0 / cfg.grid.duration
    for side in (-1, 1):
        predicted = f_main + side * f_axion
        assert abs(first[side]["f_detected_hz"] - predicted) <= 2 * bin_width
    # agreement with the published rounded frequencies
    assert abs(first[-1]["f_detected_hz"] - 13.27e9) <= 0.01 * f_axion
    assert abs(first[1]["f_detected_hz"] - 14.73e9) <= 0.01 * f_axion
    report(2, f"sidebands at {first[-1]['f_detected_hz']/1e9:.4f} / "
              f"{first[1]['f_detected_hz']/1e9:.4f} GHz")


def test_criterion_03_bessel_power_ratio():
    """Synthetic FM, beta = 0.5: sideband/carrier power = (J1/J0)^2 +- 5%."""
    grid = TimeGrid(dt=1e-6, n_samples=8192)
    df = grid.sample_rate / grid.n_samples
    f_c, f_m = 2048 * df, 128 * df
    t = grid.times()
    beta = 0.5
    trace = Trace(np.cos(2 * np.pi * f_c * t + beta * np.sin(2 * np.pi * f_m * t)),
                  grid)
    rep = detect_sidebands(periodogram_psd(trace), f_c, f_m, n_max=1)
    j = dict(sideband_amplitudes(beta, 1))
    expected = (j[1] / j[0]) ** 2
    for side in rep.sidebands:
        assert side.found
        ratio = side.power / rep.carrier.power
        assert ratio == pytest.approx(expected, rel=0.05)
    report(3, f"measured ratios within 5% of (J1/J0)^2 = {expected:.4f}")


def test_criterion_04_unit_chain_anchors():
    """beta within 3x of 1e-21; beta_min within 3x of 1e-17 (Q=1) and
    1e-22 (Q=1e5)."""
    qubit = QubitConfig(B0=0.5)
    for m_a in (1e-6, 3e-6):
        beta = effective_signal(AxionParams(m_a=m_a), qubit).beta
        assert 1e-21 / 3 <= beta <= 1e-21 * 3, (m_a, beta)
    f_ref = axion_frequency(AxionParams(m_a=1e-6))
    base = beta_min(DeviceScenario(Q=1, N=1, t=1e-4, eta_B=1e-7, T2=1e-4), f_ref)
    assert 1e-17 / 3 <= base <= 1e-17 * 3
    enhanced = beta_min(DeviceScenario(Q=1e5, N=1, t=1e-4, eta_B=1e-7, T2=1e-4),
                        f_ref)
    assert 1e-22 / 3 <= enhanced <= 1e-22 * 3
    report(4, f"beta(1ueV) = {effective_signal(AxionParams(m_a=1e-6), qubit).beta:.3g}, "
              f"beta_min = {base:.3g} (Q=1), {enhanced:.3g} (Q=1e5)")


def test_criterion_05_best_case_snr():
    """Best-case amplitude SNR evaluates to 22.5 dB +- 0.5 dB."""
    amp = snr_amp(BEST_CASE_SCENARIO, AxionParams(m_a=3e-6), QubitConfig(B0=0.5))
    value_db = snr_db(amp)
    assert value_db == pytest.approx(22.5, abs=0.5)
    report(5, f"best-case SNR {value_db:.3f} dB (amplitude {amp:.3f})")


def test_criterion_06_dynamic_snr_over_seeds(reference_config):
    """Windowed-mean dynamic SNR at the lower sideband exceeds the 5-sigma
    threshold in >= 90% of the bundled 100 seeds; < 5 min."""
    cfg, _ = reference_config
    seeds = bundled_seed_set()
    assert len(seeds) == 100
    start = time.monotonic()
    clean = apply_decoherence(
        sigma_x_trace(cfg.axion, cfg.qubit, cfg.grid, cfg.amplitude_scale),
        cfg.qubit)
    realization = design_bandpass(cfg.bandpass, cfg.grid.sample_rate)
    bands = default_snr_bands(larmor_frequency(cfg.qubit),
                              axion_frequency(cfg.axion),
                              cfg.analysis.band_fraction)
    passing = 0
    means = []
    for seed in seeds:
        noise = compose_noise(cfg.grid, dataclasses.replace(cfg.noise, seed=seed))
        noisy = clean.with_values(clean.values + noise.values)
        filtered = filter_zero_phase(noisy, realization)
        series = dynamic_snr(filtered, cfg.analysis.window, bands[0], bands[1],
                             hop=cfg.analysis.hop)
        means.append(series.mean_db())
        if series.mean_db() >= FIVE_SIGMA_DB:
            passing += 1
    elapsed = time.monotonic() - start
    assert passing >= 90
    assert elapsed < 300.0
    report(6, f"{passing}/100 seeds >= {FIVE_SIGMA_DB:.2f} dB "
              f"(means {min(means):.1f}..{max(means):.1f} dB), {elapsed:.0f} s")


def test_criterion_07_noise_model_fidelity():
    """RTN PSD within 10% band-averaged; ensemble 1/f slope -1.0 +- 0.1;
    white std within 3%."""
    # simulated single-RTN Lorentzian, 100 realizations
    src = RtnSource(delta_eps=1.0, tau=1e-6)
    grid = TimeGrid(dt=1e-8, n_samples=2**19)
    psds = []
    for child in np.random.SeedSequence(7).spawn(100):
        trace = gen_rtn_trace(src, grid, np.random.default_rng(child))
        psd = estimate_psd(trace, window="hann", segment_len=8192, overlap=0.5)
        psds.append(psd.power)
    power = np.mean(psds, axis=0)
    knee = 1.0 / (2 * np.pi * src.tau)
    edges = np.logspace(np.log10(knee / 10), np.log10(knee * 10), 9)
    worst = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        band = (psd.frequencies >= lo) & (psd.frequencies < hi)
        ratio = power[band].mean() / rtn_psd(src, psd.frequencies[band]).mean()
        worst = max(worst, abs(ratio - 1.0))
        assert ratio == pytest.approx(1.0, abs=0.10)

    # 1/f mixture slope
    ens = RtnEnsemble.log_uniform(256, 1.0, 1e-8, 1e-2, seed=11)
    f = np.logspace(np.log10(10 / (2 * np.pi * ens.tau_max)),
                    np.log10(1 / (20 * np.pi * ens.tau_min)), 200)
    slope = np.polyfit(np.log10(f), np.log10(ensemble_psd(ens, f)), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.1)

    # white channel std, 1e6 samples
    white = gen_white(TimeGrid(dt=1e-9, n_samples=10**6), NoiseConfig(seed=5),
                      np.random.default_rng(5))
    assert white.values.std() == pytest.approx(1e-3, rel=0.03)
    report(7, f"RTN band error <= {worst:.3f}, 1/f slope {slope:.3f}, "
              f"white std {white.values.std():.3e}")


def test_criterion_08_zero_phase_contract(reference_config):
    """Zero-phase lag is exactly 0; step input rings through the causal path
    and not the zero-phase path."""
    from scipy.signal import correlate, correlation_lags

    cfg, _ = reference_config
    realization = design_bandpass(cfg.bandpass, cfg.grid.sample_rate)
    t = cfg.grid.times()
    ref = Trace(np.sin(2 * np.pi * larmor_frequency(cfg.qubit) * t), cfg.grid)
    out = filter_zero_phase(ref, realization)
    xc = correlate(out.values, ref.values, mode="full")
    lag = correlation_lags(len(out), len(ref), mode="full")[np.argmax(xc)]
    assert lag == 0

    step = Trace(np.ones(cfg.grid.n_samples), cfg.grid)
    causal = filter_causal(step, realization).values
    zerophase = filter_zero_phase(step, realization).values
    ring_peak = np.max(np.abs(causal))
    settle = realization.settle_samples
    sign_changes = np.sum(np.diff(np.sign(causal[:settle])) != 0)
    assert ring_peak > 0.01          # artifact present
    assert sign_changes > 100        # oscillatory, not a smooth transient
    assert np.max(np.abs(causal[3 * settle:])) < 1e-6 * ring_peak  # decaying
    assert np.max(np.abs(zerophase)) < 1e-9  # absent in the zero-phase path
    report(8, f"lag 0; causal ring peak {ring_peak:.3f} vs zero-phase "
              f"residual {np.max(np.abs(zerophase)):.2e}")


def test_criterion_09_sigma_z_conservation():
    """<sigma_z> constant to <= 1e-12 drift for arbitrary states; equal
    superposition identically zero."""
    grid = TimeGrid(dt=2e-12, n_samples=90000)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(25):
        theta, phase = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        c_plus = math.cos(theta / 2)
        c_minus = math.sin(theta / 2) * complex(math.cos(phase), math.sin(phase))
        trace = sigma_z_trace(c_plus, c_minus, grid)
        worst = max(worst, float(np.max(trace.values) - np.min(trace.values)))
    assert worst <= 1e-12
    equal = sigma_z_trace(1 / math.sqrt(2), 1 / math.sqrt(2), grid)
    assert np.all(equal.values == 0.0)
    report(9, f"max drift {worst:.2e}; equal superposition exactly 0")


def test_criterion_10_sensitivity_scan_structure():
    """Next-generation curve strictly below the current one everywhere;
    DFSZ tan beta_a = 1 inside the 0.1..50 band."""
    masses = np.logspace(-6, -3, 41)
    model = DfszModel(tan_beta_a=1.0, f_a=1e9, variant="I")
    rows = scan(masses, {"current": CURRENT_DEVICE_SCENARIO,
                         "next_gen": NEXT_GEN_SCENARIO}, model)
    for row in rows:
        assert row.g_ae_limits["next_gen"] < row.g_ae_limits["current"]
    lo, hi = dfsz_band_range(model.f_a, model.variant)
    mid = dfsz_band(model)
    assert lo < mid < hi
    report(10, f"next-gen < current at all {len(rows)} points; DFSZ midline "
               f"{mid:.2e} inside [{lo:.2e}, {hi:.2e}]")


def test_criterion_11_determinism(reference_config, tmp_path):
    """Byte-identical outputs across two runs with identical config and
    seed, verified by manifest checksums."""
    cfg, defaulted = reference_config
    sums = []
    for name in ("r1", "r2"):
        out = tmp_path / name
        run_cfg = dataclasses.replace(cfg, out_dir=str(out))
        run_command("simulate", run_cfg, defaulted)
        run_command("filter", run_cfg, defaulted)
        run_command("psd", run_cfg, defaulted)
        sums.append(RunManifest.load(out).checksums())
    assert sums[0] == sums[1]
    blob_a = (tmp_path / "r1" / "sigma_x_noisy.csv").read_bytes()
    blob_b = (tmp_path / "r2" / "sigma_x_noisy.csv").read_bytes()
    assert blob_a == blob_b
    report(11, f"{len(sums[0])} artifact checksums identical across runs")
