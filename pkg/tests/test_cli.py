import json
import time

import numpy as np
import pytest

from axionspin.cli import (EXIT_CONFIG, EXIT_IO, main, resolve_out_dir)
from axionspin.config import load_config
from axionspin.manifest import RunManifest


@pytest.fixture
def small_config(tmp_path):
    """Reduced grid so CLI round trips stay fast; band scaled to the grid."""
    path = tmp_path / "small.json"
    path.write_text(json.dumps({
        "grid": {"dt": 2e-12, "n_samples": 30000},
        "run": {"seed": 11, "amplitude_scale": 7.139798e18},
    }))
    return path


def run_cli(*argv):
    return main([str(a) for a in argv])


class TestCommands:
    def test_simulate_emits_traces(self, small_config, tmp_path):
        out = tmp_path / "out"
        assert run_cli("simulate", "--config", small_config, "--out", out) == 0
        for name in ("sigma_x_clean.csv", "sigma_x_noisy.csv",
                     "sigma_z_clean.csv", "sigma_z_noisy.csv", "noise.csv"):
            assert (out / name).exists()
        manifest = RunManifest.load(out)
        assert "simulate" in manifest.stages

    def test_pipeline_chain(self, small_config, tmp_path):
        out = tmp_path / "out"
        assert run_cli("simulate", "--config", small_config, "--out", out) == 0
        assert run_cli("filter", "--config", small_config, "--out", out) == 0
        assert run_cli("psd", "--config", small_config, "--out", out) == 0
        assert run_cli("snr", "--config", small_config, "--out", out) == 0
        assert (out / "sigma_x_zerophase.csv").exists()
        assert (out / "sidebands.json").exists()
        assert (out / "dynamic_snr.csv").exists()
        report = json.loads((out / "sidebands.json").read_text())
        assert report["carrier"]["found"] is True

    def test_filter_without_simulate_is_io_error(self, small_config, tmp_path):
        out = tmp_path / "fresh"
        assert run_cli("filter", "--config", small_config, "--out", out) == EXIT_IO
        record = json.loads((out / "error.json").read_text())
        assert record["exit_code"] == EXIT_IO
        assert record["stage"] == "filter"

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"noise": {"p_spike": 5.0}}))
        assert run_cli("simulate", "--config", bad, "--out", tmp_path / "o") \
            == EXIT_CONFIG

    def test_scan_emits_table(self, tmp_path):
        out = tmp_path / "scan"
        assert run_cli("scan", "--out", out) == 0
        header = (out / "sensitivity.csv").read_text().splitlines()[0]
        assert header.startswith("m_a_ev,f_axion_hz")
        assert "g_ae_limit_current" in header and "g_ae_limit_next_gen" in header

    def test_seed_flag_changes_noise(self, small_config, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        run_cli("simulate", "--config", small_config, "--out", out_a,
                "--seed", "1")
        run_cli("simulate", "--config", small_config, "--out", out_b,
                "--seed", "2")
        noise_a = (out_a / "noise.csv").read_bytes()
        noise_b = (out_b / "noise.csv").read_bytes()
        assert noise_a != noise_b

    def test_binary_format_flag(self, small_config, tmp_path):
        out = tmp_path / "bin"
        assert run_cli("simulate", "--config", small_config, "--out", out,
                       "--format", "bin") == 0
        assert (out / "sigma_x_noisy.bin").exists()

    def test_pure_tone_when_decoupled_and_quiet(self, tmp_path):
        cfg_path = tmp_path / "quiet.json"
        cfg_path.write_text(json.dumps({
            "axion": {"g_ae": 0.0},
            "grid": {"dt": 2e-12, "n_samples": 30000},
            "noise": {"white_amp": 0, "pink_amp": 0, "readout_sigma": 0,
                      "telegraph_amp": 0, "drift_amp": 0, "ac_amp": 0,
                      "temperature": 0},
            "run": {"amplitude_scale": 1.0},
        }))
        out = tmp_path / "quiet"
        assert run_cli("simulate", "--config", cfg_path, "--out", out) == 0
        assert run_cli("filter", "--config", cfg_path, "--out", out) == 0
        assert run_cli("psd", "--config", cfg_path, "--out", out) == 0
        psd = np.loadtxt(out / "psd_noisy.csv", delimiter=",", skiprows=1)
        peak = psd[np.argmax(psd[:, 1]), 0]
        assert abs(peak - 14e9) <= 1.0 / (30000 * 2e-12)
        report = json.loads((out / "sidebands.json").read_text())
        assert not any(s["found"] for s in report["sidebands"])

    def test_determinism_manifest_checksums(self, small_config, tmp_path):
        out_a, out_b = tmp_path / "r1", tmp_path / "r2"
        for out in (out_a, out_b):
            assert run_cli("simulate", "--config", small_config,
                           "--out", out) == 0
            assert run_cli("filter", "--config", small_config,
                           "--out", out) == 0
        sums_a = RunManifest.load(out_a).checksums()
        sums_b = RunManifest.load(out_b).checksums()
        assert sums_a == sums_b
        assert (out_a / "sigma_x_noisy.csv").read_bytes() == \
            (out_b / "sigma_x_noisy.csv").read_bytes()


class TestDemo:
    def test_demo_full_run_and_runtime(self, tmp_path):
        out = tmp_path / "demo"
        start = time.monotonic()
        assert run_cli("demo", "--out", out, "--scale", "7.139798e18") == 0
        elapsed = time.monotonic() - start
        assert elapsed < 60.0
        for name in ("fig_time_domain.svg", "fig_psd.svg", "fig_noise_psd.svg",
                     "fig_cumulative_power.svg", "fig_dynamic_snr.svg",
                     "fig_sensitivity.svg", "sensitivity.csv",
                     "dynamic_snr.csv", "cumulative_power.csv"):
            assert (out / name).exists(), name
        manifest = RunManifest.load(out)
        assert set(manifest.stages) == {"simulate", "filter", "psd", "snr",
                                        "scan", "plots"}

    def test_demo_sideband_report_matches_reference(self, tmp_path):
        out = tmp_path / "demo2"
        assert run_cli("demo", "--out", out) == 0
        report = json.loads((out / "sidebands.json").read_text())
        lower = next(s for s in report["sidebands"]
                     if s["order"] == 1 and s["side"] == -1)
        upper = next(s for s in report["sidebands"]
                     if s["order"] == 1 and s["side"] == 1)
        assert lower["found"] and upper["found"]
        # the reference rounded values 13.27 / 14.73 GHz
        assert lower["f_detected_hz"] == pytest.approx(13.27e9, rel=2e-3)
        assert upper["f_detected_hz"] == pytest.approx(14.73e9, rel=2e-3)


def test_resolve_out_dir_deterministic(monkeypatch, tmp_path):
    monkeypatch.setenv("AXIONSPIN_OUTPUT_ROOT", str(tmp_path / "root"))
    cfg, _ = load_config(None)
    a = resolve_out_dir(cfg)
    b = resolve_out_dir(cfg)
    assert a == b
    assert str(a).startswith(str(tmp_path / "root"))
