"""Run configuration: ingestion, defaults, validation, cross-field checks.

Config files are JSON trees with one section per module (``axion``,
``qubit``, ``grid``, ``noise``, ``filter``, ``scenario``, ``analysis``,
``run``).  Every key is optional; missing keys take the reference defaults
(the bundled ``data/reference_config.json`` spells them all out) and are
reported back so the run manifest can flag them.  The exact key set, units
and defaults are documented in ``data/config_schema.json``.

Cross-field consistency is checked at load time: all requested frequencies
must resolve below Nyquist, the pass band must be ordered and inside the
grid, and the band must retain the first and second modulation sidebands
(f_main +- 2 f_axion, with a 1% tolerance on the band edges --- the
reference band 0.9..1.1 x f_main misses the exact second sideband by about
0.4%, so an exact check would reject the reference configuration itself).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .filters import BandpassSpec
from .noise import NoiseConfig
from .physics import AxionParams, QubitConfig, axion_frequency, larmor_frequency
from .sensitivity import DeviceScenario
from .trace import TimeGrid

# Fractional slack on the sideband-retention band check.
RETENTION_TOL = 0.01
# Number of sideband orders the pass band must retain.
RETENTION_ORDERS = 2

TRACE_FORMATS = ("csv", "bin")


class ConfigError(ValueError):
    """Malformed, out-of-range, or inconsistent run configuration."""


@dataclass(frozen=True)
class AnalysisConfig:
    """Spectral-analysis stage parameters.

    ``window``/``hop`` drive the sliding dynamic-SNR estimate;
    ``band_fraction`` sets the half-width of the derived sideband and noise
    bands as a fraction of f_axion; ``n_max`` is the highest sideband order
    searched.
    """

    window: int = 100
    hop: int = 10
    n_max: int = 2
    psd_window: str = "hann"
    band_fraction: float = 0.15

    def __post_init__(self):
        if self.window < 16:
            raise ValueError(f"window must be >= 16, got {self.window}")
        if self.hop < 1:
            raise ValueError(f"hop must be >= 1, got {self.hop}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not 0 < self.band_fraction <= 0.4:
            raise ValueError(
                f"band_fraction must be in (0, 0.4], got {self.band_fraction}")


@dataclass(frozen=True)
class RunConfig:
    """Validated aggregate of every stage's parameters."""

    axion: AxionParams
    qubit: QubitConfig
    grid: TimeGrid
    noise: NoiseConfig
    bandpass: BandpassSpec
    scenario: DeviceScenario
    analysis: AnalysisConfig
    amplitude_scale: float
    seed: int
    out_dir: str | None
    trace_format: str

    def to_dict(self) -> dict:
        return {
            "axion": {
                "m_a": self.axion.m_a, "rho_a": self.axion.rho_a,
                "g_ae": self.axion.g_ae, "v": self.axion.v,
                "phi": self.axion.phi, "cos_theta0": self.axion.cos_theta0,
            },
            "qubit": {
                "B0": self.qubit.B0, "gamma": self.qubit.gamma,
                "T1": self.qubit.T1, "T2": self.qubit.T2,
            },
            "grid": {
                "dt": self.grid.dt, "n_samples": self.grid.n_samples,
                "t0": self.grid.t0,
            },
            "noise": {
                "white_amp": self.noise.white_amp, "pink_amp": self.noise.pink_amp,
                "pink_fmin": self.noise.pink_fmin,
                "readout_sigma": self.noise.readout_sigma,
                "p_spike": self.noise.p_spike,
                "telegraph_amp": self.noise.telegraph_amp,
                "telegraph_tau": self.noise.telegraph_tau,
                "drift_amp": self.noise.drift_amp,
                "ac_amp": self.noise.ac_amp, "ac_freq": self.noise.ac_freq,
                "temperature": self.noise.temperature,
                "resistance": self.noise.resistance,
                "johnson_gain": self.noise.johnson_gain,
                "spike_factor": self.noise.spike_factor,
            },
            "filter": {
                "f_low": self.bandpass.f_low, "f_high": self.bandpass.f_high,
                "order": self.bandpass.order, "family": self.bandpass.family,
            },
            "scenario": {
                "Q": self.scenario.Q, "N": self.scenario.N,
                "t": self.scenario.t, "eta_B": self.scenario.eta_B,
                "T2": self.scenario.T2, "entangled": self.scenario.entangled,
            },
            "analysis": {
                "window": self.analysis.window, "hop": self.analysis.hop,
                "n_max": self.analysis.n_max,
                "psd_window": self.analysis.psd_window,
                "band_fraction": self.analysis.band_fraction,
            },
            "run": {
                "seed": self.seed, "amplitude_scale": self.amplitude_scale,
                "out_dir": self.out_dir, "format": self.trace_format,
            },
        }


_AXION_DEFAULTS = {"m_a": 3e-6, "rho_a": 0.3, "g_ae": 1e-13, "v": 1e-3,
                   "phi": 0.0, "cos_theta0": 1.0}
_QUBIT_DEFAULTS = {"B0": 0.5, "gamma": 28e9, "T1": 1e-3, "T2": 1e-4}
_GRID_DEFAULTS = {"dt": 2e-12, "n_samples": 90000, "t0": 0.0}
_NOISE_DEFAULTS = {
    "white_amp": 1e-3, "pink_amp": 2e-2, "pink_fmin": 1.0,
    "readout_sigma": 2e-3, "p_spike": 5e-3, "telegraph_amp": 5e-4,
    "telegraph_tau": 1e-6, "drift_amp": 2e-4, "ac_amp": 1e-4, "ac_freq": 50.0,
    "temperature": 300.0, "resistance": 50.0, "johnson_gain": 1e-2,
    "spike_factor": 10.0,
}
# None band edges are derived from the qubit as 0.9/1.1 x f_main at load.
_FILTER_DEFAULTS = {"f_low": None, "f_high": None, "order": 4,
                    "family": "butterworth"}
_SCENARIO_DEFAULTS = {"Q": 1e5, "N": 1e6, "t": 1.3102e12, "eta_B": 1e-7,
                      "T2": 1e-4, "entangled": True}
_ANALYSIS_DEFAULTS = {"window": 100, "hop": 10, "n_max": 2,
                      "psd_window": "hann", "band_fraction": 0.15}
# amplitude_scale None derives Q*N*sqrt(t/T2) from the scenario.
_RUN_DEFAULTS = {"seed": 42, "amplitude_scale": None, "out_dir": None,
                 "format": "csv"}


def _section(raw: dict, name: str, defaults: dict, defaulted: list[str]) -> dict:
    data = raw.get(name, {})
    if not isinstance(data, dict):
        raise ConfigError(f"{name}: expected an object, got {type(data).__name__}")
    unknown = sorted(set(data) - set(defaults))
    if unknown:
        raise ConfigError(f"{name}: unknown keys {unknown}")
    merged = {}
    for key, default in defaults.items():
        if key in data:
            merged[key] = data[key]
        else:
            merged[key] = default
            defaulted.append(f"{name}.{key}")
    return merged


def load_config(path: str | Path | None = None, *, seed: int | None = None,
                amplitude_scale: float | None = None,
                out_dir: str | None = None,
                trace_format: str | None = None) -> tuple[RunConfig, list[str]]:
    """Load, default, and validate a run configuration.

    Returns the config plus the list of ``section.key`` paths that fell back
    to defaults.  Keyword arguments override the file (CLI flags).
    """
    if path is None:
        raw: dict = {}
    else:
        try:
            with open(path) as fh:
                text = fh.read()
            raw = json.loads(text) if text.strip() else {}
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(raw) - {"axion", "qubit", "grid", "noise", "filter",
                                 "scenario", "analysis", "run"})
    if unknown:
        raise ConfigError(f"unknown config sections {unknown}")

    defaulted: list[str] = []
    axion_kw = _section(raw, "axion", _AXION_DEFAULTS, defaulted)
    qubit_kw = _section(raw, "qubit", _QUBIT_DEFAULTS, defaulted)
    grid_kw = _section(raw, "grid", _GRID_DEFAULTS, defaulted)
    noise_kw = _section(raw, "noise", _NOISE_DEFAULTS, defaulted)
    filter_kw = _section(raw, "filter", _FILTER_DEFAULTS, defaulted)
    scenario_kw = _section(raw, "scenario", _SCENARIO_DEFAULTS, defaulted)
    analysis_kw = _section(raw, "analysis", _ANALYSIS_DEFAULTS, defaulted)
    run_kw = _section(raw, "run", _RUN_DEFAULTS, defaulted)

    def build(section: str, factory, kwargs):
        try:
            return factory(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{section}: {exc}") from exc

    axion = build("axion", AxionParams, axion_kw)
    qubit = build("qubit", QubitConfig, qubit_kw)
    grid = build("grid", TimeGrid, grid_kw)
    scenario = build("scenario", DeviceScenario, scenario_kw)
    analysis = build("analysis", AnalysisConfig, analysis_kw)

    run_seed = seed if seed is not None else run_kw["seed"]
    if not isinstance(run_seed, int) or isinstance(run_seed, bool) or run_seed < 0:
        raise ConfigError(f"run.seed must be a non-negative integer, got {run_seed!r}")
    noise = build("noise", NoiseConfig, dict(noise_kw, seed=run_seed))

    f_main = larmor_frequency(qubit)
    if filter_kw["f_low"] is None:
        filter_kw["f_low"] = 0.9 * f_main
    if filter_kw["f_high"] is None:
        filter_kw["f_high"] = 1.1 * f_main
    bandpass = build("filter", BandpassSpec, filter_kw)

    scale = amplitude_scale if amplitude_scale is not None \
        else run_kw["amplitude_scale"]
    if scale is None:
        scale = scenario.Q * scenario.N * math.sqrt(scenario.t / scenario.T2)
    if not scale >= 0:
        raise ConfigError(f"run.amplitude_scale must be >= 0, got {scale}")

    fmt = trace_format if trace_format is not None else run_kw["format"]
    if fmt not in TRACE_FORMATS:
        raise ConfigError(f"run.format must be one of {TRACE_FORMATS}, got {fmt!r}")
    out = out_dir if out_dir is not None else run_kw["out_dir"]

    cfg = RunConfig(axion=axion, qubit=qubit, grid=grid, noise=noise,
                    bandpass=bandpass, scenario=scenario, analysis=analysis,
                    amplitude_scale=float(scale), seed=run_seed, out_dir=out,
                    trace_format=fmt)
    _check_consistency(cfg)
    return cfg, defaulted


def _check_consistency(cfg: RunConfig) -> None:
    f_main = larmor_frequency(cfg.qubit)
    f_axion = axion_frequency(cfg.axion)
    nyq = cfg.grid.nyquist
    if f_main >= nyq:
        raise ConfigError(
            f"qubit.B0/qubit.gamma give a carrier of {f_main:g} Hz at or above "
            f"the grid Nyquist frequency {nyq:g} Hz (grid.dt)")
    if f_axion >= nyq:
        raise ConfigError(
            f"axion.m_a gives a modulation frequency of {f_axion:g} Hz at or "
            f"above the grid Nyquist frequency {nyq:g} Hz (grid.dt)")
    if cfg.bandpass.f_high >= nyq:
        raise ConfigError(
            f"filter.f_high {cfg.bandpass.f_high:g} Hz is at or above the "
            f"grid Nyquist frequency {nyq:g} Hz (grid.dt)")
    lo_edge = cfg.bandpass.f_low * (1.0 - RETENTION_TOL)
    hi_edge = cfg.bandpass.f_high * (1.0 + RETENTION_TOL)
    f_lo = f_main - RETENTION_ORDERS * f_axion
    f_hi = f_main + RETENTION_ORDERS * f_axion
    if f_hi > hi_edge:
        raise ConfigError(
            f"sideband retention violated: axion.m_a places the order-"
            f"{RETENTION_ORDERS} sideband at {f_hi:g} Hz, above filter.f_high "
            f"= {cfg.bandpass.f_high:g} Hz")
    if f_lo < lo_edge:
        raise ConfigError(
            f"sideband retention violated: axion.m_a places the order-"
            f"{RETENTION_ORDERS} sideband at {f_lo:g} Hz, below filter.f_low "
            f"= {cfg.bandpass.f_low:g} Hz")


def bundled_config_path() -> Path:
    """Path of the bundled reference configuration."""
    return Path(str(resources.files("axionspin.data").joinpath("reference_config.json")))


def bundled_seed_set() -> list[int]:
    """The bundled 100-seed set used by the dynamic-SNR robustness study."""
    text = resources.files("axionspin.data").joinpath("seeds.json").read_text()
    return list(json.loads(text)["seeds"])


def default_snr_bands(f_main: float, f_axion: float,
                      band_fraction: float = 0.15) -> tuple[tuple[float, float],
                                                            tuple[float, float]]:
    """Derived (sideband_band, noise_band) around the lower first sideband.

    The sideband band straddles f_main - f_axion; the noise band sits midway
    between the first and second lower sidebands, away from every predicted
    line.  Both have half-width ``band_fraction * f_axion``.
    """
    half = band_fraction * f_axion
    sideband_center = f_main - f_axion
    noise_center = f_main - 1.5 * f_axion
    return ((sideband_center - half, sideband_center + half),
            (noise_center - half, noise_center + half))
