"""Seeded generators for the seven measurement-chain noise channels.

Channel amplitudes are target RMS values in the same dimensionless units as
the polarization traces they are added to (the AC channel is the exception:
its amplitude is the sine-wave peak, as configured).  Every generator takes
an explicit ``numpy.random.Generator`` so realizations are reproducible;
``compose_noise`` derives one independent substream per channel from the
master seed, which makes the composite byte-identical across runs with the
same configuration.

The module also carries the analytic spectral models for charge noise: the
Lorentzian of a single random-telegraph source and the 1/f spectrum of an
ensemble of such sources with log-distributed switching times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import K_BOLTZMANN
from .trace import TimeGrid, Trace


@dataclass(frozen=True)
class NoiseConfig:
    """Amplitudes and shape parameters for all seven channels.

    Defaults are the reference simulation values: white 1e-3, pink 2e-2
    above 1 Hz, readout sigma 2e-3 with spike probability 5e-3, telegraph
    5e-4, drift 2e-4, 50 Hz AC pickup at 1e-4, and a 300 K Johnson-Nyquist
    channel.  ``telegraph_tau`` (1 us), ``resistance`` (50 ohm),
    ``spike_factor`` (10x readout sigma) and ``johnson_gain`` (0.01 per
    volt, keeping the thermal channel traceable but subdominant) are
    defaults of this implementation, not externally constrained values.
    """

    white_amp: float = 1e-3
    pink_amp: float = 2e-2
    pink_fmin: float = 1.0
    readout_sigma: float = 2e-3
    p_spike: float = 5e-3
    telegraph_amp: float = 5e-4
    telegraph_tau: float = 1e-6
    drift_amp: float = 2e-4
    ac_amp: float = 1e-4
    ac_freq: float = 50.0
    temperature: float = 300.0
    resistance: float = 50.0
    johnson_gain: float = 1e-2
    spike_factor: float = 10.0
    seed: int = 0

    def __post_init__(self):
        for name in ("white_amp", "pink_amp", "readout_sigma", "telegraph_amp",
                     "drift_amp", "ac_amp", "spike_factor", "johnson_gain"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0 <= self.p_spike <= 1:
            raise ValueError(f"p_spike must be in [0, 1], got {self.p_spike}")
        if not self.pink_fmin > 0:
            raise ValueError(f"pink_fmin must be positive, got {self.pink_fmin}")
        if not self.telegraph_tau > 0:
            raise ValueError(f"telegraph_tau must be positive, got {self.telegraph_tau}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.resistance < 0:
            raise ValueError(f"resistance must be >= 0, got {self.resistance}")


@dataclass(frozen=True)
class RtnSource:
    """Single random-telegraph fluctuator: splitting shift (Hz) and switching time (s)."""

    delta_eps: float
    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class RtnEnsemble:
    """Ensemble of telegraph sources with switching times in [tau_min, tau_max]."""

    sources: tuple[RtnSource, ...]
    tau_min: float
    tau_max: float
    alpha: float = 0.8

    def __post_init__(self):
        if not self.tau_min < self.tau_max:
            raise ValueError(
                f"tau_min must be < tau_max, got {self.tau_min} >= {self.tau_max}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @classmethod
    def log_uniform(cls, n_sources: int, delta_eps: float, tau_min: float,
                    tau_max: float, seed: int, alpha: float = 0.8) -> "RtnEnsemble":
        """Sample ``n_sources`` switching times log-uniformly on [tau_min, tau_max]."""
        rng = np.random.default_rng(seed)
        taus = np.exp(rng.uniform(math.log(tau_min), math.log(tau_max), n_sources))
        sources = tuple(RtnSource(delta_eps, float(tau)) for tau in taus)
        return cls(sources, tau_min, tau_max, alpha)

    def mean_square_shift(self) -> float:
        return float(np.mean([s.delta_eps**2 for s in self.sources]))


def rtn_psd(src: RtnSource, f) -> np.ndarray | float:
    """Lorentzian PSD of one telegraph source: delta_eps^2 * tau / (1 + (2 pi f tau)^2)."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise ValueError("frequencies must be >= 0")
    out = src.delta_eps**2 * src.tau / (1.0 + (2.0 * np.pi * f * src.tau) ** 2)
    return out if out.ndim else float(out)


def ensemble_psd(ens: RtnEnsemble, f) -> np.ndarray | float:
    """Mean Lorentzian PSD over the ensemble's sources."""
    f = np.asarray(f, dtype=float)
    acc = np.zeros_like(f)
    for src in ens.sources:
        acc += rtn_psd(src, f)
    out = acc / len(ens.sources)
    return out if out.ndim else float(out)


def one_over_f_psd(ens: RtnEnsemble, f) -> np.ndarray | float:
    """Analytic 1/f model alpha * <delta_eps^2> / omega, at cyclic frequency f.

    The model is defined against angular frequency, S(omega) = alpha
    <delta_eps^2> / omega; passing f in Hz divides by 2*pi*f.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise ValueError("1/f spectrum diverges at f <= 0")
    out = ens.alpha * ens.mean_square_shift() / (2.0 * np.pi * f)
    return out if out.ndim else float(out)


def _telegraph_wave(grid: TimeGrid, amplitude: float, mean_dwell: float,
                    rng: np.random.Generator) -> np.ndarray:
    """Two-state +-amplitude wave with exponential dwell times of mean ``mean_dwell``."""
    duration = grid.duration
    # Draw dwell intervals in batches until they cover the grid.
    dwells = rng.exponential(mean_dwell, size=max(16, int(4 * duration / mean_dwell) + 16))
    while dwells.sum() < duration:
        dwells = np.concatenate([dwells, rng.exponential(mean_dwell, size=dwells.size)])
    switch_times = np.cumsum(dwells)
    t_rel = grid.times() - grid.t0
    flips = np.searchsorted(switch_times, t_rel, side="right")
    start = 1.0 if rng.random() < 0.5 else -1.0
    return amplitude * start * np.where(flips % 2 == 0, 1.0, -1.0)


def gen_rtn_trace(src: RtnSource, grid: TimeGrid, rng: np.random.Generator) -> Trace:
    """Telegraph realization whose PSD is exactly ``rtn_psd(src, f)``.

    A +-a wave with mean dwell tau_d has autocorrelation a^2 exp(-2|t|/tau_d)
    and one-sided PSD 4 a^2 (tau_d/2) / (1 + (2 pi f tau_d/2)^2); choosing
    a = delta_eps/2 and tau_d = 2*tau makes this the Lorentzian above.
    """
    values = _telegraph_wave(grid, src.delta_eps / 2.0, 2.0 * src.tau, rng)
    return Trace(values, grid, name="rtn")


def gen_white(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """I.i.d. Gaussian samples with standard deviation ``white_amp``."""
    if cfg.white_amp == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="white")
    return Trace(cfg.white_amp * rng.standard_normal(grid.n_samples), grid,
                 seed=cfg.seed, name="white")


def gen_pink(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """1/f-shaped Gaussian noise, flat below ``pink_fmin``, RMS = ``pink_amp``.

    White Gaussian noise is shaped in the frequency domain by 1/sqrt(f)
    (the exact target PSD on this grid), then rescaled to the requested RMS.
    """
    if cfg.pink_amp == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="pink")
    n = grid.n_samples
    white = rng.standard_normal(n)
    spectrum = np.fft.rfft(white)
    f = np.fft.rfftfreq(n, grid.dt)
    shape = 1.0 / np.sqrt(np.maximum(f, cfg.pink_fmin))
    shape[0] = 0.0  # no DC component
    values = np.fft.irfft(spectrum * shape, n)
    rms = np.sqrt(np.mean(values**2))
    if rms > 0:
        values *= cfg.pink_amp / rms
    return Trace(values, grid, seed=cfg.seed, name="pink")


def gen_telegraph(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """Two-state Markov noise at +-``telegraph_amp`` with mean dwell ``telegraph_tau``."""
    if cfg.telegraph_amp == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="telegraph")
    values = _telegraph_wave(grid, cfg.telegraph_amp, cfg.telegraph_tau, rng)
    return Trace(values, grid, seed=cfg.seed, name="telegraph")


def gen_drift(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """Slow drift: integrated Gaussian walk rescaled to RMS ``drift_amp`` on this grid."""
    if cfg.drift_amp == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="drift")
    walk = np.cumsum(rng.standard_normal(grid.n_samples))
    rms = np.sqrt(np.mean(walk**2))
    if rms > 0:
        walk = walk * (cfg.drift_amp / rms)
    return Trace(walk, grid, seed=cfg.seed, name="drift")


def gen_readout(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """Digitization noise: Gaussian of std ``readout_sigma`` plus rare glitch spikes.

    Spikes occur per sample with probability ``p_spike``, random sign, and
    amplitude ``spike_factor * readout_sigma``.
    """
    if cfg.readout_sigma == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="readout")
    n = grid.n_samples
    values = cfg.readout_sigma * rng.standard_normal(n)
    hits = rng.random(n) < cfg.p_spike
    signs = rng.integers(0, 2, size=n) * 2 - 1
    values[hits] += signs[hits] * cfg.spike_factor * cfg.readout_sigma
    return Trace(values, grid, seed=cfg.seed, name="readout")


def gen_ac(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """Line pickup: ``ac_amp`` * sin(2 pi ac_freq t + phase) with a seeded phase."""
    if cfg.ac_amp == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="ac")
    phase = rng.uniform(0.0, 2.0 * np.pi)
    t = grid.times()
    values = cfg.ac_amp * np.sin(2.0 * np.pi * cfg.ac_freq * t + phase)
    return Trace(values, grid, seed=cfg.seed, name="ac")


def johnson_voltage_psd(cfg: NoiseConfig) -> float:
    """Thermal voltage density 4 k_B T R in V^2/Hz."""
    return 4.0 * K_BOLTZMANN * cfg.temperature * cfg.resistance


def gen_johnson(grid: TimeGrid, cfg: NoiseConfig, rng: np.random.Generator) -> Trace:
    """Johnson-Nyquist channel: white Gaussian with variance 4 k_B T R * f_nyquist.

    The variance is the thermal voltage density integrated over the grid's
    Nyquist bandwidth, mapped to signal units by ``johnson_gain`` (per volt).
    """
    variance = johnson_voltage_psd(cfg) * grid.nyquist * cfg.johnson_gain**2
    if variance == 0:
        return Trace(np.zeros(grid.n_samples), grid, seed=cfg.seed, name="johnson")
    values = math.sqrt(variance) * rng.standard_normal(grid.n_samples)
    return Trace(values, grid, seed=cfg.seed, name="johnson")


# Fixed channel order; compose_noise spawns one substream per entry.
CHANNELS = (
    ("white", gen_white),
    ("pink", gen_pink),
    ("telegraph", gen_telegraph),
    ("drift", gen_drift),
    ("readout", gen_readout),
    ("ac", gen_ac),
    ("johnson", gen_johnson),
)


def channel_rngs(seed: int) -> dict[str, np.random.Generator]:
    """Independent, deterministic substream per channel from one master seed."""
    children = np.random.SeedSequence(seed).spawn(len(CHANNELS))
    return {name: np.random.default_rng(child)
            for (name, _), child in zip(CHANNELS, children)}


def gen_channels(grid: TimeGrid, cfg: NoiseConfig) -> dict[str, Trace]:
    """All seven channel realizations for this (grid, config)."""
    rngs = channel_rngs(cfg.seed)
    return {name: gen(grid, cfg, rngs[name]) for name, gen in CHANNELS}


def compose_noise(grid: TimeGrid, cfg: NoiseConfig) -> Trace:
    """Sum of all seven channels, each on its own substream of ``cfg.seed``."""
    total = np.zeros(grid.n_samples)
    for trace in gen_channels(grid, cfg).values():
        total += trace.values
    return Trace(total, grid, seed=cfg.seed, name="noise")
