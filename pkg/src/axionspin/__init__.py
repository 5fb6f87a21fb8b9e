"""Axion-modulated spin-qubit sensor simulation and analysis toolchain."""

__version__ = "0.1.0"

from .constants import EV_TO_HZ, GAMMA_E_HZ_PER_T
from .filters import (BandpassSpec, FilterRealization, design_bandpass,
                      filter_causal, filter_zero_phase)
from .noise import (NoiseConfig, RtnEnsemble, RtnSource, compose_noise,
                    gen_rtn_trace, one_over_f_psd, rtn_psd)
from .physics import (AxionParams, EffectiveSignal, QubitConfig,
                      apply_decoherence, axion_frequency, effective_field,
                      effective_signal, larmor_frequency, modulation_index,
                      sideband_amplitudes, sigma_x_trace, sigma_z_trace)
from .sensitivity import (DeviceScenario, DfszModel, beta_min, dfsz_band,
                          detection_threshold, g_ae_limit, scan, snr_amp)
from .spectral import (DynamicSnr, Psd, SidebandReport, cumulative_power,
                       detect_sidebands, dynamic_snr, estimate_psd, snr_db)
from .trace import TimeGrid, Trace

__all__ = [
    "AxionParams", "BandpassSpec", "DeviceScenario", "DfszModel",
    "DynamicSnr", "EffectiveSignal", "EV_TO_HZ", "FilterRealization",
    "GAMMA_E_HZ_PER_T", "NoiseConfig", "Psd", "QubitConfig", "RtnEnsemble",
    "RtnSource", "SidebandReport", "TimeGrid", "Trace", "apply_decoherence",
    "axion_frequency", "beta_min", "compose_noise", "cumulative_power",
    "design_bandpass", "detect_sidebands", "detection_threshold",
    "dfsz_band", "dynamic_snr", "effective_field", "effective_signal",
    "estimate_psd", "filter_causal", "filter_zero_phase", "g_ae_limit",
    "gen_rtn_trace", "larmor_frequency", "modulation_index",
    "one_over_f_psd", "rtn_psd", "scan", "sideband_amplitudes",
    "sigma_x_trace", "sigma_z_trace", "snr_amp", "snr_db",
]
