"""Static SVG figures for the pipeline outputs.

Plots are conveniences; every quantitative check runs on the CSV/JSON
artifacts.  Figures are rendered with the Agg backend (no display server)
and with fixed hash salts and no embedded dates, so identical runs emit
byte-identical SVGs and can be checksummed in the run manifest.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "axionspin"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

_MAX_POINTS = 4000


def _save(fig, path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _decimate(x: np.ndarray, y: np.ndarray, max_points: int = _MAX_POINTS):
    """Block-max decimation that keeps narrow peaks visible."""
    n = x.size
    if n <= max_points:
        return x, y
    block = int(np.ceil(n / max_points))
    usable = (n // block) * block
    xb = x[:usable].reshape(-1, block)
    yb = y[:usable].reshape(-1, block)
    idx = np.argmax(yb, axis=1)
    rows = np.arange(xb.shape[0])
    return xb[rows, idx], yb[rows, idx]


def plot_time_domain(path, t, series: dict[str, np.ndarray],
                     max_samples: int = 2000, title: str = "") -> None:
    """Overlayed time traces, truncated to the first ``max_samples`` points."""
    fig, ax = plt.subplots(figsize=(7, 4))
    sl = slice(0, max_samples)
    for label, values in series.items():
        ax.plot(t[sl] * 1e9, values[sl], lw=0.8, label=label)
    ax.set_xlabel("time (ns)")
    ax.set_ylabel("polarization")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, path)


def plot_psd(path, curves: dict[str, tuple[np.ndarray, np.ndarray]],
             lines: dict[str, float] | None = None, title: str = "") -> None:
    """Log-power PSD overlay with optional vertical marker lines (Hz)."""
    fig, ax = plt.subplots(figsize=(7, 4))
    for label, (f, p) in curves.items():
        fd, pd = _decimate(f, p)
        ax.semilogy(fd / 1e9, np.maximum(pd, 1e-300), lw=0.8, label=label)
    for label, f in (lines or {}).items():
        ax.axvline(f / 1e9, color="green", ls="--", lw=0.7)
        ax.text(f / 1e9, ax.get_ylim()[1], label, rotation=90, fontsize=6,
                va="top", ha="right")
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("PSD (1/Hz)")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    _save(fig, path)


def plot_cumulative(path, f: np.ndarray, curve: np.ndarray,
                    lines: dict[str, float] | None = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    fd, cd = _decimate(f, curve)
    ax.plot(fd / 1e9, cd, lw=1.0)
    for _, freq in (lines or {}).items():
        ax.axvline(freq / 1e9, color="green", ls="--", lw=0.7)
    ax.set_xlabel("frequency (GHz)")
    ax.set_ylabel("normalized cumulative power")
    ax.set_title("Cumulative power")
    _save(fig, path)


def plot_dynamic_snr(path, t: np.ndarray, snr: np.ndarray,
                     threshold_db: float | None = None) -> None:
    fig, ax = plt.subplots(figsize=(7, 4))
    td, sd = _decimate(t, snr)
    ax.plot(td * 1e9, sd, lw=0.8)
    if threshold_db is not None:
        ax.axhline(threshold_db, color="red", ls=":", lw=0.9,
                   label=f"{threshold_db:.1f} dB threshold")
        ax.legend(fontsize=8)
    ax.set_xlabel("window center (ns)")
    ax.set_ylabel("dynamic SNR (dB)")
    ax.set_title("Sliding-window SNR at the lower sideband")
    _save(fig, path)


def plot_sensitivity(path, rows, stellar_limit: float | None = None) -> None:
    """Coupling exclusion curves vs axion mass with the DFSZ band overlay."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    masses = np.array([r.m_a_ev for r in rows])
    for name in sorted(rows[0].g_ae_limits):
        limits = np.array([r.g_ae_limits[name] for r in rows])
        ax.loglog(masses, limits, lw=1.2, label=f"{name} limit")
    band_lo = np.array([r.dfsz_low for r in rows])
    band_hi = np.array([r.dfsz_high for r in rows])
    mid = np.array([r.dfsz_mid for r in rows])
    ax.fill_between(masses, band_lo, band_hi, color="purple", alpha=0.2,
                    label="DFSZ band (0.1 < tan beta_a < 50)")
    ax.loglog(masses, mid, color="purple", lw=1.0, label="DFSZ tan beta_a = 1")
    if stellar_limit is not None:
        ax.axhline(stellar_limit, color="red", ls=":", lw=0.9,
                   label="stellar cooling (external)")
    secax = ax.secondary_xaxis(
        "top", functions=(lambda m: m * 2.417989e14, lambda f: f / 2.417989e14))
    secax.set_xlabel("frequency (Hz)")
    ax.set_xlabel("axion mass (eV)")
    ax.set_ylabel("coupling g_ae")
    ax.legend(fontsize=7, loc="lower right")
    _save(fig, path)
