"""Trace, PSD, and table persistence.

Traces interchange as two-column CSV (``time_s,<label>``) or as a compact
binary container for large runs.  The binary layout, little-endian
throughout:

    bytes  0..3   magic ``b"AXSP"``
    bytes  4..5   format version, uint16 (currently 1)
    bytes  6..7   reserved, zero
    bytes  8..15  n_samples, uint64
    bytes 16..23  dt in seconds, float64
    bytes 24..31  t0 in seconds, float64
    bytes 32..39  generator seed, int64 (-1 when unseeded)
    bytes 40..    samples, n_samples x float64

Every CSV written here carries a header row whose column names include the
units.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .spectral import DynamicSnr, Psd, SidebandReport
from .trace import TimeGrid, Trace

_MAGIC = b"AXSP"
_VERSION = 1
_HEADER = struct.Struct("<4sHHQddq")


def write_trace_csv(path, trace: Trace, label: str = "value") -> None:
    t = trace.times()
    with open(path, "w") as fh:
        fh.write(f"time_s,{label}\n")
        for ti, vi in zip(t, trace.values):
            fh.write(f"{ti:.17g},{vi:.17g}\n")


def read_trace_csv(path) -> Trace:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise ValueError(f"{path} is not a two-column trace CSV")
    t, values = data[:, 0], data[:, 1]
    dt = float(t[1] - t[0])
    grid = TimeGrid(dt=dt, n_samples=len(values), t0=float(t[0]))
    return Trace(values, grid)


def write_trace_bin(path, trace: Trace) -> None:
    seed = -1 if trace.seed is None else int(trace.seed)
    header = _HEADER.pack(_MAGIC, _VERSION, 0, len(trace), trace.grid.dt,
                          trace.grid.t0, seed)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.asarray(trace.values, dtype="<f8").tobytes())


def read_trace_bin(path) -> Trace:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated trace container header")
        magic, version, _, n, dt, t0, seed = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}")
        if version != _VERSION:
            raise ValueError(f"{path}: unsupported container version {version}")
        payload = fh.read(8 * n)
    if len(payload) != 8 * n:
        raise ValueError(f"{path}: truncated sample payload")
    values = np.frombuffer(payload, dtype="<f8").copy()
    grid = TimeGrid(dt=dt, n_samples=int(n), t0=t0)
    return Trace(values, grid, seed=None if seed == -1 else seed)


def write_trace(path, trace: Trace, fmt: str, label: str = "value") -> Path:
    """Write in the requested format, returning the path with its extension."""
    path = Path(path)
    if fmt == "csv":
        out = path.with_suffix(".csv")
        write_trace_csv(out, trace, label)
    elif fmt == "bin":
        out = path.with_suffix(".bin")
        write_trace_bin(out, trace)
    else:
        raise ValueError(f"unknown trace format {fmt!r}")
    return out


def read_trace(path) -> Trace:
    path = Path(path)
    if path.suffix == ".bin":
        return read_trace_bin(path)
    return read_trace_csv(path)


def write_psd_csv(path, psd: Psd) -> None:
    with open(path, "w") as fh:
        fh.write("frequency_hz,power_per_hz\n")
        for f, p in zip(psd.frequencies, psd.power):
            fh.write(f"{f:.17g},{p:.17g}\n")


def write_cumulative_csv(path, psd: Psd, curve: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("frequency_hz,cumulative_power_fraction\n")
        for f, c in zip(psd.frequencies, curve):
            fh.write(f"{f:.17g},{c:.17g}\n")


def write_sideband_json(path, report: SidebandReport) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
        fh.write("\n")


def write_dynamic_snr_csv(path, series: DynamicSnr) -> None:
    with open(path, "w") as fh:
        fh.write("time_s,snr_db\n")
        for t, v in zip(series.times, series.values):
            fh.write(f"{t:.17g},{v:.17g}\n")


def write_scan_csv(path, rows) -> None:
    names = sorted(rows[0].g_ae_limits)
    limit_cols = ",".join(f"g_ae_limit_{name}" for name in names)
    with open(path, "w") as fh:
        fh.write(f"m_a_ev,f_axion_hz,{limit_cols},"
                 "dfsz_g_ae_low,dfsz_g_ae_tanbeta1,dfsz_g_ae_high\n")
        for row in rows:
            limits = ",".join(f"{row.g_ae_limits[name]:.17g}" for name in names)
            fh.write(f"{row.m_a_ev:.17g},{row.f_axion_hz:.17g},{limits},"
                     f"{row.dfsz_low:.17g},{row.dfsz_mid:.17g},"
                     f"{row.dfsz_high:.17g}\n")


def write_json(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
