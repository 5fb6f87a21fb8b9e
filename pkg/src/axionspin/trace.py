"""Uniform time grids and sampled traces.

A :class:`TimeGrid` is the shared clock for every generator and filter in
the package; a :class:`Trace` is a real-valued signal sampled on one, with
optional seed provenance so noise realizations can be traced back to their
generator state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TimeGrid:
    """Uniformly sampled time axis.

    Parameters
    ----------
    dt : float
        Sample interval in seconds.
    n_samples : int
        Number of samples; at least 2.
    t0 : float
        Start time in seconds.
    """

    dt: float
    n_samples: int
    t0: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.dt

    @property
    def nyquist(self) -> float:
        return 0.5 / self.dt

    @property
    def duration(self) -> float:
        return self.n_samples * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n_samples)

    def check_frequency(self, f: float, name: str = "frequency") -> None:
        """Raise if ``f`` is not resolvable on this grid."""
        if f >= self.nyquist:
            raise ValueError(
                f"{name} {f:g} Hz is at or above the Nyquist frequency "
                f"{self.nyquist:g} Hz of the grid"
            )


@dataclass(frozen=True)
class Trace:
    """Real-valued signal on a :class:`TimeGrid`.

    ``seed`` records the generator seed that produced the samples (None for
    deterministic signals); ``name`` is a free-form label used in file
    headers.
    """

    values: np.ndarray
    grid: TimeGrid
    seed: int | None = None
    name: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("trace values must be one-dimensional")
        if values.shape[0] != self.grid.n_samples:
            raise ValueError(
                f"trace length {values.shape[0]} does not match grid "
                f"n_samples {self.grid.n_samples}"
            )
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.grid.n_samples

    def times(self) -> np.ndarray:
        return self.grid.times()

    def with_values(self, values: np.ndarray, name: str | None = None) -> "Trace":
        """New trace on the same grid, preserving provenance."""
        return Trace(values, self.grid, seed=self.seed,
                     name=self.name if name is None else name)
