"""Chirped Gaussian pump: spectral envelope and duration bookkeeping.

Convention: ``tau_fwhm`` is the transform-limited *intensity* FWHM in the
time domain and ``sigma_p`` is the standard deviation of the *field*
spectrum, ``α(Ω) = exp(−Ω²/2σ_p²)``. The two are tied by
``σ_p = 2√ln2 / τ_fwhm``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import wavelength_to_omega
from .errors import ConfigError

_TWO_SQRT_LN2 = 2 * np.sqrt(np.log(2))
_FOUR_LN2 = 4 * np.log(2)


@dataclass(frozen=True)
class PumpConfig:
    """Center wavelength (µm), transform-limited FWHM (fs), GDD (fs²), pulse energy (J)."""

    wavelength: float = 1.026
    tau_fwhm: float = 260.0
    gdd: float = 0.0
    pulse_energy: float | None = 5e-6

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ConfigError(f"pump wavelength must be positive, got {self.wavelength!r}")
        if not self.tau_fwhm > 0:
            raise ConfigError(f"tau_fwhm must be positive, got {self.tau_fwhm!r}")
        if not np.isfinite(self.gdd):
            raise ConfigError("gdd must be finite")

    @property
    def omega0(self) -> float:
        return float(wavelength_to_omega(self.wavelength))

    @property
    def sigma(self) -> float:
        return spectral_sigma(self.tau_fwhm)

    @property
    def duration(self) -> float:
        """Stretched intensity FWHM in fs."""
        return stretched_duration(self.tau_fwhm, self.gdd)


def spectral_sigma(tau_fwhm):
    """Field-amplitude spectral std σ_p (rad/fs) for an intensity FWHM in fs."""
    tau_fwhm = np.asarray(tau_fwhm, dtype=float)
    if np.any(tau_fwhm <= 0):
        raise ConfigError("tau_fwhm must be positive")
    return _TWO_SQRT_LN2 / tau_fwhm


def transform_limited_duration(sigma):
    """Inverse of :func:`spectral_sigma`."""
    return _TWO_SQRT_LN2 / np.asarray(sigma, dtype=float)


def envelope(detuning, pump: PumpConfig):
    """Unnormalized complex spectral amplitude α(Ω) at pump detuning Ω (rad/fs)."""
    detuning = np.asarray(detuning, dtype=float)
    sq = detuning * detuning
    return np.exp(-sq / (2 * pump.sigma**2)) * np.exp(0.5j * pump.gdd * sq)


def stretched_duration(tau0, gdd):
    """Intensity FWHM of a Gaussian pulse of transform-limited FWHM ``tau0`` after ``gdd``."""
    tau0 = np.asarray(tau0, dtype=float)
    if np.any(tau0 <= 0):
        raise ConfigError("tau0 must be positive")
    return tau0 * np.sqrt(1 + (_FOUR_LN2 * np.asarray(gdd, dtype=float) / tau0**2) ** 2)


def constant_energy_gain(gain0, tau0, gdd):
    """Gain after stretching a pulse of fixed energy.

    Peak intensity falls as 1/τ and the gain follows √I, so
    ``G = G0·√(τ0/τ(gdd))``.
    """
    return np.asarray(gain0, dtype=float) * np.sqrt(tau0 / stretched_duration(tau0, gdd))
