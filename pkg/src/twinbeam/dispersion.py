"""
Extraordinary-index dispersion of lithium niobate and first-order
quasi-phase-matching kinematics for collinear type-0 interaction.

Units used throughout the package
---------------------------------
- wavelength: µm (vacuum)
- angular frequency: rad/fs
- wavenumber and phase mismatch: rad/µm
- temperature: K

All three waves (pump, signal, idler) are e-polarized, so one Sellmeier
branch serves every wave.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DispersionDomainError, PhaseMatchingError

#: speed of light in µm/fs
C_UM_PER_FS = 0.299792458

#: validity window of the Sellmeier model, µm
VALID_WINDOW = (0.3, 5.5)


@dataclass(frozen=True)
class SellmeierCoefficients:
    """Temperature-dependent Sellmeier set for the extraordinary index.

    ``n² = a1 + f b1 + (a2 + f b2)/(λ² − (a3 + f b3)²) + (a4 + f b4)/(λ² − a5²) − a6 λ²``
    with ``f = T² − T_room²``. Defaults are the manufacturer's published
    set for congruent MgO:LN; ``T_room`` = 24.5 °C is the reference
    temperature of that set.
    """

    a1: float = 5.756
    a2: float = 0.0983
    a3: float = 0.202
    a4: float = 189.32
    a5: float = 12.52
    a6: float = 0.0132
    b1: float = 2.86e-6
    b2: float = 4.7e-8
    b3: float = 6.113e-8
    b4: float = 1.516e-4
    T_room: float = 297.65


@dataclass(frozen=True)
class CrystalConfig:
    """Poled crystal: period in µm, length in mm, temperature in K."""

    poling_period: float = 27.91
    length: float = 2.0
    temperature: float = 340.0
    sellmeier: SellmeierCoefficients = field(default_factory=SellmeierCoefficients)

    def __post_init__(self):
        for name in ("poling_period", "length", "temperature"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DispersionDomainError(f"{name} must be positive, got {value!r}")

    @property
    def length_um(self) -> float:
        return self.length * 1e3

    @property
    def grating_vector(self) -> float:
        """2π/Λ in rad/µm."""
        return 2 * np.pi / self.poling_period


class QpmSolution(NamedTuple):
    signal: float
    idler: float


def wavelength_to_omega(wavelength):
    return 2 * np.pi * C_UM_PER_FS / np.asarray(wavelength, dtype=float)


def omega_to_wavelength(omega):
    return 2 * np.pi * C_UM_PER_FS / np.asarray(omega, dtype=float)


def sellmeier_terms(wavelength, temperature, s: SellmeierCoefficients):
    """Return the four additive terms of n² (constant, UV pole, IR pole, IR absorption)."""
    lam2 = np.asarray(wavelength, dtype=float) ** 2
    f = temperature**2 - s.T_room**2
    const = s.a1 + f * s.b1
    uv = (s.a2 + f * s.b2) / (lam2 - (s.a3 + f * s.b3) ** 2)
    ir = (s.a4 + f * s.b4) / (lam2 - s.a5**2)
    absorption = -s.a6 * lam2
    return const, uv, ir, absorption


def refractive_index(wavelength, temperature: float, s: SellmeierCoefficients | None = None):
    """Extraordinary refractive index at ``wavelength`` (µm) and ``temperature`` (K).

    Raises :class:`DispersionDomainError` if any wavelength falls outside
    :data:`VALID_WINDOW` or if n² is not positive.
    """
    s = SellmeierCoefficients() if s is None else s
    lam = np.asarray(wavelength, dtype=float)
    lo, hi = VALID_WINDOW
    bad = ~((lam >= lo) & (lam <= hi))
    if np.any(bad):
        offender = lam[bad].flat[0]
        raise DispersionDomainError(
            f"wavelength term: λ = {offender:.6g} µm outside Sellmeier window [{lo}, {hi}] µm"
        )
    terms = sellmeier_terms(lam, temperature, s)
    n2 = terms[0] + terms[1] + terms[2] + terms[3]
    if np.any(n2 <= 0) or not np.all(np.isfinite(n2)):
        idx = np.flatnonzero(~(n2 > 0))[0]
        names = ("constant", "UV-pole", "IR-pole", "IR-absorption")
        values = [np.broadcast_to(t, lam.shape).flat[idx] for t in terms]
        worst = names[int(np.argmin(values))]
        raise DispersionDomainError(
            f"n² = {n2.flat[idx]:.6g} ≤ 0 at λ = {lam.flat[idx]:.6g} µm "
            f"(most negative contribution: {worst} term)"
        )
    return np.sqrt(n2)


def wavenumber(omega, temperature: float, s: SellmeierCoefficients | None = None):
    """k(ω) = n(2πc/ω) ω / c in rad/µm, for ω in rad/fs."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DispersionDomainError("angular frequency must be positive")
    return refractive_index(omega_to_wavelength(omega), temperature, s) * omega / C_UM_PER_FS


def delta_k(omega_s, omega_i, crystal: CrystalConfig):
    """Phase mismatch k_p(ω_s+ω_i) − k_s(ω_s) − k_i(ω_i) − 2π/Λ (rad/µm)."""
    T, s = crystal.temperature, crystal.sellmeier
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    return (
        wavenumber(omega_s + omega_i, T, s)
        - wavenumber(omega_s, T, s)
        - wavenumber(omega_i, T, s)
        - crystal.grating_vector
    )


def sinc(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x) / np.pi)


def phase_matching(omega_s, omega_i, crystal: CrystalConfig):
    """Complex phase-matching amplitude sinc(ΔkL/2)·exp(iΔkL/2)."""
    half = delta_k(omega_s, omega_i, crystal) * crystal.length_um / 2
    return sinc(half) * np.exp(1j * half)


def _signal_band(pump_wavelength, band):
    lo, hi = band
    # idler must stay inside the Sellmeier window too
    idler_limit = 1.0 / (1.0 / pump_wavelength - 1.0 / (VALID_WINDOW[1] * (1 - 1e-9)))
    lo = max(lo, idler_limit, pump_wavelength * (1 + 1e-9))
    hi = min(hi, 2 * pump_wavelength * (1 - 1e-9))
    return lo, hi


def solve_qpm(
    pump_wavelength: float,
    crystal: CrystalConfig,
    band: tuple[float, float] = (1.1, 2.05),
    n_scan: int = 400,
) -> QpmSolution:
    """Energy-conserving (λ_s, λ_i) pair with Δk = 0 on the non-degenerate branch.

    The signal band is scanned for a sign change of Δk and the root is
    polished with Brent's method. The band is clipped so that the idler
    stays within the Sellmeier window and λ_s < 2λ_p. If more than one
    root exists the shortest-wavelength signal is returned.
    """
    omega_p = float(wavelength_to_omega(pump_wavelength))
    lo, hi = _signal_band(pump_wavelength, band)
    if lo >= hi:
        raise PhaseMatchingError(
            f"not phase-matchable: empty signal band after clipping ({lo:.4g} ≥ {hi:.4g} µm)"
        )
    lam_s = np.linspace(lo, hi, n_scan)
    omega_s = wavelength_to_omega(lam_s)
    dk = delta_k(omega_s, omega_p - omega_s, crystal)
    crossings = np.flatnonzero(np.sign(dk[:-1]) * np.sign(dk[1:]) <= 0)
    if crossings.size == 0:
        raise PhaseMatchingError(
            f"not phase-matchable: Δk ∈ [{dk.min():.4g}, {dk.max():.4g}] rad/µm has no "
            f"sign change for λ_s ∈ [{lo:.4g}, {hi:.4g}] µm "
            f"(Λ = {crystal.poling_period} µm, T = {crystal.temperature} K)"
        )
    j = crossings[0]

    def mismatch(w):
        return float(delta_k(w, omega_p - w, crystal))

    # ω decreases along the wavelength scan
    w_root = brentq(mismatch, omega_s[j + 1], omega_s[j], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return QpmSolution(float(omega_to_wavelength(w_root)), float(omega_to_wavelength(omega_p - w_root)))


def temperature_for_signal(
    signal_wavelength: float,
    pump_wavelength: float,
    crystal: CrystalConfig,
    bounds: tuple[float, float] = (293.0, 473.0),
) -> float:
    """Crystal temperature (K) that phase-matches the requested signal wavelength."""
    omega_p = float(wavelength_to_omega(pump_wavelength))
    omega_s = float(wavelength_to_omega(signal_wavelength))

    def mismatch(T):
        trial = CrystalConfig(crystal.poling_period, crystal.length, T, crystal.sellmeier)
        return float(delta_k(omega_s, omega_p - omega_s, trial))

    lo, hi = bounds
    if mismatch(lo) * mismatch(hi) > 0:
        raise PhaseMatchingError(
            f"signal {signal_wavelength} µm cannot be phase-matched for T in [{lo}, {hi}] K"
        )
    return brentq(mismatch, lo, hi, xtol=1e-10)


def inverse_group_velocity(wavelength, crystal: CrystalConfig, rel_step: float = 1e-4):
    """dk/dω in fs/µm by central finite difference with δω = rel_step·ω."""
    omega = wavelength_to_omega(wavelength)
    h = rel_step * omega
    T, s = crystal.temperature, crystal.sellmeier
    return (wavenumber(omega + h, T, s) - wavenumber(omega - h, T, s)) / (2 * h)


def group_velocity_mismatch(
    wavelength_a, wavelength_b, crystal: CrystalConfig, rel_step: float = 1e-4
):
    """1/v_g(λ_a) − 1/v_g(λ_b) in fs/mm."""
    return 1e3 * (
        inverse_group_velocity(wavelength_a, crystal, rel_step)
        - inverse_group_velocity(wavelength_b, crystal, rel_step)
    )
