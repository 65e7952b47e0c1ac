"""
Schmidt analysis of a JSA and the high-gain repopulation of its modes.

The mode functions come from the JSA alone and do not change with gain;
only their populations do. At gain G the n-th pair is squeezed by
r_n = G√λ_n and holds N_n = sinh²r_n photons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigError, NumericalError

#: eigenvalues below this fraction of λ₁ are dropped before population sums
TRUNCATION = 1e-12


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Descending Schmidt eigenvalues and the matching mode columns."""

    eigenvalues: np.ndarray
    signal_modes: np.ndarray
    idler_modes: np.ndarray

    @property
    def K(self) -> float:
        return schmidt_number(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        """Σ √λ_n φ_n ψ_nᵀ."""
        return (self.signal_modes * np.sqrt(self.eigenvalues)) @ self.idler_modes.T


@dataclass(frozen=True, eq=False)
class HighGainPopulation:
    gain: float
    squeezing: np.ndarray
    photons: np.ndarray
    weights: np.ndarray

    @property
    def K(self) -> float:
        return k_high_gain(self)


def _fix_phase(vectors):
    """Rotate each column so its largest-magnitude entry is real and positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivot = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivot) / pivot)


def decompose(jsa, n_modes: int | None = None) -> SchmidtSpectrum:
    """SVD-based Schmidt decomposition of a JSA (``JsaMatrix`` or 2-D array).

    J = U S V† gives λ_n = s_n²/Σs², signal modes U and idler modes V*,
    so that J = Σ √λ_n φ_n ψ_nᵀ. Each signal mode is phased so its
    largest-magnitude entry is real-positive and the idler mode takes
    the compensating phase.
    """
    values = np.asarray(getattr(jsa, "values", jsa))
    if values.ndim != 2:
        raise ConfigError("JSA must be a 2-D matrix")
    try:
        u, s, vh = np.linalg.svd(values, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    if n_modes is not None:
        u, s, vh = u[:, :n_modes], s[:n_modes], vh[:n_modes]
    total = np.sum(np.abs(values) ** 2)
    if not total > 0:
        raise NumericalError("cannot decompose a zero matrix")
    lam = s**2 / total

    phi = _fix_phase(u)
    # keep φ_n ψ_n products invariant: ψ absorbs the conjugate rotation
    rotation = np.sum(phi.conj() * u, axis=0)
    psi = vh.T * rotation
    return SchmidtSpectrum(lam, phi, psi)


def schmidt_number(eigenvalues) -> float:
    """K = 1/Σλ², with λ renormalized to unit sum."""
    lam = np.asarray(eigenvalues, dtype=float)
    if lam.size == 0:
        raise ConfigError("empty Schmidt spectrum")
    total = lam.sum()
    if not total > 0:
        raise NumericalError("Schmidt spectrum sums to zero")
    p = lam / total
    return float(1.0 / np.sum(p * p))


def truncate(eigenvalues, rel: float = TRUNCATION):
    lam = np.sort(np.asarray(eigenvalues, dtype=float))[::-1]
    return lam[lam > rel * lam[0]]


def high_gain_populations(eigenvalues, gain: float) -> HighGainPopulation:
    if gain < 0:
        raise ConfigError("gain must be non-negative")
    if gain == 0:
        raise NumericalError("zero-gain populations: weights undefined when all N_n = 0")
    lam = truncate(eigenvalues)
    r = gain * np.sqrt(lam)
    photons = np.sinh(r) ** 2
    total = photons.sum()
    if not np.isfinite(total):
        raise NumericalError(f"photon numbers overflow at G = {gain}")
    return HighGainPopulation(float(gain), r, photons, photons / total)


def k_high_gain(pop: HighGainPopulation) -> float:
    """K_HG = 1/Σπ²."""
    return float(1.0 / np.sum(pop.weights**2))


def mode_time_profile(mode, axis):
    """Temporal envelope of a spectral mode sampled on a uniform ω axis.

    Uses a unitary DFT about the axis midpoint, so the discrete L² norm is
    preserved and ``t`` spans 2π/Δω with spacing 2π/(n Δω). The sign
    convention E(t) = Σ φ(Ω) e^{−iΩt} means a spectral phase e^{iΩt₀}
    delays the envelope by t₀.

    Returns ``(t, field)`` with t in fs when ω is in rad/fs.
    """
    mode = np.asarray(mode, dtype=complex)
    axis = np.asarray(axis, dtype=float)
    steps = np.diff(axis)
    if axis.shape != mode.shape or axis.ndim != 1:
        raise ConfigError("mode and axis must be 1-D arrays of equal length")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ConfigError("mode_time_profile needs a uniformly spaced axis")
    n = axis.size
    dt = 2 * np.pi / (n * steps[0])
    t = (np.arange(n) - n // 2) * dt
    field = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(mode), norm="ortho"))
    return t, field


def gain_for_k(eigenvalues, target: float, bounds: tuple[float, float] = (1e-3, 80.0)) -> float:
    """Gain G at which K_HG of the given spectrum equals ``target``.

    K_HG falls monotonically from K_LG (G → 0) toward 1, so the target
    must lie strictly between those limits.
    """
    lam = truncate(eigenvalues)

    def excess(g):
        return k_high_gain(high_gain_populations(lam, g)) - target

    lo, hi = bounds
    if not excess(lo) > 0:
        raise NumericalError(f"K_HG = {target} exceeds the low-gain Schmidt number")
    if not excess(hi) < 0:
        raise NumericalError(f"K_HG = {target} not reached for G ≤ {hi}")
    return float(brentq(excess, lo, hi, xtol=1e-12))
