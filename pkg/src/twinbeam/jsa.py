"""
Joint spectral amplitude on a rectangular (ω_s, ω_i) grid.

J(ω_s, ω_i) = α(ω_s + ω_i − ω_p0) · Φ(ω_s, ω_i), Frobenius-normalized
so that Σ|J_ij|² = 1. Rows index the signal axis, columns the idler axis.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dispersion
from .dispersion import CrystalConfig, solve_qpm, wavelength_to_omega
from .errors import ConfigError, NumericalError, ResolutionError
from .pump import PumpConfig, envelope

MIN_POINTS = 64


def _check_axis(axis, name):
    axis = np.asarray(axis, dtype=float)
    if axis.ndim != 1 or axis.size < MIN_POINTS:
        raise ConfigError(f"{name} axis needs at least {MIN_POINTS} points")
    if np.any(np.diff(axis) <= 0):
        raise ConfigError(f"{name} axis must be strictly increasing")
    return axis


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Signal and idler angular-frequency axes in rad/fs."""

    signal: np.ndarray
    idler: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "signal", _check_axis(self.signal, "signal"))
        object.__setattr__(self, "idler", _check_axis(self.idler, "idler"))

    @property
    def shape(self):
        return self.signal.size, self.idler.size

    def refined(self, factor: int = 2) -> "FrequencyGrid":
        """Same span with ``factor`` times as many points per axis."""
        return FrequencyGrid(
            np.linspace(self.signal[0], self.signal[-1], factor * self.signal.size),
            np.linspace(self.idler[0], self.idler[-1], factor * self.idler.size),
        )


@dataclass(frozen=True, eq=False)
class JsaMatrix:
    values: np.ndarray
    grid: FrequencyGrid

    @property
    def intensity(self):
        return np.abs(self.values) ** 2

    def axis(self, which: str):
        return (self.grid.signal, self.grid.idler)[_axis_index(which)]


def build_jsa(crystal: CrystalConfig, pump: PumpConfig, grid: FrequencyGrid) -> JsaMatrix:
    ws, wi = np.meshgrid(grid.signal, grid.idler, indexing="ij")
    values = envelope(ws + wi - pump.omega0, pump) * dispersion.phase_matching(ws, wi, crystal)
    norm = np.linalg.norm(values)
    if not norm > 0 or not np.isfinite(norm):
        raise NumericalError("JSA has zero norm on this grid: no phase-matched support")
    return JsaMatrix(values / norm, grid)


def default_grid(
    crystal: CrystalConfig,
    pump: PumpConfig,
    n_points: int = 512,
    span_lobes: float = 6.0,
) -> FrequencyGrid:
    """Grid centered on the QPM solution and sized from the two spectral constraints.

    With a = k'_p − k'_s and b = k'_p − k'_i (inverse group velocities),
    the phase-matching ridge Δk = 0 crosses the pump band at a finite
    segment. Along the signal axis the pump confines the JSA to
    ``4σ_p·|b/(b−a)|`` and ``span_lobes`` sinc lobes along the
    anti-diagonal extend to ``span_lobes·2π / (L|a−b|)``; the wider of
    the two sets the half-span (likewise for the idler with ``a``).
    """
    if n_points < MIN_POINTS:
        raise ConfigError(f"n_points must be ≥ {MIN_POINTS}")
    if not span_lobes >= 2:
        raise ConfigError("span_lobes must be ≥ 2")
    lam_s, lam_i = solve_qpm(pump.wavelength, crystal)
    k1p = float(dispersion.inverse_group_velocity(pump.wavelength, crystal))
    a = k1p - float(dispersion.inverse_group_velocity(lam_s, crystal))
    b = k1p - float(dispersion.inverse_group_velocity(lam_i, crystal))
    if np.isclose(a, b):
        raise NumericalError("signal and idler group velocities coincide; grid undefined")
    lobe_extent = span_lobes * 2 * np.pi / (crystal.length_um * abs(a - b))
    half_s = max(4 * pump.sigma * abs(b / (b - a)), lobe_extent)
    half_i = max(4 * pump.sigma * abs(a / (b - a)), lobe_extent)
    ws0, wi0 = wavelength_to_omega(lam_s), wavelength_to_omega(lam_i)
    return FrequencyGrid(
        np.linspace(ws0 - half_s, ws0 + half_s, n_points),
        np.linspace(wi0 - half_i, wi0 + half_i, n_points),
    )


def fwhm(axis, profile) -> float:
    """Full width at half maximum of a single-peaked profile, linear interpolation."""
    axis = np.asarray(axis, dtype=float)
    profile = np.asarray(profile, dtype=float)
    peak = _central_argmax(profile)
    half = profile[peak] / 2
    if not half > 0:
        raise ResolutionError("profile has no positive maximum")
    if np.count_nonzero(profile >= half) < 3:
        raise ResolutionError("FWHM undefined: support narrower than 3 cells")

    left = peak
    while left > 0 and profile[left - 1] >= half:
        left -= 1
    right = peak
    while right < profile.size - 1 and profile[right + 1] >= half:
        right += 1
    if left == 0 or right == profile.size - 1:
        raise ResolutionError("profile does not fall to half maximum inside the grid")

    x_left = np.interp(half, [profile[left - 1], profile[left]], [axis[left - 1], axis[left]])
    x_right = np.interp(half, [profile[right + 1], profile[right]], [axis[right + 1], axis[right]])
    return float(x_right - x_left)


def _central_argmax(arr):
    """Index of the maximum; ties go to the entry nearest the array center."""
    flat = np.ravel(arr)
    candidates = np.flatnonzero(flat == flat.max())
    if candidates.size == 1:
        return int(candidates[0]) if np.ndim(arr) == 1 else np.unravel_index(candidates[0], np.shape(arr))
    coords = np.array(np.unravel_index(candidates, np.shape(arr))).T
    center = (np.array(np.shape(arr)) - 1) / 2
    best = candidates[np.argmin(np.sum((coords - center) ** 2, axis=1))]
    return int(best) if np.ndim(arr) == 1 else np.unravel_index(best, np.shape(arr))


def marginal_width(jsa: JsaMatrix, which_axis: str = "signal") -> float:
    """FWHM of |J|² summed over the other axis."""
    intensity = jsa.intensity
    profile = intensity.sum(axis=1) if _axis_index(which_axis) == 0 else intensity.sum(axis=0)
    return fwhm(jsa.axis(which_axis), profile)


def conditional_width(jsa: JsaMatrix, which_axis: str = "signal") -> float:
    """FWHM of the |J|² slice through the global maximum."""
    intensity = jsa.intensity
    i, j = _central_argmax(intensity)
    profile = intensity[:, j] if _axis_index(which_axis) == 0 else intensity[i, :]
    return fwhm(jsa.axis(which_axis), profile)


def fedorov_ratio(jsa: JsaMatrix, which_axis: str = "signal") -> float:
    """Marginal-to-conditional width ratio."""
    return marginal_width(jsa, which_axis) / conditional_width(jsa, which_axis)


def _axis_index(which):
    if which in ("signal", "s", 0):
        return 0
    if which in ("idler", "i", 1):
        return 1
    raise ValueError(f"unknown axis {which!r}; use 'signal' or 'idler'")


def write_jsa_csv(path, jsa: JsaMatrix) -> None:
    """Textual dump: header row holds the idler axis, first column the signal axis.

    Entries are complex numbers in Python ``repr`` form, e.g. ``(0.1-0.02j)``.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_s\\omega_i"] + [repr(float(w)) for w in jsa.grid.idler])
        for ws, row in zip(jsa.grid.signal, jsa.values):
            writer.writerow([repr(float(ws))] + [repr(complex(v)) for v in row])


def read_jsa_csv(path) -> JsaMatrix:
    with open(Path(path), newline="") as fh:
        rows = list(csv.reader(fh))
    idler = np.array([float(x) for x in rows[0][1:]])
    signal = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([[complex(x) for x in r[1:]] for r in rows[1:]])
    return JsaMatrix(values, FrequencyGrid(signal, idler))
