"""
Second-quantized twin-beam state as a product of two-mode squeezers.

Conventions: X = (a + a†)/√2, so a single vacuum quadrature has variance
1/2 and the signal-minus-idler difference has vacuum variance 1. A pair
with squeezing r and phase φ has μ = e^{iφ} tanh r and
⟨A B⟩ = e^{iφ} sinh r cosh r.

Local oscillators that only partly overlap the Schmidt modes
(Σ|c_n|² < 1) pick up vacuum for the missing fraction. The closed-form
variance below already accounts for that through its constant term; the
covariance-matrix route models it with one explicit vacuum ancilla per
arm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import ConfigError, DomainError, ResourceError
from .photonstats import block_generator

MAX_MODES = 8
MAX_PHOTONS = 20


@dataclass(frozen=True, eq=False)
class TmssState:
    squeezing: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.squeezing, dtype=float))
        phi = np.broadcast_to(np.asarray(self.phases, dtype=float), r.shape).copy()
        if np.any(r < 0):
            raise DomainError("squeezing parameters must be non-negative")
        object.__setattr__(self, "squeezing", r)
        object.__setattr__(self, "phases", phi)

    @classmethod
    def from_mu(cls, mu):
        mu = np.atleast_1d(np.asarray(mu, dtype=complex))
        if np.any(np.abs(mu) >= 1):
            raise DomainError("|μ_n| must be < 1")
        return cls(np.arctanh(np.abs(mu)), np.angle(mu))

    @property
    def mu(self):
        return np.exp(1j * self.phases) * np.tanh(self.squeezing)

    @property
    def n_modes(self) -> int:
        return self.squeezing.size

    @property
    def photons(self):
        return np.sinh(self.squeezing) ** 2


@dataclass(frozen=True, eq=False)
class LoProjection:
    """Overlaps c_n (signal LO) and d_n (idler LO) with the Schmidt modes, and LO phases."""

    c: np.ndarray
    d: np.ndarray
    theta_s: float = 0.0
    theta_i: float = 0.0

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c, dtype=complex))
        d = np.atleast_1d(np.asarray(self.d, dtype=complex))
        if c.shape != d.shape:
            raise ConfigError("c and d must have the same length")
        for name, v in (("c", c), ("d", d)):
            if np.sum(np.abs(v) ** 2) > 1 + 1e-9:
                raise ConfigError(f"Σ|{name}_n|² must not exceed 1")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)


def overlap_coefficients(lo_mode, modes, lo_axis=None, mode_axis=None):
    """c_n = Σ_j u*(ω_j) φ_n(ω_j) for mode columns ``modes[:, n]``.

    Both LO and modes are discrete unit vectors on the same axis.
    """
    u = np.asarray(lo_mode, dtype=complex)
    modes = np.asarray(modes, dtype=complex)
    if modes.ndim == 1:
        modes = modes[:, None]
    if u.ndim != 1 or modes.shape[0] != u.size:
        raise ConfigError("LO and Schmidt modes must be sampled on the same axis")
    if lo_axis is not None and mode_axis is not None:
        if np.shape(lo_axis) != np.shape(mode_axis) or not np.allclose(lo_axis, mode_axis, rtol=1e-12):
            raise ConfigError("LO axis differs from the Schmidt-mode axis")
    if abs(np.linalg.norm(u) - 1) > 1e-8:
        raise ConfigError("LO mode must be normalized")
    return u.conj() @ modes


def difference_quadrature_variance(state: TmssState, proj: LoProjection) -> float:
    """Var(X_s − X_i) from the closed-form multimode expression."""
    _check_sizes(state, proj)
    r, c, d = state.squeezing, proj.c, proj.d
    sh, ch = np.sinh(r), np.cosh(r)
    occupation = np.sum((np.abs(c) ** 2 + np.abs(d) ** 2) * sh**2)
    cross = np.exp(-1j * (proj.theta_s + proj.theta_i)) * np.sum(c * d * np.exp(1j * state.phases) * sh * ch)
    return float(1 + occupation - 2 * cross.real)


def _check_sizes(state, proj):
    if proj.c.size != state.n_modes:
        raise ConfigError(f"projection has {proj.c.size} coefficients for {state.n_modes} modes")


def tmss_symplectic(state: TmssState):
    """Real symplectic matrix of M two-mode squeezers plus two vacuum ancillas.

    Mode order: signal 0..M−1, idler M..2M−1, signal ancilla, idler
    ancilla. Quadrature order: all x, then all p.
    """
    m = state.n_modes
    size = 2 * m + 2
    u = np.eye(size, dtype=complex)
    v = np.zeros((size, size), dtype=complex)
    for n, (r, phi) in enumerate(zip(state.squeezing, state.phases)):
        u[n, n] = u[m + n, m + n] = np.cosh(r)
        v[n, m + n] = v[m + n, n] = np.exp(1j * phi) * np.sinh(r)
    return np.block([[(u + v).real, -(u - v).imag], [(u + v).imag, (u - v).real]])


def covariance_matrix(state: TmssState):
    s = tmss_symplectic(state)
    return 0.5 * s @ s.T


def _quadrature_row(coeffs, theta, size, offset, ancilla):
    """Real row vector g with X = g·R for a mode combination Σ w_n a_n."""
    w = np.zeros(size // 2, dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    w[offset : offset + c.size] = c * np.exp(-1j * theta)
    w[ancilla] = np.sqrt(max(0.0, 1 - np.sum(np.abs(c) ** 2))) * np.exp(-1j * theta)
    return np.concatenate([w.real, -w.imag])


def covariance_oracle_variance(state: TmssState, proj: LoProjection) -> float:
    """Var(X_s − X_i) from the full quadrature covariance matrix."""
    _check_sizes(state, proj)
    m = state.n_modes
    cov = covariance_matrix(state)
    size = cov.shape[0]
    g_s = _quadrature_row(proj.c, proj.theta_s, size, 0, 2 * m)
    g_i = _quadrature_row(proj.d, proj.theta_i, size, m, 2 * m + 1)
    h = g_s - g_i
    return float(h @ cov @ h)


@dataclass(frozen=True, eq=False)
class ConditionedIdler:
    """Diagonal idler mixture after detecting N signal photons."""

    patterns: np.ndarray
    weights: np.ndarray
    probability: float

    @property
    def purity(self) -> float:
        return float(np.sum(self.weights**2))

    def as_dict(self):
        return {
            "patterns": self.patterns.tolist(),
            "weights": self.weights.tolist(),
            "purity": self.purity,
            "probability": self.probability,
        }


def compositions(total: int, parts: int) -> np.ndarray:
    """All non-negative integer vectors of length ``parts`` summing to ``total``.

    Rows are in reverse-lexicographic order, (total, 0, …) first.
    """
    return _compositions(int(total), int(parts)).copy()


@lru_cache(maxsize=None)
def _compositions(total, parts):
    if parts == 1:
        return np.array([[total]], dtype=int)
    blocks = []
    for first in range(total, -1, -1):
        rest = _compositions(total - first, parts - 1)
        blocks.append(np.column_stack([np.full(rest.shape[0], first), rest]))
    return np.vstack(blocks)


def condition_idler(state: TmssState, n_photons: int, cutoff: int | None = None) -> ConditionedIdler:
    """Idler state conditioned on an N-photon detection in the signal arm.

    Every occupation pattern {k_n} with Σk_n = N carries weight
    ∝ Π|μ_n|^{2k_n}; patterns are enumerated exhaustively.
    """
    m = state.n_modes
    if n_photons < 0:
        raise DomainError("photon number must be non-negative")
    cutoff = n_photons if cutoff is None else cutoff
    if cutoff < n_photons:
        raise ConfigError("cutoff must be ≥ N")
    if m > MAX_MODES or n_photons > MAX_PHOTONS:
        raise ResourceError(
            f"refusing to enumerate {comb(n_photons + m - 1, m - 1)} patterns "
            f"(caps: M ≤ {MAX_MODES}, N ≤ {MAX_PHOTONS})"
        )
    patterns = compositions(n_photons, m)
    amp = np.abs(state.mu)
    scale = amp.max()
    if scale == 0:
        if n_photons == 0:
            return ConditionedIdler(patterns, np.ones(1), 1.0)
        raise DomainError("outcome has zero probability: all modes are vacuum")
    raw = np.prod((amp / scale) ** (2 * patterns), axis=1)
    norm = raw.sum()
    probability = float(np.prod(1 - amp**2) * norm * scale ** (2 * n_photons))
    keep = raw > 0
    return ConditionedIdler(patterns[keep], raw[keep] / norm, probability)


@dataclass(frozen=True, eq=False)
class TwinCounts:
    signal: np.ndarray
    idler: np.ndarray


def twin_number_correlation(state: TmssState, n_shots: int, seed: int = 0) -> TwinCounts:
    """Per-shot arm totals with pairwise-identical mode occupations (lossless)."""
    means = state.photons
    rng = block_generator(seed, 0)
    per_mode = rng.geometric(1.0 / (1.0 + means), size=(n_shots, means.size)) - 1
    totals = per_mode.sum(axis=1)
    return TwinCounts(totals, totals.copy())
