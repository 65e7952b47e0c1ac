"""
Brightness/gain relations and thermal-mode photon-number statistics.

Shot-to-shot photon numbers are modeled as a sum of independent thermal
modes. In the bright regime each mode contributes an exponential variate
with mean π_n·N_total; a geometric (Bose-Einstein) sampler is available
for dim sources. Random streams are counter-based: shots are cut into
fixed-size blocks and block ``b`` draws from ``Philox(key=seed)`` with
its high counter word set to ``b``, so results do not depend on the
number of workers.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigError, DomainError, NumericalError

BLOCK_SIZE = 1 << 16

#: fit window upper bound on pump photons/pulse, above which saturation sets in
SATURATION_PUMP_PHOTONS = 1.4e13


def mean_photons(gain):
    """⟨N⟩ = sinh²G."""
    gain = np.asarray(gain, dtype=float)
    if np.any(gain < 0):
        raise DomainError("gain must be non-negative")
    return np.sinh(gain) ** 2


def invert_gain(photons):
    """G = arcsinh(√N)."""
    photons = np.asarray(photons, dtype=float)
    if np.any(photons < 0):
        raise DomainError("photon number must be non-negative")
    return np.arcsinh(np.sqrt(photons))


def log_sinh(x):
    """log sinh(x) for x > 0 without overflow."""
    x = np.asarray(x, dtype=float)
    return x + np.log1p(-np.exp(-2 * x)) - np.log(2)


def fit_brightness_curve(points, window_max: float | None = SATURATION_PUMP_PHOTONS) -> float:
    """Fit ⟨N_S⟩ = sinh²(a√N_P) in log space; returns a (photons^-1/2).

    ``points`` is a sequence of (N_P, N_S) pairs. Points with
    N_P > ``window_max`` are excluded from the fit.
    """
    data = np.asarray(points, dtype=float).reshape(-1, 2)
    if window_max is not None:
        data = data[data[:, 0] <= window_max]
    if data.shape[0] < 1:
        raise NumericalError("no points inside the fit window")
    if np.any(data <= 0) or not np.all(np.isfinite(data)):
        raise NumericalError("brightness fit needs strictly positive, finite points")
    root_np, ns = np.sqrt(data[:, 0]), data[:, 1]
    log_ns = np.log(ns)
    # each point on its own pins a exactly; the optimum lies between them
    per_point = invert_gain(ns) / root_np
    lo, hi = per_point.min(), per_point.max()
    if hi - lo <= 1e-14 * hi:
        return float(per_point.mean())

    def cost(a):
        return float(np.sum((log_ns - 2 * log_sinh(a * root_np)) ** 2))

    res = minimize_scalar(cost, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10 * lo})
    if not res.success:
        raise NumericalError(f"brightness fit failed: {res.message}")
    return float(res.x)


@dataclass(frozen=True, eq=False)
class ShotEnsemble:
    photons: np.ndarray
    seed: int
    weights: np.ndarray
    n_total: float
    discrete: bool = False

    @property
    def n_shots(self) -> int:
        return self.photons.size

    @property
    def mean(self) -> float:
        return float(self.photons.mean())

    @property
    def std(self) -> float:
        return float(self.photons.std())

    def g2(self) -> float:
        return g2_estimator(self, exact=self.discrete)

    def histogram(self, bins=100, density=True):
        counts, edges = np.histogram(self.photons, bins=bins, density=density)
        return edges, counts

    def summary(self, n_batches: int = 100) -> dict:
        g2 = self.g2()
        return {
            "mean": self.mean,
            "std": self.std,
            "g2": g2,
            "K_g2": k_from_g2(g2) if g2 > 1 else float("inf"),
            "stderr": g2_stderr(self, n_batches=n_batches),
            "n_shots": self.n_shots,
            "seed": self.seed,
        }

    def summary_json(self, **kw) -> str:
        return json.dumps(self.summary(**kw), indent=2, sort_keys=True)


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Independent counter-based stream for one block of shots."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=[0, 0, 0, int(block)]))


def _sample_block(seed, block, size, means, discrete):
    rng = block_generator(seed, block)
    if discrete:
        draws = rng.geometric(1.0 / (1.0 + means), size=(size, means.size)) - 1
        return draws.sum(axis=1).astype(float)
    return (rng.standard_exponential((size, means.size)) * means).sum(axis=1)


def sample_shots(
    weights,
    n_total: float,
    n_shots: int,
    seed: int = 0,
    discrete: bool = False,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> ShotEnsemble:
    """Draw ``n_shots`` total photon numbers from independent thermal modes.

    Mode n has mean π_n·``n_total``. ``discrete=True`` switches to the
    Bose-Einstein (geometric) law, intended for means below ~100.
    """
    pi = np.asarray(weights, dtype=float)
    if pi.ndim != 1 or pi.size == 0 or np.any(pi < 0) or not np.isclose(pi.sum(), 1.0, atol=1e-9):
        raise ConfigError("weights must be a non-negative vector summing to 1")
    if not n_total > 0:
        raise ConfigError("n_total must be positive")
    if n_shots < 1:
        raise ConfigError("n_shots must be ≥ 1")
    means = pi * n_total
    starts = range(0, n_shots, block_size)
    jobs = [(seed, b, min(block_size, n_shots - s), means, discrete) for b, s in enumerate(starts)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(lambda job: _sample_block(*job), jobs))
    else:
        blocks = [_sample_block(*job) for job in jobs]
    return ShotEnsemble(np.concatenate(blocks), int(seed), pi, float(n_total), discrete)


def _samples(ensemble):
    return np.asarray(getattr(ensemble, "photons", ensemble), dtype=float)


def g2_estimator(ensemble, exact: bool = False) -> float:
    """⟨N²⟩/⟨N⟩² (bright approximation) or ⟨N(N−1)⟩/⟨N⟩² with ``exact``."""
    n = _samples(ensemble)
    if n.size < 2:
        raise NumericalError("g2 needs at least two shots")
    mean = n.mean()
    if not mean > 0:
        raise NumericalError("g2 undefined for a zero-mean ensemble")
    second = np.mean(n * (n - 1)) if exact else np.mean(n * n)
    return float(second / mean**2)


def g2_stderr(ensemble, n_batches: int = 100, exact: bool | None = None) -> float:
    """Standard error of g2 from the spread of per-batch estimates."""
    n = _samples(ensemble)
    if exact is None:
        exact = bool(getattr(ensemble, "discrete", False))
    n_batches = min(n_batches, n.size // 2)
    if n_batches < 2:
        raise NumericalError("too few shots to batch")
    usable = n[: n.size - n.size % n_batches].reshape(n_batches, -1)
    per_batch = [g2_estimator(row, exact=exact) for row in usable]
    return float(np.std(per_batch, ddof=1) / np.sqrt(n_batches))


def g2_theory(weights) -> float:
    """1 + Σπ² for independent thermal modes."""
    pi = np.asarray(weights, dtype=float)
    pi = pi / pi.sum()
    return float(1 + np.sum(pi * pi))


def k_from_g2(g2) -> float:
    """K_g2 = 1/(g2 − 1)."""
    if not g2 > 1:
        raise DomainError(f"super-thermal assumption violated: g2 = {g2} ≤ 1")
    return float(1.0 / (g2 - 1))
