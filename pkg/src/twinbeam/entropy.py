"""
Linear-entropy accounting for the reduced signal state of a multimode
twin-beam source.

Each signal mode is thermal with mean occupation N_n. The total linear
entropy is split hierarchically: the occupational part is the
π²-weighted average of per-mode entropies, the modal part is whatever
remains. The split needs no bright-limit approximation; the bright
limit (s_occ → 1/K, s_mod → 1 − 1/K) is a consequence.

The modal part is never negative: s_total = 1 − Π(1 − s_n) ≥ max s_n ≥ Σπ² s_n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .schmidt import HighGainPopulation


@dataclass(frozen=True)
class EntropyReport:
    s_total: float
    s_occ: float
    s_mod: float
    h_lin: float
    per_mode: tuple[float, ...]

    def as_dict(self):
        return {"S_total": self.s_total, "S_occ": self.s_occ, "S_mod": self.s_mod, "H_lin": self.h_lin}


def _photons(pop_or_photons):
    photons = np.asarray(getattr(pop_or_photons, "photons", pop_or_photons), dtype=float)
    if np.any(photons < 0):
        raise DomainError("mean photon numbers must be non-negative")
    return photons


def mode_linear_entropy(photons):
    """2N/(2N+1) for a thermal mode of mean occupation N."""
    n = _photons(photons)
    return 2 * n / (2 * n + 1)


def occupational_entropy(pop: HighGainPopulation) -> float:
    return float(np.sum(pop.weights**2 * mode_linear_entropy(pop.photons)))


def total_entropy(photons) -> float:
    """1 − Π 1/(2N_n + 1), computed in log space to survive many bright modes."""
    n = _photons(photons)
    log_purity = -np.sum(np.log1p(2 * n))
    return float(-np.expm1(log_purity))


def modal_entropy(pop: HighGainPopulation) -> float:
    # non-negative analytically; clamp the last-ulp residue of the log-space total
    return max(total_entropy(pop.photons) - occupational_entropy(pop), 0.0)


def report(pop: HighGainPopulation) -> EntropyReport:
    s_total = total_entropy(pop.photons)
    s_occ = occupational_entropy(pop)
    return EntropyReport(
        s_total=s_total,
        s_occ=s_occ,
        s_mod=max(s_total - s_occ, 0.0),
        h_lin=float(1 - np.sum(pop.weights**2)),
        per_mode=tuple(float(x) for x in mode_linear_entropy(pop.photons)),
    )


def population_from_photons(photons) -> HighGainPopulation:
    """Wrap raw per-mode photon numbers as a population (gain left undefined)."""
    n = _photons(photons)
    total = n.sum()
    if not total > 0:
        raise DomainError("population needs at least one occupied mode")
    return HighGainPopulation(float("nan"), np.arcsinh(np.sqrt(n)), n, n / total)


def modal_entropy_from_k(k):
    """(K − 1)/K, the bright-limit modal entropy quoted for a measured K."""
    k = np.asarray(k, dtype=float)
    return (k - 1) / k
