"""
Photon-number statistics of thermal modes
=========================================

Each arm of a twin beam is a mixture of thermal modes. Its normalized
second-order correlation g² = 1 + Σπ² reveals the effective mode number.
Monte Carlo sampling uses counter-based random streams, so results
depend only on the seed.
"""

import numpy as np

from twinbeam.photonstats import fit_brightness_curve, g2_theory, invert_gain, k_from_g2, sample_shots

# Brightness: ⟨N_S⟩ = sinh²G. The gain behind a measured photon number:
for n in (1.296e8, 1e11):
    print(f"⟨N_S⟩ = {n:.3g}  ->  G = {float(invert_gain(n)):.3f}")

# Fit the slope a in G = a√N_P from (synthetic) brightness data.
n_p = np.geomspace(1e11, 1.2e13, 10)
n_s = np.sinh(3.8e-6 * np.sqrt(n_p)) ** 2 * np.exp(np.random.default_rng(0).normal(0, 0.03, 10))
print(f"fitted a = {fit_brightness_curve(np.column_stack([n_p, n_s])):.4e}")

# Single-mode thermal light: g² = 2 and mean ≈ standard deviation.
ens = sample_shots([1.0], 1.296e8, 1_000_000, seed=1)
s = ens.summary()
print(f"1 mode: g2 = {s['g2']:.4f} ± {s['stderr']:.4f}, mean/std = {s['mean'] / s['std']:.4f}")

# Several modes lower g² toward 1; inverting g² recovers K.
weights = np.array([0.8, 0.15, 0.05])
ens = sample_shots(weights, 1.296e8, 1_000_000, seed=2)
print(f"3 modes: g2 = {ens.g2():.4f} (theory {g2_theory(weights):.4f}), K_g2 = {k_from_g2(ens.g2()):.3f}")

# Histogram of shot-to-shot photon numbers, as exported by `twinbeam g2-sim --hist`.
edges, counts = ens.histogram(bins=8, density=False)
for lo, hi, c in zip(edges[:-1], edges[1:], counts):
    print(f"  [{lo:10.3e}, {hi:10.3e})  {c}")
