"""
Gain narrowing and the entropy partition
========================================

At high parametric gain each Schmidt pair becomes a two-mode squeezer
with photon number sinh²(G√λ). Stronger modes grow faster, so the
effective mode number K_HG falls with G. The linear entropy of one arm
splits into an occupational part (photon-number uncertainty within
modes) and a modal part (spread over several modes).
"""

import numpy as np

from twinbeam.dispersion import CrystalConfig
from twinbeam.entropy import modal_entropy_from_k, report
from twinbeam.jsa import build_jsa, default_grid
from twinbeam.pump import PumpConfig
from twinbeam.schmidt import decompose, high_gain_populations

crystal, pump = CrystalConfig(), PumpConfig(gdd=3e4)
spectrum = decompose(build_jsa(crystal, pump, default_grid(crystal, pump)))
print(f"chirped pump (GDD = 3e4 fs²): K_LG = {spectrum.K:.3f}")

print(" G     K_HG     S_occ    S_mod   (K-1)/K")
for gain in (0.5, 2, 4, 6, 8, 10):
    pop = high_gain_populations(spectrum.eigenvalues, gain)
    ent = report(pop)
    print(f"{gain:4.1f}  {pop.K:7.4f}  {ent.s_occ:7.4f}  {ent.s_mod:7.4f}  {modal_entropy_from_k(pop.K):7.4f}")

# Bright, equal modes: the occupational part tends to 1/K, the modal part to 1 - 1/K.
for k in (1, 2, 4):
    pop = high_gain_populations(np.full(k, 1 / k), 20.0)
    ent = report(pop)
    print(f"{k} equal bright modes: S_occ = {ent.s_occ:.4f}, S_mod = {ent.s_mod:.4f}")
