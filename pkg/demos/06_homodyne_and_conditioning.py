"""
Quadrature squeezing and heralded states
========================================

Each Schmidt pair is a two-mode squeezed vacuum. Homodyne detection of
the signal-minus-idler quadrature with matched local oscillators shows
squeezing below the vacuum level. Detecting N photons in the signal arm
heralds an idler state whose purity drops as more modes share the photons.
"""

import numpy as np

from twinbeam.gaussian import (
    LoProjection,
    TmssState,
    condition_idler,
    covariance_oracle_variance,
    difference_quadrature_variance,
)

r = 1.0
state = TmssState([r], [0.0])
for theta in (0.0, np.pi / 4, np.pi / 2, np.pi):
    var = difference_quadrature_variance(state, LoProjection([1.0], [1.0], 0.0, theta))
    print(f"LO phase {theta:4.2f}: Var(X_s - X_i) = {var:.4f}  (vacuum = 1, e^-2r = {np.exp(-2 * r):.4f})")

# Two modes seen through imperfect local oscillators, checked against the
# full covariance-matrix calculation.
state = TmssState([1.0, 0.4], [0.0, 0.3])
proj = LoProjection([0.9, 0.3], [0.9, 0.3])
print(f"closed form {difference_quadrature_variance(state, proj):.12f}")
print(f"covariance  {covariance_oracle_variance(state, proj):.12f}")

# Heralding: purity of the idler after detecting N signal photons.
for mu, n in (([0.5], 3), ([0.5, 0.5], 1), ([0.5, 0.5], 2), ([0.6, 0.2], 2)):
    cond = condition_idler(TmssState.from_mu(mu), n)
    print(f"μ = {mu}, N = {n}: purity {cond.purity:.4f}, probability {cond.probability:.4f}")
