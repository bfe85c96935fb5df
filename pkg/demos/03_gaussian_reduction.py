"""Reducing a Gaussian state keeps it Gaussian.

A two-mode squeezed vacuum is pure, but each mode on its own is thermal with
purity 1/cosh(2r).  The reduced covariance is just the upper-left block; the
lattice check samples both closed forms and marginalizes the joint one.
"""

import numpy as np

from wigmarg import (
    gaussian_purity,
    is_pure,
    marginalize_b,
    reduce_gaussian,
    sample_gaussian_wigner,
    two_mode_squeezed,
)
from wigmarg.states import natural_grid

hbar = 1.0
for r in (0.0, 0.25, 0.5, 1.0):
    tms = two_mode_squeezed(r, hbar)
    red = reduce_gaussian(tms)
    print(f"r={r:4.2f}: joint pure={is_pure(tms).pure}, reduced purity {gaussian_purity(red):.6f}"
          f" (1/cosh 2r = {1 / np.cosh(2 * r):.6f}), reduced pure={is_pure(red).pure}")

grid = natural_grid(2, 48, hbar)
tms = two_mode_squeezed(0.5, hbar)
joint = sample_gaussian_wigner(tms, grid)
reduced = sample_gaussian_wigner(reduce_gaussian(tms), grid.with_dof(1))
print(f"lattice: max |int W dz_B - W_reduced| = "
      f"{np.max(np.abs(marginalize_b(joint).values - reduced.values)):.2e}")
