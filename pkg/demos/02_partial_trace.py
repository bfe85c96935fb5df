"""Tracing out a subsystem equals integrating its Wigner distribution.

For a few bipartite states we compute the reduced state two ways:
  * in Hilbert space, by the partial trace of the density kernel, then its
    Wigner transform;
  * in phase space, by transforming the joint state and summing over (x_B, p_B).
The two agree to rounding error.
"""

import numpy as np

from wigmarg import marginalize_b, partial_trace_operator, purity, wigner_of_density
from wigmarg.states import natural_grid, state_family

rng = np.random.default_rng(7)
for hbar in (0.5, 1.0, 2.0):
    g = natural_grid(1, 32, hbar)
    for kind in ("pure", "product", "schmidt", "mixed"):
        rho = state_family(kind, g, g, rng)
        W = wigner_of_density(rho)
        via_operator = wigner_of_density(partial_trace_operator(rho)).values
        via_phase_space = marginalize_b(W).values
        rel = np.max(np.abs(via_operator - via_phase_space)) / np.max(np.abs(W.values))
        red_purity = purity(partial_trace_operator(rho))
        print(f"hbar={hbar:3.1f} {kind:8s} reduced purity {red_purity:.4f}  relative mismatch {rel:.1e}")
