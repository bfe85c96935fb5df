"""The oscillator ground state on a phase-space lattice.

Build the ground-state packet, take its Wigner transform and compare with the
closed form exp(-(x^2 + p^2)/hbar) / (pi hbar).  Then shift the packet and
watch the peak move, and read the first two moments off the distribution.
"""

import numpy as np

from wigmarg import gaussian_wavepacket, pairing_via_symbol, wigner_transform
from wigmarg.states import natural_grid

hbar = 1.0
grid = natural_grid(1, 64, hbar)
print(f"lattice: N={grid.N}, dx={grid.dx:.4f}, dp={grid.dp:.4f}, dx*dp*N/(2 pi hbar)="
      f"{grid.dx * grid.dp * grid.N / (2 * np.pi * hbar):.15f}")

psi = gaussian_wavepacket(grid)
W = wigner_transform(psi)
X, P = grid.phase_mesh()
closed = np.exp(-(X**2 + P**2) / hbar) / (np.pi * hbar)
print(f"max |W - closed form|     = {np.max(np.abs(W.values - closed)):.2e}")
print(f"integral of W             = {W.integral():.15f}")
print(f"W at the origin * pi hbar = {W.values[32, 32] * np.pi * hbar:.15f}")

# a displaced packet needs room: widen the box so its tail still vanishes
wide = natural_grid(1, 64, hbar, half_width=12.0)
moved = wigner_transform(gaussian_wavepacket(wide, 2.0, -1.0))
i, k = np.unravel_index(np.argmax(moved.values), moved.values.shape)
print(f"displaced packet (2, -1) peaks at the node x={wide.x[i]:.3f}, p={wide.p[k]:.3f}")

for label, q in (("<x^2 + p^2>", X**2 + P**2), ("<p>", P)):
    print(f"{label:12s} = {pairing_via_symbol(q, psi, psi).real:.12f}")
