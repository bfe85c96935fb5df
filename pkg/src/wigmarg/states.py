"""Seeded generators for test states.

Grids built by :func:`natural_grid` scale their bounds with ``sqrt(hbar)`` so
that the same generator parameters give boundary-negligible states for any
hbar.
"""

from __future__ import annotations

import numpy as np

from .grid import Partition, PhaseSpaceGrid, make_grid
from .hilbert import (
    DensityMatrix,
    SpectralDecomposition,
    WaveFunction,
    assemble_density,
    gaussian_wavepacket,
    normalize,
    projector,
    tensor_product,
)
from .purify import orthonormal_family

__all__ = [
    "natural_grid",
    "orthonormalize",
    "random_packets",
    "random_mixed",
    "product_state",
    "schmidt_state",
    "state_family",
]


def natural_grid(n: int, N: int, hbar: float = 1.0, half_width: float = 9.0) -> PhaseSpaceGrid:
    r = half_width * np.sqrt(hbar)
    return make_grid(n, N, -r, r, hbar)


def orthonormalize(states: list[WaveFunction]) -> list[WaveFunction]:
    """Lattice-orthonormal vectors spanning the same space (QR, positive diagonal)."""
    grid = states[0].grid
    s = grid.dx ** (grid.n / 2)
    A = np.stack([psi.vector for psi in states], axis=1) * s
    Q, R = np.linalg.qr(A)
    Q = Q * (np.diag(R) / np.abs(np.diag(R))).conj()
    return [WaveFunction(grid, Q[:, j].reshape(grid.position_shape) / s) for j in range(len(states))]


def random_packets(grid: PhaseSpaceGrid, count: int, rng: np.random.Generator,
                   spread: float = 0.75) -> list[WaveFunction]:
    """Independent random Gaussian packets (not orthogonalized).

    Centers and mean momenta are drawn within ``spread*sqrt(hbar)`` of the
    origin, widths between 0.8 and 1 times the ground-state width.
    """
    root = np.sqrt(grid.hbar)
    out = []
    for _ in range(count):
        x0 = rng.uniform(-spread, spread, size=grid.n) * root
        p0 = rng.uniform(-spread, spread, size=grid.n) * root
        w = rng.uniform(0.8, 1.0, size=grid.n) * np.sqrt(grid.hbar / 2)
        out.append(gaussian_wavepacket(grid, x0, p0, w))
    return out


def random_mixed(grid: PhaseSpaceGrid, rank: int, rng: np.random.Generator,
                 partition: Partition | None = None, spread: float = 0.75) -> DensityMatrix:
    """Mixture of ``rank`` orthonormalized random packets with Dirichlet weights."""
    vectors = orthonormalize(random_packets(grid, rank, rng, spread))
    weights = rng.dirichlet(np.ones(rank))
    return assemble_density(SpectralDecomposition(weights, vectors), partition)


def product_state(grid_a: PhaseSpaceGrid, grid_b: PhaseSpaceGrid, rng: np.random.Generator,
                  rank_a: int = 2, rank_b: int = 2):
    """``rho_A (x) rho_B`` with random mixed factors; returns ``(rho, rho_A, rho_B)``."""
    rho_a = random_mixed(grid_a, rank_a, rng)
    rho_b = random_mixed(grid_b, rank_b, rng)
    part = Partition(grid_a.n, grid_b.n)
    K = np.kron(rho_a.kernel, rho_b.kernel)
    return DensityMatrix(grid_a.with_dof(part.n), K, part), rho_a, rho_b


def schmidt_state(grid_a: PhaseSpaceGrid, grid_b: PhaseSpaceGrid, weights,
                  a_vectors=None, b_vectors=None) -> WaveFunction:
    """``sum_j sqrt(w_j) a_j (x) b_j``; factors default to the Hermite ladders."""
    weights = np.asarray(weights, dtype=float)
    r = len(weights)
    a_vectors = a_vectors or orthonormal_family(grid_a, r)
    b_vectors = b_vectors or orthonormal_family(grid_b, r)
    amps = sum(
        np.sqrt(w) * tensor_product(a, b).amplitudes
        for w, a, b in zip(weights, a_vectors, b_vectors)
    )
    return normalize(WaveFunction(grid_a.with_dof(grid_a.n + grid_b.n), amps))


def state_family(kind: str, grid_a: PhaseSpaceGrid, grid_b: PhaseSpaceGrid,
                 rng: np.random.Generator) -> DensityMatrix:
    """One bipartite test state of the requested ``kind``.

    Kinds: ``pure`` (random entangled superposition of product packets),
    ``product``, ``schmidt`` (rank-2 Schmidt state with random weights) and
    ``mixed`` (random rank 2 to 4).
    """
    part = Partition(grid_a.n, grid_b.n)
    grid = grid_a.with_dof(part.n)
    if kind == "pure":
        terms = [
            tensor_product(a, b)
            for a, b in zip(random_packets(grid_a, 3, rng), random_packets(grid_b, 3, rng))
        ]
        coeffs = rng.normal(size=3) + 1j * rng.normal(size=3)
        psi = normalize(WaveFunction(grid, sum(c * t.amplitudes for c, t in zip(coeffs, terms))))
        rho = projector(psi)
        return DensityMatrix(grid, rho.kernel, part)
    if kind == "product":
        return product_state(grid_a, grid_b, rng)[0]
    if kind == "schmidt":
        lam = rng.uniform(0.2, 0.8)
        psi = schmidt_state(grid_a, grid_b, [lam, 1 - lam])
        return DensityMatrix(grid, projector(psi).kernel, part)
    if kind == "mixed":
        rank = int(rng.integers(2, 5))
        return random_mixed(grid, rank, rng, part)
    raise ValueError(f"unknown state kind {kind!r}")
