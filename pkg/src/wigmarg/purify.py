"""Purification of a finite-rank density matrix and the Wigner sum identity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite, gammaln

from .grid import Partition, PhaseSpaceGrid
from .hilbert import (
    DensityMatrix,
    WaveFunction,
    _gram_defect,
    spectral_decompose,
)
from .wigner import marginalize_b, wigner_transform

__all__ = [
    "Purification",
    "WigsumReport",
    "orthonormal_family",
    "purify",
    "verify_wigsum",
    "schmidt_weights",
]


@dataclass(frozen=True, eq=False)
class Purification:
    psi: WaveFunction
    weights: np.ndarray
    a_vectors: list[WaveFunction]
    b_vectors: list[WaveFunction]
    partition: Partition
    dropped_mass: float = 0.0

    @property
    def rank(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class WigsumReport:
    residual: float
    scale: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "scale": self.scale,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _hermite_function(k: int, x: np.ndarray, center: float, hbar: float) -> np.ndarray:
    xi = (x - center) / np.sqrt(hbar)
    log_norm = -0.5 * (k * np.log(2) + gammaln(k + 1) + 0.5 * np.log(np.pi))
    return eval_hermite(k, xi) * np.exp(log_norm - 0.5 * xi**2)


def _multi_indices(n: int, count: int):
    """Multi-indices ordered by total degree, then lexicographically."""
    out = []
    for degree in itertools.count():
        level = sorted(
            (idx for idx in itertools.product(range(degree + 1), repeat=n) if sum(idx) == degree)
        )
        out.extend(level)
        if len(out) >= count:
            return out[:count]


def orthonormal_family(grid: PhaseSpaceGrid, count: int, center: float = 0.0) -> list[WaveFunction]:
    """First ``count`` vectors of the ground packet times a polynomial ladder.

    The span is that of ``x^k * exp(-(x - center)^2 / (2 hbar))``; columns are
    built from the stable Hermite recurrence and then orthonormalized on the
    lattice by QR with a positive diagonal, so the result is deterministic.
    """
    if count > grid.dim:
        raise ValueError(f"cannot build {count} orthonormal vectors in dimension {grid.dim}")
    x = grid.x
    cols = []
    for idx in _multi_indices(grid.n, count):
        f = np.ones(grid.position_shape)
        for ax, k in enumerate(idx):
            shape = [1] * grid.n
            shape[ax] = grid.N
            f = f * _hermite_function(k, x, center, grid.hbar).reshape(shape)
        cols.append(f.reshape(-1))
    A = np.stack(cols, axis=1) * grid.dx ** (grid.n / 2)
    Q, R = np.linalg.qr(A)
    Q = Q * np.sign(np.diag(R))
    Q = Q / grid.dx ** (grid.n / 2)
    return [WaveFunction(grid, Q[:, j].reshape(grid.position_shape)) for j in range(count)]


def purify(rho_a: DensityMatrix, b_grid: PhaseSpaceGrid, b_vectors=None,
           threshold: float = 1e-12) -> Purification:
    """Pure state ``sum_j sqrt(w_j) phi_j^A (x) phi_j^B`` reducing to ``rho_a``.

    ``phi_j^A`` are the eigenvectors of ``rho_a``.  ``b_vectors`` defaults to
    :func:`orthonormal_family` on ``b_grid``; any orthonormal set of at least
    rank-many vectors may be given instead.  Eigenvalues at or below
    ``threshold`` are dropped and reported as ``dropped_mass``.
    """
    ga = rho_a.grid
    if not ga.same_lattice(b_grid):
        raise ValueError("B grid must share the lattice and hbar of the A grid")
    decomp = spectral_decompose(rho_a, threshold)
    r = decomp.rank
    if r > b_grid.dim:
        raise ValueError(f"rank {r} exceeds the B-space dimension {b_grid.dim}")
    if b_vectors is None:
        b_vectors = orthonormal_family(b_grid, r)
    else:
        b_vectors = list(b_vectors)
        if len(b_vectors) < r:
            raise ValueError(f"need {r} B vectors, got {len(b_vectors)}")
        b_vectors = b_vectors[:r]
        if any(v.grid != b_grid for v in b_vectors):
            raise ValueError("B vectors live on a different grid")
        if _gram_defect(b_vectors) > 1e-8:
            raise ValueError("B vectors are not orthonormal")
    part = Partition(ga.n, b_grid.n)
    amps = np.zeros(ga.position_shape + b_grid.position_shape, dtype=complex)
    for w, a, b in zip(decomp.weights, decomp.vectors, b_vectors):
        amps += np.sqrt(w) * np.multiply.outer(a.amplitudes, b.amplitudes)
    psi = WaveFunction(ga.with_dof(part.n), amps)
    return Purification(psi, decomp.weights, decomp.vectors, b_vectors, part, decomp.dropped_mass)


def verify_wigsum(pur: Purification, tol: float = 1e-6) -> WigsumReport:
    """Compare the B-marginal of ``W psi`` with ``sum_j w_j W phi_j^A``."""
    W_ab = wigner_transform(pur.psi)
    lhs = marginalize_b(W_ab, pur.partition).values
    rhs = np.zeros_like(lhs)
    for w, a in zip(pur.weights, pur.a_vectors):
        rhs += w * wigner_transform(a).values
    scale = float(np.max(np.abs(rhs)))
    residual = float(np.max(np.abs(lhs - rhs)))
    return WigsumReport(residual, scale, tol, bool(residual <= tol * scale))


def schmidt_weights(psi: WaveFunction, part: Partition) -> np.ndarray:
    """Squared singular values of the A x B amplitude matrix, descending."""
    part.require_bipartite(psi.grid.n)
    g = psi.grid
    M = psi.amplitudes.reshape(g.N**part.n_a, g.N**part.n_b) * g.dx ** (g.n / 2)
    return np.linalg.svd(M, compute_uv=False) ** 2
