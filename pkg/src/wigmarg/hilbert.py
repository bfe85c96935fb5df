"""Wavefunctions and density matrices on position lattices.

Kernels carry continuum normalization: entry ``(i, j)`` of a density kernel is
``<x_i|rho|x_j>`` and the trace is ``sum(diag) * dx**n``.  The operator-level
partial trace here is the reference against which the phase-space route in
:mod:`wigmarg.wigner` is checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Partition, PhaseSpaceGrid

__all__ = [
    "WaveFunction",
    "DensityMatrix",
    "SpectralDecomposition",
    "MAX_DIM",
    "normalize",
    "inner",
    "gaussian_wavepacket",
    "assemble_density",
    "spectral_decompose",
    "tensor_product",
    "partial_trace_operator",
    "purity",
    "projector",
]

#: Hard cap on the number of lattice rows of a dense density matrix.
MAX_DIM = 4096


@dataclass(frozen=True, eq=False)
class WaveFunction:
    grid: PhaseSpaceGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != self.grid.position_shape:
            raise ValueError(
                f"amplitudes shape {amps.shape} does not match grid {self.grid.position_shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx**self.grid.n))

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def boundary_max(self) -> float:
        return _boundary_max(self.amplitudes)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Dense kernel ``<x_i|rho|x_j>`` over the flattened position lattice.

    Construction only checks shapes.  Call :meth:`validate` for the
    Hermitian/trace/positivity invariants.
    """

    grid: PhaseSpaceGrid
    kernel: np.ndarray
    partition: Partition | None = None

    def __post_init__(self):
        dim = self.grid.dim
        if dim > MAX_DIM:
            raise ValueError(f"dense density matrices are capped at {MAX_DIM} rows, got {dim}")
        K = np.asarray(self.kernel, dtype=complex)
        if K.shape != (dim, dim):
            raise ValueError(f"kernel shape {K.shape} does not match grid dimension {dim}")
        if self.partition is not None and self.partition.n != self.grid.n:
            raise ValueError("partition does not match grid")
        object.__setattr__(self, "kernel", K)

    @property
    def measure(self) -> float:
        return self.grid.dx**self.grid.n

    def trace(self) -> complex:
        return complex(np.trace(self.kernel) * self.measure)

    def operator(self) -> np.ndarray:
        """Matrix acting on lattice vectors with the Euclidean inner product."""
        return self.kernel * self.measure

    def validate(self, trace_tol=1e-8, herm_tol=1e-10, psd_tol=1e-10) -> None:
        K = self.kernel
        scale = np.max(np.abs(K))
        if np.max(np.abs(K - K.conj().T)) > herm_tol * scale:
            raise ValueError("kernel is not Hermitian")
        tr = self.trace()
        if abs(tr - 1) > trace_tol:
            raise ValueError(f"trace {tr.real:.12g} differs from 1")
        evals = np.linalg.eigvalsh(self.operator())
        if evals[0] < -psd_tol * max(evals[-1], 0.0):
            raise ValueError(f"kernel is not positive semi-definite (min eigenvalue {evals[0]:.3g})")

    def boundary_max(self) -> float:
        shape = self.grid.position_shape * 2
        return _boundary_max(self.kernel.reshape(shape))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    weights: np.ndarray
    vectors: list[WaveFunction]
    dropped_mass: float = 0.0
    grid: PhaseSpaceGrid | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if len(self.weights) != len(self.vectors):
            raise ValueError("need one weight per vector")
        if self.grid is None and self.vectors:
            object.__setattr__(self, "grid", self.vectors[0].grid)

    @property
    def rank(self) -> int:
        return len(self.weights)


def _boundary_max(arr: np.ndarray) -> float:
    """Largest magnitude on the first/last slice of any axis."""
    out = 0.0
    for ax in range(arr.ndim):
        first = np.take(arr, 0, axis=ax)
        last = np.take(arr, -1, axis=ax)
        out = max(out, float(np.max(np.abs(first))), float(np.max(np.abs(last))))
    return out


def inner(phi: WaveFunction, psi: WaveFunction) -> complex:
    """``<phi|psi>``, antilinear in the first argument."""
    _require_same_grid(phi.grid, psi.grid)
    return complex(np.vdot(phi.amplitudes, psi.amplitudes) * phi.grid.dx**phi.grid.n)


def normalize(psi: WaveFunction) -> WaveFunction:
    nrm = psi.norm()
    if not nrm > 0:
        raise ValueError("cannot normalize the zero vector")
    return WaveFunction(psi.grid, psi.amplitudes / nrm)


def gaussian_wavepacket(grid: PhaseSpaceGrid, center_x=0.0, center_p=0.0, width=None,
                        leak_tol=1e-12) -> WaveFunction:
    """Normalized packet ``exp(-(x-x0)^2/(4 w^2) + i p0 x / hbar)`` per axis.

    ``width`` is the position standard deviation of ``|psi|^2``; the default
    ``sqrt(hbar/2)`` gives the oscillator ground state.  Scalar
    arguments are broadcast over all axes.  Raises if the packet is not
    negligible (``leak_tol`` absolute, after normalization) at the grid edge.
    """
    n = grid.n
    if width is None:
        width = np.sqrt(grid.hbar / 2)
    x0 = np.broadcast_to(np.asarray(center_x, dtype=float), (n,))
    p0 = np.broadcast_to(np.asarray(center_p, dtype=float), (n,))
    w = np.broadcast_to(np.asarray(width, dtype=float), (n,))
    if np.any(w <= 0):
        raise ValueError("packet widths must be positive")
    amps = np.ones(grid.position_shape, dtype=complex)
    x = grid.x
    for ax in range(n):
        f = np.exp(-((x - x0[ax]) ** 2) / (4 * w[ax] ** 2) + 1j * p0[ax] * x / grid.hbar)
        shape = [1] * n
        shape[ax] = grid.N
        amps = amps * f.reshape(shape)
    psi = normalize(WaveFunction(grid, amps))
    leak = psi.boundary_max()
    if leak > leak_tol:
        raise ValueError(f"packet leaks past the grid boundary (|psi| = {leak:.3g} at the edge)")
    return psi


def projector(psi: WaveFunction) -> DensityMatrix:
    if psi.grid.dim > MAX_DIM:
        raise ValueError(f"dense density matrices are capped at {MAX_DIM} rows, got {psi.grid.dim}")
    v = psi.vector
    return DensityMatrix(psi.grid, np.outer(v, v.conj()))


def _gram_defect(vectors: list[WaveFunction]) -> float:
    if not vectors:
        return 0.0
    grid = vectors[0].grid
    V = np.stack([v.vector for v in vectors], axis=1)
    G = V.conj().T @ V * grid.dx**grid.n
    return float(np.max(np.abs(G - np.eye(len(vectors)))))


def assemble_density(decomp: SpectralDecomposition, partition: Partition | None = None,
                     sum_tol=1e-8, gram_tol=1e-6) -> DensityMatrix:
    """Kernel ``sum_j w_j psi_j psi_j^*`` from weights and orthonormal vectors."""
    w = decomp.weights
    if not decomp.vectors:
        raise ValueError("empty decomposition")
    if abs(w.sum() - 1) > sum_tol:
        raise ValueError(f"weights sum to {w.sum():.12g}, not 1")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    grid = decomp.vectors[0].grid
    for v in decomp.vectors:
        _require_same_grid(grid, v.grid)
    if _gram_defect(decomp.vectors) > gram_tol:
        raise ValueError("vectors are not orthonormal")
    V = np.stack([v.vector for v in decomp.vectors], axis=1)
    K = (V * w) @ V.conj().T
    return DensityMatrix(grid, K, partition)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # argmax returns the lowest index among ties
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def spectral_decompose(rho: DensityMatrix, threshold: float = 1e-12) -> SpectralDecomposition:
    """Eigen-decomposition of a density matrix, largest weight first.

    Eigenpairs with weight ``<= threshold`` are dropped and their total is
    reported as ``dropped_mass``.  Each eigenvector is phase-fixed so its
    largest-magnitude entry is real and positive.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    K = rho.kernel
    scale = np.max(np.abs(K))
    if np.max(np.abs(K - K.conj().T)) > 1e-10 * scale:
        raise ValueError("kernel is not Hermitian")
    A = rho.operator()
    A = 0.5 * (A + A.conj().T)
    evals, evecs = np.linalg.eigh(A)
    evals = evals[::-1]
    evecs = evecs[:, ::-1]
    if evals[-1] < -1e-10 * max(evals[0], 0.0):
        raise ValueError(f"negative eigenvalue {evals[-1]:.3g}")
    keep = evals > threshold
    norm = rho.grid.dx ** (rho.grid.n / 2)
    vectors = [
        WaveFunction(rho.grid, (_fix_phase(evecs[:, j]) / norm).reshape(rho.grid.position_shape))
        for j in np.flatnonzero(keep)
    ]
    dropped = float(np.sum(evals[~keep]))
    return SpectralDecomposition(evals[keep].copy(), vectors, dropped, rho.grid)


def tensor_product(psi_a: WaveFunction, psi_b: WaveFunction) -> WaveFunction:
    """Product state on the joined grid, A axes first."""
    ga, gb = psi_a.grid, psi_b.grid
    if not ga.same_lattice(gb):
        raise ValueError("tensor product needs grids with the same lattice and hbar")
    amps = np.multiply.outer(psi_a.amplitudes, psi_b.amplitudes)
    return WaveFunction(ga.with_dof(ga.n + gb.n), amps)


def partial_trace_operator(rho: DensityMatrix, part: Partition | None = None) -> DensityMatrix:
    """Trace out subsystem B on the lattice.

    Realizes the basis sum over B with the position delta basis scaled by
    ``dx**(-n_b/2)``, which reduces to a diagonal sum over B lattice indices.
    """
    part = part or rho.partition
    if part is None:
        raise ValueError("no partition given")
    part.require_bipartite(rho.grid.n)
    grid = rho.grid
    da, db = grid.N**part.n_a, grid.N**part.n_b
    K = rho.kernel.reshape(da, db, da, db)
    KA = np.einsum("ajbj->ab", K) * grid.dx**part.n_b
    return DensityMatrix(grid.with_dof(part.n_a), KA)


def purity(rho: DensityMatrix) -> float:
    """``Tr(rho^2)`` as ``sum |K_ij|^2 dx^(2n)``."""
    return float(np.sum(np.abs(rho.kernel) ** 2) * rho.measure**2)


def _require_same_grid(a: PhaseSpaceGrid, b: PhaseSpaceGrid) -> None:
    if a != b:
        raise ValueError("states live on different grids")
