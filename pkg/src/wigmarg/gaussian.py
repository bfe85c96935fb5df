"""Centered Gaussian states in covariance form.

Everything here is exact (no lattice), except :func:`sample_gaussian_wigner`
which evaluates the closed form on a grid.

Ordering of the covariance matrix is normative: ``(x_A, p_A, x_B, p_B)``,
each block listing all positions of the subsystem before its momenta.  The
symplectic form is block-diagonal, ``J = J_A (+) J_B`` with standard blocks
``[[0, I], [-I, 0]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .grid import Partition, PhaseSpaceGrid, canonical_order
from .wigner import WignerGrid

__all__ = [
    "CovarianceMatrix",
    "ValidityReport",
    "PurityDiagnosis",
    "symplectic_form",
    "validate_covariance",
    "gaussian_wigner_value",
    "sample_gaussian_wigner",
    "gaussian_purity",
    "reduce_gaussian",
    "is_pure",
    "symplectic_eigenvalues",
    "two_mode_squeezed",
    "random_symplectic",
]

MAX_CONDITION = 1e12
ADMISSIBILITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    sigma: np.ndarray
    partition: Partition
    hbar: float = 1.0

    def __post_init__(self):
        s = np.array(self.sigma, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise ValueError(f"covariance must be square and even-dimensional, got {s.shape}")
        if s.shape[0] != 2 * self.partition.n:
            raise ValueError(
                f"{s.shape[0]}x{s.shape[0]} covariance does not match partition "
                f"({self.partition.n_a}, {self.partition.n_b})"
            )
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "sigma", s)

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def block_aa(self) -> np.ndarray:
        k = 2 * self.partition.n_a
        return self.sigma[:k, :k]


@dataclass(frozen=True)
class ValidityReport:
    symmetric: bool
    positive_definite: bool
    min_eigenvalue: float
    uncertainty_min_eigenvalue: float
    admissible: bool


@dataclass(frozen=True)
class PurityDiagnosis:
    pure: bool
    symplectic_eigenvalues: np.ndarray = field(repr=True)
    purity: float = 1.0

    def __bool__(self):
        return self.pure


def _standard_block(k: int) -> np.ndarray:
    # [[0, I], [-I, 0]]: the lower-right block must be zero for J to be
    # antisymmetric with J^2 = -I.
    eye = np.eye(k)
    zero = np.zeros((k, k))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_form(part: Partition) -> np.ndarray:
    """``J_A (+) J_B`` in the ``(x_A, p_A, x_B, p_B)`` ordering."""
    blocks = [_standard_block(part.n_a)]
    if part.n_b:
        blocks.append(_standard_block(part.n_b))
    return scipy.linalg.block_diag(*blocks)


def validate_covariance(cov: CovarianceMatrix) -> ValidityReport:
    """Check symmetry, positivity and the uncertainty condition ``Sigma + i hbar/2 J >= 0``."""
    s = cov.sigma
    scale = np.max(np.abs(s))
    symmetric = bool(np.max(np.abs(s - s.T)) <= 1e-12 * scale)
    sym = 0.5 * (s + s.T)
    evals = np.linalg.eigvalsh(sym)
    J = symplectic_form(cov.partition)
    unc = np.linalg.eigvalsh(sym + 0.5j * cov.hbar * J)
    norm = float(np.max(np.abs(evals)))
    admissible = symmetric and evals[0] > 0 and unc[0] >= -ADMISSIBILITY_TOL * norm
    return ValidityReport(symmetric, bool(evals[0] > 0), float(evals[0]), float(unc[0]),
                          bool(admissible))


def _require_admissible(cov: CovarianceMatrix) -> None:
    rep = validate_covariance(cov)
    if not rep.admissible:
        raise ValueError(
            "covariance is not an admissible quantum state "
            f"(symmetric={rep.symmetric}, min eigenvalue={rep.min_eigenvalue:.3g}, "
            f"min eigenvalue of Sigma + i hbar/2 J={rep.uncertainty_min_eigenvalue:.3g})"
        )


def _factor(cov: CovarianceMatrix):
    s = cov.sigma
    cond = np.linalg.cond(s)
    if not cond <= MAX_CONDITION:
        raise ValueError(f"covariance is ill-conditioned (condition number {cond:.3g})")
    return scipy.linalg.cho_factor(s, lower=True)


def _log_density_terms(cov: CovarianceMatrix, z: np.ndarray) -> np.ndarray:
    """``-z^T Sigma^-1 z / 2 - log((2 pi)^n sqrt(det Sigma))`` for the last axis of z."""
    c, low = _factor(cov)
    z = np.asarray(z, dtype=float)
    dim = cov.sigma.shape[0]
    if z.shape[-1] != dim:
        raise ValueError(f"expected phase-space points of length {dim}")
    flat = z.reshape(-1, dim)
    y = scipy.linalg.solve_triangular(c, flat.T, lower=low)
    quad = np.sum(y * y, axis=0)
    logdet = 2 * np.sum(np.log(np.diag(c)))
    out = -0.5 * quad - 0.5 * logdet - cov.n * np.log(2 * np.pi)
    return out.reshape(z.shape[:-1])


def gaussian_wigner_value(cov: CovarianceMatrix, z) -> float | np.ndarray:
    """``(2 pi)^-n (det Sigma)^-1/2 exp(-z^T Sigma^-1 z / 2)``.

    ``z`` is ordered like the covariance; a trailing axis of length ``2n``
    evaluates a batch.
    """
    _require_admissible(cov)
    vals = np.exp(_log_density_terms(cov, z))
    return float(vals) if np.ndim(vals) == 0 else vals


def sample_gaussian_wigner(cov: CovarianceMatrix, grid: PhaseSpaceGrid,
                           norm_tol: float = 1e-8) -> WignerGrid:
    """The closed-form Wigner distribution on the lattice of ``grid``.

    The grid must reach ``8 sqrt(max diag Sigma)`` from the origin in x and p,
    and be fine enough that the lattice integral is one within ``norm_tol``.
    """
    _require_admissible(cov)
    if grid.n != cov.n:
        raise ValueError(f"grid has {grid.n} degrees of freedom, covariance {cov.n}")
    if grid.hbar != cov.hbar:
        raise ValueError("grid and covariance use different hbar")
    reach = 8 * np.sqrt(np.max(np.diag(cov.sigma)))
    x_reach = min(-grid.x_min, grid.x_max - grid.dx)
    p_reach = grid.p_max - grid.dp
    if x_reach < reach or p_reach < reach:
        raise ValueError(
            f"grid extent (x: {x_reach:.3g}, p: {p_reach:.3g}) is below 8 standard deviations ({reach:.3g})"
        )
    part = cov.partition
    mesh = np.meshgrid(*([grid.x] * grid.n + [grid.p] * grid.n), indexing="ij")
    layout = np.stack(mesh, axis=-1)
    z = layout[..., canonical_order(part.n_a, part.n_b)]
    values = np.exp(_log_density_terms(cov, z))
    W = WignerGrid(grid, values, part if part.is_bipartite else None)
    total = W.integral()
    if abs(total - 1) > norm_tol:
        raise ValueError(f"lattice too coarse: sampled Gaussian integrates to {total:.10g}")
    return W


def gaussian_purity(cov: CovarianceMatrix) -> float:
    """``(hbar/2)^n (det Sigma)^-1/2``."""
    _require_admissible(cov)
    # n counts the modes of this covariance, so a reduced Sigma_AA gets
    # (hbar/2)^{n_A} and a pure reduced state means det Sigma_AA = (hbar/2)^{2 n_A}.
    sign, logdet = np.linalg.slogdet(cov.sigma)
    return float(np.exp(cov.n * np.log(cov.hbar / 2) - 0.5 * logdet))


def reduce_gaussian(cov: CovarianceMatrix) -> CovarianceMatrix:
    """Covariance of the reduced state on A: the ``Sigma_AA`` block, copied unchanged.

    The reduced Wigner distribution is the Gaussian with this covariance and
    the usual ``-z_A^T Sigma_AA^-1 z_A / 2`` exponent (no extra ``1/hbar``).
    """
    _require_admissible(cov)
    part = cov.partition
    part.require_bipartite()
    reduced = CovarianceMatrix(cov.block_aa.copy(), Partition(part.n_a, 0), cov.hbar)
    # the block of an admissible matrix is always admissible; check anyway
    _require_admissible(reduced)
    return reduced


def symplectic_eigenvalues(cov: CovarianceMatrix) -> np.ndarray:
    """Moduli of the eigenvalues of ``i J Sigma``, one per mode, ascending.

    Computed from the Hermitian matrix ``L^T (i J) L`` with ``Sigma = L L^T``,
    which is similar to ``i J Sigma``.
    """
    c, _ = _factor(cov)
    L = np.tril(c)
    J = symplectic_form(cov.partition)
    M = L.T @ (1j * J) @ L
    ev = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    # spectrum is +/- nu_j; the upper half holds the nu_j
    return ev[cov.n :]


def is_pure(cov: CovarianceMatrix, tol: float = 1e-8) -> PurityDiagnosis:
    """Pure iff every symplectic eigenvalue equals ``hbar/2`` (relative ``tol``)."""
    _require_admissible(cov)
    nu = symplectic_eigenvalues(cov)
    half = cov.hbar / 2
    pure = bool(np.all(np.abs(nu - half) <= tol * half))
    return PurityDiagnosis(pure, nu, gaussian_purity(cov))


def two_mode_squeezed(r: float, hbar: float = 1.0) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with squeezing ``r``, one mode in A and one in B."""
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    Z = np.diag([1.0, -1.0])
    I2 = np.eye(2)
    sigma = 0.5 * hbar * np.block([[c * I2, s * Z], [s * Z, c * I2]])
    return CovarianceMatrix(sigma, Partition(1, 1), hbar)


def random_symplectic(n: int, rng: np.random.Generator, max_squeeze: float = 0.5) -> np.ndarray:
    """Product of shear, local squeezing and orthogonal-symplectic factors.

    Ordering is ``(x_1..x_n, p_1..p_n)``; reorder before use with a
    partition of more than one subsystem.
    """
    A = rng.normal(size=(n, n))
    shear_sym = 0.3 * (A + A.T)
    shear = np.block([[np.eye(n), np.zeros((n, n))], [shear_sym, np.eye(n)]])
    r = rng.uniform(-max_squeeze, max_squeeze, size=n)
    squeeze = np.diag(np.concatenate([np.exp(-r), np.exp(r)]))
    H = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    U = scipy.linalg.expm(0.5j * (H + H.conj().T) * 0.3)
    rot = np.block([[U.real, -U.imag], [U.imag, U.real]])
    return rot @ squeeze @ shear


def partition_permutation(part: Partition) -> np.ndarray:
    """Indices taking ``(x_1..x_n, p_1..p_n)`` ordering to ``(x_A, p_A, x_B, p_B)``."""
    return canonical_order(part.n_a, part.n_b)
