"""Wigner and cross-Wigner transforms, Weyl symbols, and marginals.

Discretization
--------------
For a lattice point ``x_i`` the shifted arguments ``x_i +/- y/2`` with
``y = m*dx`` land on the half-step lattice ``x_min + s*dx/2``.  States are
carried onto that lattice by band-limited (FFT) interpolation, so the
transform is exact for band-limited states.  The ``y`` sum runs over every
``m`` for which both arguments stay inside the domain (zero-padding outside);
evaluating at the centered momentum lattice folds ``m`` modulo ``N`` without
approximation, after which a length-``N`` FFT finishes the job::

    W(x_i, p_k) = dx/(2 pi hbar) * sum_m exp(-i p_k m dx / hbar)
                  * phi~(2i + m) * conj(psi~(2i - m))

Summing over ``p`` keeps only ``m = 0`` exactly, so the position marginal and
the B-marginal of a bipartite state agree with the lattice partial trace to
rounding error, independent of resolution.

The inverse transform (:func:`density_from_wigner`) is only well defined for
states that are resolved on the lattice: coherence length below ``L/2`` and
momentum content inside half the Nyquist band.  It is exact for such states.
"""

from __future__ import annotations

import contextlib
import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _fft
from .grid import Partition, PhaseSpaceGrid
from .hilbert import DensityMatrix, WaveFunction

__all__ = [
    "WignerGrid",
    "CrossWignerGrid",
    "Symbol",
    "BoundaryDecayWarning",
    "cross_wigner",
    "wigner_transform",
    "wigner_of_density",
    "density_from_wigner",
    "weyl_symbol",
    "pairing_via_symbol",
    "trace_via_integral",
    "marginalize_b",
    "marginal_position",
    "wigner_purity",
]

BOUNDARY_TOL = 1e-10
_CHUNK_ELEMENTS = 1 << 22

# -1 is the physical convention; +1 only under ``sabotaged()`` (negative control)
_FFT_SIGN = -1


class BoundaryDecayWarning(UserWarning):
    """A sampled symbol does not decay at the edge of the phase-space grid."""


@dataclass(frozen=True, eq=False)
class _PhaseArray:
    grid: PhaseSpaceGrid
    values: np.ndarray
    partition: Partition | None = None

    _dtype = complex

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=self._dtype)
        if vals.shape != self.grid.phase_shape:
            raise ValueError(f"values shape {vals.shape} does not match {self.grid.phase_shape}")
        if self.partition is not None and self.partition.n != self.grid.n:
            raise ValueError("partition does not match grid")
        object.__setattr__(self, "values", vals)

    def integral(self):
        return np.sum(self.values) * self.grid.cell**self.grid.n

    def axis_labels(self) -> list[str]:
        n = self.grid.n
        if n == 1:
            return ["x", "p"]
        return [f"x{j + 1}" for j in range(n)] + [f"p{j + 1}" for j in range(n)]


class WignerGrid(_PhaseArray):
    """Real Wigner distribution sampled on the phase-space lattice."""

    _dtype = float


class CrossWignerGrid(_PhaseArray):
    """Complex cross-Wigner transform ``W(phi, psi)``."""


class Symbol(_PhaseArray):
    """Weyl symbol of an operator, sampled on the phase-space lattice."""


@contextlib.contextmanager
def sabotaged():
    """Flip the sign of the Fourier kernel.  Negative-control use only."""
    global _FFT_SIGN
    old = _FFT_SIGN
    _FFT_SIGN = +1
    try:
        yield
    finally:
        _FFT_SIGN = old


def _forward_fft(a, axis):
    if _FFT_SIGN < 0:
        return _fft.fft(a, axis=axis)
    return _fft.ifft(a, axis=axis) * a.shape[axis]


def _inverse_fft(a, axis):
    if _FFT_SIGN < 0:
        return _fft.ifft(a, axis=axis)
    return _fft.fft(a, axis=axis) / a.shape[axis]


@lru_cache(maxsize=16)
def _fold_tables(N: int):
    """Half-step index pairs feeding each folded ``(i, m')`` slot.

    Returns two ``(a, b, mask)`` triples, for ``m = m'`` and ``m = m' - N``.
    """
    i = np.arange(N)[:, None]
    mp = np.arange(N)[None, :]
    out = []
    for m in (mp, mp - N):
        a = 2 * i + m
        b = 2 * i - m
        mask = (a >= 0) & (a < 2 * N) & (b >= 0) & (b < 2 * N)
        out.append((np.where(mask, a, 0), np.where(mask, b, 0), mask))
    for arr in out:
        for t in arr:
            t.setflags(write=False)
    return tuple(out)


@lru_cache(maxsize=16)
def _alternating(N: int) -> np.ndarray:
    sign = (-1.0) ** np.arange(N)
    sign.setflags(write=False)
    return sign


@lru_cache(maxsize=16)
def _unfold_weights(N: int) -> np.ndarray:
    """Weight of offset ``m = a - b`` when unfolding ``m mod N``."""
    m = np.arange(N)[:, None] - np.arange(N)[None, :]
    w = np.where(np.abs(m) < N // 2, 1.0, 0.0)
    w[np.abs(m) == N // 2] = 0.5
    w.setflags(write=False)
    return w


def _check_boundary(arr: np.ndarray, what: str) -> None:
    scale = float(np.max(np.abs(arr)))
    if scale == 0:
        raise ValueError(f"{what} is identically zero")
    edge = 0.0
    for ax in range(arr.ndim):
        edge = max(edge, float(np.max(np.abs(np.take(arr, 0, axis=ax)))),
                   float(np.max(np.abs(np.take(arr, -1, axis=ax)))))
    if edge > BOUNDARY_TOL * scale:
        raise ValueError(
            f"{what} is not negligible at the grid boundary "
            f"(relative edge amplitude {edge / scale:.3g} > {BOUNDARY_TOL:g})"
        )


def _finish(g: np.ndarray, grid: PhaseSpaceGrid, m_axes) -> np.ndarray:
    """Apply the alternating sign and FFT over the folded-offset axes."""
    N = grid.N
    sign = _alternating(N)
    for ax in m_axes:
        shape = [1] * g.ndim
        shape[ax] = N
        g = _forward_fft(g * sign.reshape(shape), axis=ax)
    return g * (grid.dx / (2 * np.pi * grid.hbar)) ** grid.n


def cross_wigner(phi: WaveFunction, psi: WaveFunction) -> CrossWignerGrid:
    """Cross-Wigner transform ``W(phi, psi)``.

    Integrates to ``<psi|phi>`` and satisfies ``W(psi, phi) = conj(W(phi, psi))``.
    Both states must be negligible (relative ``1e-10``) at the boundary.
    """
    if phi.grid != psi.grid:
        raise ValueError("states live on different grids")
    grid = phi.grid
    _check_boundary(phi.amplitudes, "phi")
    _check_boundary(psi.amplitudes, "psi")
    n, N = grid.n, grid.N
    up_phi, up_psi = phi.amplitudes, psi.amplitudes
    for ax in range(n):
        up_phi = _fft.upsample(up_phi, ax)
        up_psi = _fft.upsample(up_psi, ax)
    up_psi = up_psi.conj()

    tables = _fold_tables(N)
    g = np.zeros(grid.phase_shape, dtype=complex)
    for choice in itertools.product((0, 1), repeat=n):
        a_idx, b_idx, mask = [], [], None
        for d, c in enumerate(choice):
            a, b, msk = tables[c]
            shape = [1] * (2 * n)
            shape[d] = N
            shape[n + d] = N
            a_idx.append(a.reshape(shape))
            b_idx.append(b.reshape(shape))
            msk = msk.reshape(shape)
            mask = msk if mask is None else mask & msk
        g += np.where(mask, up_phi[tuple(a_idx)] * up_psi[tuple(b_idx)], 0)
    values = _finish(g, grid, range(n, 2 * n))
    return CrossWignerGrid(grid, values)


def _realify(values: np.ndarray, what: str) -> np.ndarray:
    scale = np.max(np.abs(values))
    residue = np.max(np.abs(values.imag))
    if residue > 1e-10 * max(scale, np.finfo(float).tiny):
        raise ValueError(f"{what} has imaginary residue {residue:.3g}")
    return values.real.copy()


def wigner_transform(psi: WaveFunction) -> WignerGrid:
    """Wigner distribution of a pure state."""
    w = cross_wigner(psi, psi)
    return WignerGrid(psi.grid, _realify(w.values, "Wigner transform"))


def _pair_axis_forward(T: np.ndarray, grid: PhaseSpaceGrid, d: int) -> np.ndarray:
    """Map kernel axes (a_d, b_d) to phase-space axes (i_d, k_d) in place of them."""
    n, N = grid.n, grid.N
    T = np.moveaxis(T, (d, n + d), (-2, -1))
    outer = T.shape[:-2]
    flat = T.reshape(-1, N, N)
    out = np.empty_like(flat, dtype=complex)
    (a0, b0, m0), (a1, b1, m1) = _fold_tables(N)
    step = max(1, _CHUNK_ELEMENTS // (4 * N * N))
    for s in range(0, flat.shape[0], step):
        up = _fft.upsample(_fft.upsample(flat[s : s + step], 1), 2)
        g = np.where(m0, up[:, a0, b0], 0) + np.where(m1, up[:, a1, b1], 0)
        g = g * _alternating(N)
        out[s : s + step] = _forward_fft(g, axis=-1)
    out = out.reshape(outer + (N, N)) * (grid.dx / (2 * np.pi * grid.hbar))
    return np.moveaxis(out, (-2, -1), (d, n + d))


def _pair_axis_inverse(T: np.ndarray, grid: PhaseSpaceGrid, d: int) -> np.ndarray:
    n, N = grid.n, grid.N
    T = np.moveaxis(T, (d, n + d), (-2, -1))
    outer = T.shape[:-2]
    flat = T.reshape(-1, N, N)
    out = np.empty_like(flat, dtype=complex)
    a = np.arange(N)[:, None]
    b = np.arange(N)[None, :]
    s_idx = a + b
    m_idx = (a - b) % N
    weight = _unfold_weights(N)
    step = max(1, _CHUNK_ELEMENTS // (4 * N * N))
    for s in range(0, flat.shape[0], step):
        g = _inverse_fft(flat[s : s + step], axis=-1) * _alternating(N)
        up = _fft.upsample(g, 1)
        out[s : s + step] = up[:, s_idx, m_idx] * weight
    out = out.reshape(outer + (N, N)) * (2 * np.pi * grid.hbar / grid.dx)
    return np.moveaxis(out, (-2, -1), (d, n + d))


def _kernel_to_phase(kernel: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    T = kernel.reshape(grid.position_shape * 2)
    for d in range(grid.n):
        T = _pair_axis_forward(T, grid, d)
    return T


def _phase_to_kernel(values: np.ndarray, grid: PhaseSpaceGrid) -> np.ndarray:
    T = np.asarray(values, dtype=complex)
    for d in range(grid.n):
        T = _pair_axis_inverse(T, grid, d)
    return T.reshape(grid.dim, grid.dim)


def wigner_of_density(rho: DensityMatrix) -> WignerGrid:
    """Wigner distribution of a density matrix, one degree of freedom at a time."""
    K = rho.kernel
    if np.max(np.abs(K - K.conj().T)) > 1e-10 * np.max(np.abs(K)):
        raise ValueError("kernel is not Hermitian")
    _check_boundary(K.reshape(rho.grid.position_shape * 2), "density kernel")
    values = _kernel_to_phase(K, rho.grid)
    return WignerGrid(rho.grid, _realify(values, "Wigner distribution"), rho.partition)


def density_from_wigner(W: WignerGrid, norm_tol: float = 1e-4) -> DensityMatrix:
    """Reconstruct the density kernel from a Wigner distribution.

    Exact for lattice-resolved states (see module notes).  Raises if ``W`` does
    not integrate to one within ``norm_tol``.
    """
    total = float(np.real(W.integral()))
    if abs(total - 1) > norm_tol:
        raise ValueError(f"Wigner distribution integrates to {total:.6g}, not 1")
    K = _phase_to_kernel(W.values, W.grid)
    K = 0.5 * (K + K.conj().T)
    return DensityMatrix(W.grid, K, W.partition)


def weyl_symbol(op: DensityMatrix) -> Symbol:
    """Weyl symbol ``q(x, p) = int exp(-i p y/hbar) <x+y/2|Q|x-y/2> dy``.

    Accepts any kernel on the lattice (unit trace is not required), so products
    such as ``rho @ rho`` can be passed as a :class:`DensityMatrix` wrapper.
    For a density matrix, ``q = (2 pi hbar)^n W``.
    """
    _check_boundary(op.kernel.reshape(op.grid.position_shape * 2), "operator kernel")
    values = _kernel_to_phase(op.kernel, op.grid) * (2 * np.pi * op.grid.hbar) ** op.grid.n
    return Symbol(op.grid, values, op.partition)


def _symbol_values(q, grid: PhaseSpaceGrid) -> np.ndarray:
    if isinstance(q, _PhaseArray):
        if q.grid != grid:
            raise ValueError("symbol and states live on different grids")
        return q.values
    vals = np.asarray(q)
    try:
        return np.broadcast_to(vals, grid.phase_shape)
    except ValueError:
        raise ValueError(f"symbol of shape {vals.shape} does not fit {grid.phase_shape}") from None


def pairing_via_symbol(q, phi: WaveFunction, psi: WaveFunction) -> complex:
    """``int q(z) W(phi, psi)(z) dz``.

    In the physics bra-ket convention (antilinear first slot) this equals
    ``<psi|Q phi>`` for ``Q = Op_W(q)``; for ``phi = psi`` it is the
    expectation value of ``Q``.  ``q`` may be a :class:`Symbol` or any array
    broadcastable to the phase-space shape, e.g. built from
    ``grid.phase_mesh()``.
    """
    if phi.grid != psi.grid:
        raise ValueError("states live on different grids")
    grid = phi.grid
    qv = _symbol_values(q, grid)
    W = cross_wigner(phi, psi).values
    return complex(np.sum(qv * W) * grid.cell**grid.n)


def trace_via_integral(q: Symbol, decay_tol: float = BOUNDARY_TOL) -> complex:
    """``(2 pi hbar)^-n int q(z) dz``.

    Emits :class:`BoundaryDecayWarning` when ``q`` is not negligible at the
    grid edge, the lattice stand-in for a trace-class symbol estimate.
    """
    grid = q.grid
    vals = q.values
    scale = float(np.max(np.abs(vals)))
    if scale > 0:
        edge = max(
            max(float(np.max(np.abs(np.take(vals, 0, axis=ax)))),
                float(np.max(np.abs(np.take(vals, -1, axis=ax)))))
            for ax in range(vals.ndim)
        )
        if edge > decay_tol * scale:
            warnings.warn(
                f"symbol does not decay at the grid boundary (relative {edge / scale:.3g})",
                BoundaryDecayWarning,
                stacklevel=2,
            )
    total = np.sum(vals) * grid.cell**grid.n
    return complex(total / (2 * np.pi * grid.hbar) ** grid.n)


def marginalize_b(W: WignerGrid, part: Partition | None = None) -> WignerGrid:
    """Integrate a bipartite Wigner distribution over the B phase space.

    Plain Riemann sum with the uniform cell measure ``(dx*dp)^n_b``.
    """
    part = part or W.partition
    if part is None:
        raise ValueError("no partition given")
    part.require_bipartite(W.grid.n)
    grid = W.grid
    n, na = grid.n, part.n_a
    axes = tuple(range(na, n)) + tuple(range(n + na, 2 * n))
    values = np.sum(W.values, axis=axes) * grid.cell**part.n_b
    return WignerGrid(grid.with_dof(na), values)


def marginal_position(W: WignerGrid) -> np.ndarray:
    """Position density ``int W dp`` on the position lattice."""
    grid = W.grid
    return np.sum(W.values, axis=tuple(range(grid.n, 2 * grid.n))) * grid.dp**grid.n


def wigner_purity(W: WignerGrid) -> float:
    """``Tr(rho^2) = (2 pi hbar)^n int W^2 dz``."""
    grid = W.grid
    return float(np.sum(W.values**2) * grid.cell**grid.n * (2 * np.pi * grid.hbar) ** grid.n)
