"""Position and phase-space lattices.

Every axis shares one ``(N, x_min, x_max)`` triple.  Positions are the
half-open lattice ``x_i = x_min + i*dx`` for ``i = 0..N-1`` and momenta use
the centered FFT lattice ``p_k = (k - N/2) * dp`` with ``dp = 2*pi*hbar/L``,
so that ``dx * dp * N == 2*pi*hbar`` on every axis.

Arrays over phase space are laid out with all position axes first and all
momentum axes after them: ``(x_1, ..., x_n, p_1, ..., p_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["PhaseSpaceGrid", "Partition", "make_grid", "phase_point"]

MIN_POINTS = 8


@dataclass(frozen=True)
class Partition:
    """Split of the degrees of freedom into subsystems A and B.

    The first ``n_a`` axes belong to A, the remaining ``n_b`` to B.  A
    partition with ``n_b == 0`` describes a system that is not split (the
    output of a reduction, for instance).
    """

    n_a: int
    n_b: int

    def __post_init__(self):
        if int(self.n_a) != self.n_a or int(self.n_b) != self.n_b:
            raise ValueError("partition sizes must be integers")
        if self.n_a < 1 or self.n_b < 0:
            raise ValueError(f"invalid partition ({self.n_a}, {self.n_b})")

    @property
    def n(self) -> int:
        return self.n_a + self.n_b

    @property
    def is_bipartite(self) -> bool:
        return self.n_b >= 1

    def require_bipartite(self, n: int | None = None) -> None:
        if not self.is_bipartite:
            raise ValueError("operation needs a bipartite partition (n_b >= 1)")
        if n is not None and self.n != n:
            raise ValueError(
                f"partition ({self.n_a}, {self.n_b}) inconsistent with {n} degrees of freedom"
            )


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform lattice over ``n`` degrees of freedom.

    Use :func:`make_grid` to build one; the constructor validates but does not
    coerce.
    """

    n: int
    N: int
    x_min: float
    x_max: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one degree of freedom")
        if self.N % 2 or self.N < MIN_POINTS:
            raise ValueError(f"points per axis must be even and >= {MIN_POINTS}, got {self.N}")
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValueError("grid bounds must be finite")
        if not self.x_max > self.x_min:
            raise ValueError(f"degenerate bounds [{self.x_min}, {self.x_max}]")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise ValueError(f"hbar must be positive, got {self.hbar}")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.N

    @property
    def dp(self) -> float:
        return 2 * np.pi * self.hbar / self.length

    @property
    def cell(self) -> float:
        """Phase-space area ``dx*dp`` of one lattice cell (per degree of freedom)."""
        return self.dx * self.dp

    @property
    def p_max(self) -> float:
        return 0.5 * self.N * self.dp

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.N)

    @property
    def p(self) -> np.ndarray:
        return self.dp * (np.arange(self.N) - self.N // 2)

    @property
    def dim(self) -> int:
        """Dimension ``N**n`` of the discretized Hilbert space."""
        return self.N**self.n

    @property
    def position_shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def phase_shape(self) -> tuple[int, ...]:
        return (self.N,) * (2 * self.n)

    def with_dof(self, n: int) -> PhaseSpaceGrid:
        """Same lattice triple and hbar, different number of degrees of freedom."""
        return PhaseSpaceGrid(n, self.N, self.x_min, self.x_max, self.hbar)

    def same_lattice(self, other: PhaseSpaceGrid) -> bool:
        return (self.N, self.x_min, self.x_max, self.hbar) == (
            other.N,
            other.x_min,
            other.x_max,
            other.hbar,
        )

    def position_mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*([self.x] * self.n), indexing="ij")

    def phase_mesh(self) -> list[np.ndarray]:
        """Open meshes over the phase-space array layout (x..., p...)."""
        axes = [self.x] * self.n + [self.p] * self.n
        return np.meshgrid(*axes, indexing="ij", sparse=True)

    def header(self, partition: Partition | None = None) -> dict:
        """Grid metadata in the fixed field order used by all file formats."""
        n_a, n_b = (partition.n_a, partition.n_b) if partition else (self.n, 0)
        if n_a + n_b != self.n:
            raise ValueError("partition does not match grid")
        return {
            "version": 1,
            "n": self.n,
            "N": self.N,
            "x_min": float(self.x_min),
            "x_max": float(self.x_max),
            "hbar": float(self.hbar),
            "n_a": n_a,
            "n_b": n_b,
        }

    @classmethod
    def from_header(cls, header: dict) -> tuple[PhaseSpaceGrid, Partition]:
        if header.get("version") != 1:
            raise ValueError(f"unsupported header version {header.get('version')!r}")
        grid = make_grid(header["n"], header["N"], header["x_min"], header["x_max"], header["hbar"])
        part = Partition(header["n_a"], header["n_b"])
        if part.n != grid.n:
            raise ValueError("header partition does not match n")
        return grid, part


def make_grid(n: int, N: int, x_min: float, x_max: float, hbar: float = 1.0) -> PhaseSpaceGrid:
    """Build a validated :class:`PhaseSpaceGrid`.

    >>> g = make_grid(1, 64, -8, 8)
    >>> g.dx, round(g.dp, 4)
    (0.25, 0.3927)
    """
    if int(n) != n or int(N) != N:
        raise ValueError("n and N must be integers")
    return PhaseSpaceGrid(int(n), int(N), float(x_min), float(x_max), float(hbar))


def phase_point(grid: PhaseSpaceGrid, idx, partition: Partition | None = None) -> np.ndarray:
    """Coordinates of a phase-space lattice node.

    ``idx`` indexes the phase-space array, i.e. ``n`` position indices followed
    by ``n`` momentum indices.  Without a partition the result is ordered
    ``(x..., p...)``; with one it is ``(x_A, p_A, x_B, p_B)``.
    """
    idx = tuple(int(i) for i in idx)
    if len(idx) != 2 * grid.n:
        raise ValueError(f"expected {2 * grid.n} indices, got {len(idx)}")
    if any(i < 0 or i >= grid.N for i in idx):
        raise IndexError(f"index {idx} outside lattice of size {grid.N}")
    xs = grid.x_min + grid.dx * np.array(idx[: grid.n], dtype=float)
    ps = grid.dp * (np.array(idx[grid.n :], dtype=float) - grid.N // 2)
    if partition is None:
        return np.concatenate([xs, ps])
    if partition.n != grid.n:
        raise ValueError("partition does not match grid")
    a = partition.n_a
    return np.concatenate([xs[:a], ps[:a], xs[a:], ps[a:]])


def canonical_order(n_a: int, n_b: int) -> np.ndarray:
    """Permutation taking array layout (x_A, x_B, p_A, p_B) to (x_A, p_A, x_B, p_B).

    ``z_canonical = z_layout[canonical_order(n_a, n_b)]``.
    """
    n = n_a + n_b
    xa = list(range(n_a))
    xb = list(range(n_a, n))
    pa = list(range(n, n + n_a))
    pb = list(range(n + n_a, 2 * n))
    return np.array(xa + pa + xb + pb, dtype=int)
