"""File formats.

Binary state files (``.wqs``) and Wigner files (``.wig``) are a single line
of UTF-8 JSON header terminated by ``\\n``, followed by a raw little-endian
float64 block in row-major order.  Complex data is interleaved ``(re, im)``.

The header starts with the grid fields in fixed order
(``version, n, N, x_min, x_max, hbar, n_a, n_b``) followed by ``kind`` and,
for Wigner files, ``axes``.  NaN and infinities are rejected on write and
read.

Covariance matrices are plain JSON::

    {"version": 1, "hbar": ..., "n_a": ..., "n_b": ..., "sigma": [[...], ...]}

with ``sigma`` ordered ``(x_A, p_A, x_B, p_B)``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .gaussian import CovarianceMatrix
from .grid import Partition, PhaseSpaceGrid
from .hilbert import DensityMatrix, WaveFunction
from .wigner import WignerGrid

__all__ = [
    "FormatError",
    "write_density",
    "write_wavefunction",
    "read_state",
    "write_wigner",
    "read_wigner",
    "write_wigner_csv",
    "write_covariance",
    "read_covariance",
    "read_any",
    "dumps_json",
]

_COMPLEX = np.dtype("<c16")
_REAL = np.dtype("<f8")


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


def dumps_json(obj) -> str:
    """Deterministic JSON: insertion order kept, full float precision, no NaN."""
    return json.dumps(obj, allow_nan=False, indent=2) + "\n"


def _header_line(header: dict) -> bytes:
    try:
        return (json.dumps(header, allow_nan=False, separators=(", ", ": ")) + "\n").encode()
    except ValueError as exc:
        raise FormatError(f"header contains non-finite values: {exc}") from None


def _write(path, header: dict, block: np.ndarray, dtype) -> None:
    data = np.ascontiguousarray(block, dtype=dtype)
    if not np.all(np.isfinite(data)):
        raise FormatError("refusing to write non-finite values")
    with open(path, "wb") as fh:
        fh.write(_header_line(header))
        fh.write(data.tobytes(order="C"))


def _read(path) -> tuple[dict, bytes]:
    raw = Path(path).read_bytes()
    end = raw.find(b"\n")
    if end < 0:
        raise FormatError(f"{path}: missing header line")
    try:
        header = json.loads(raw[:end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: unreadable header ({exc})") from None
    if not isinstance(header, dict):
        raise FormatError(f"{path}: header is not a JSON object")
    return header, raw[end + 1 :]


def _grid_from(header: dict, path) -> tuple[PhaseSpaceGrid, Partition]:
    try:
        return PhaseSpaceGrid.from_header(header)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: bad grid header ({exc})") from None


def _decode(block: bytes, dtype, count: int, path) -> np.ndarray:
    expected = count * dtype.itemsize
    if len(block) != expected:
        raise FormatError(f"{path}: expected {expected} data bytes, found {len(block)}")
    arr = np.frombuffer(block, dtype=dtype).astype(dtype.newbyteorder("="))
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{path}: non-finite values in data block")
    return arr


def _part_or_none(part: Partition | None) -> Partition | None:
    return part if part is not None and part.is_bipartite else None


def write_density(path, rho: DensityMatrix) -> None:
    header = rho.grid.header(rho.partition) | {"kind": "density"}
    _write(path, header, rho.kernel, _COMPLEX)


def write_wavefunction(path, psi: WaveFunction, partition: Partition | None = None) -> None:
    header = psi.grid.header(partition) | {"kind": "wavefunction"}
    _write(path, header, psi.amplitudes, _COMPLEX)


def read_state(path) -> tuple[DensityMatrix | WaveFunction, Partition]:
    """Read a ``.wqs`` file; returns the state and the partition from its header."""
    header, block = _read(path)
    grid, part = _grid_from(header, path)
    kind = header.get("kind")
    if kind == "density":
        arr = _decode(block, _COMPLEX, grid.dim**2, path)
        return DensityMatrix(grid, arr.reshape(grid.dim, grid.dim), _part_or_none(part)), part
    if kind == "wavefunction":
        arr = _decode(block, _COMPLEX, grid.dim, path)
        return WaveFunction(grid, arr.reshape(grid.position_shape)), part
    raise FormatError(f"{path}: expected a density or wavefunction file, got kind {kind!r}")


def write_wigner(path, W: WignerGrid) -> None:
    header = W.grid.header(W.partition) | {"kind": "wigner", "axes": W.axis_labels()}
    _write(path, header, W.values, _REAL)


def read_wigner(path) -> WignerGrid:
    header, block = _read(path)
    grid, part = _grid_from(header, path)
    if header.get("kind") != "wigner":
        raise FormatError(f"{path}: expected kind 'wigner', got {header.get('kind')!r}")
    arr = _decode(block, _REAL, int(np.prod(grid.phase_shape)), path)
    return WignerGrid(grid, arr.reshape(grid.phase_shape), _part_or_none(part))


def write_wigner_csv(path, W: WignerGrid) -> None:
    """Coordinates and value per node, 17 significant digits.

    One-dof grids get a blank line after each x block so gnuplot's ``splot``
    reads the file as a grid.
    """
    grid = W.grid
    labels = W.axis_labels()
    mesh = np.meshgrid(*([grid.x] * grid.n + [grid.p] * grid.n), indexing="ij")
    cols = [m.reshape(-1) for m in mesh] + [W.values.reshape(-1)]
    table = np.stack(cols, axis=1)
    row_fmt = ",".join(["%.17g"] * table.shape[1])
    block = grid.N if grid.n == 1 else 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# " + ",".join(labels + ["value"]) + "\n")
        for r, row in enumerate(table):
            fh.write(row_fmt % tuple(row) + "\n")
            if block and (r + 1) % block == 0:
                fh.write("\n")


def write_covariance(path, cov: CovarianceMatrix) -> None:
    doc = {
        "version": 1,
        "hbar": float(cov.hbar),
        "n_a": cov.partition.n_a,
        "n_b": cov.partition.n_b,
        "sigma": cov.sigma.tolist(),
    }
    Path(path).write_text(dumps_json(doc), encoding="utf-8")


def read_covariance(path) -> CovarianceMatrix:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from None
    try:
        if doc["version"] != 1:
            raise FormatError(f"{path}: unsupported version {doc['version']!r}")
        sigma = np.array(doc["sigma"], dtype=float)
        if not np.all(np.isfinite(sigma)):
            raise FormatError(f"{path}: non-finite covariance entries")
        return CovarianceMatrix(sigma, Partition(doc["n_a"], doc["n_b"]), float(doc["hbar"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: missing or malformed field ({exc})") from None


def read_any(path):
    """Dispatch on content: covariance JSON, ``.wqs`` state or ``.wig`` grid."""
    with open(path, "rb") as fh:
        head = fh.read(1)
        fh.seek(0)
        first = fh.readline()
    if not head:
        raise FormatError(f"{path}: empty file")
    try:
        header = json.loads(first.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError):
        header = None
    if isinstance(header, dict) and "kind" in header:
        if header["kind"] == "wigner":
            return read_wigner(path)
        return read_state(path)[0]
    return read_covariance(path)


def stem(path) -> str:
    return os.path.splitext(os.fspath(path))[0]
