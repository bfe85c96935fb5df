"""``wigmarg`` command-line front end.

Exit codes: 0 success (and, for ``check``, every check passed), 1 a check
failed, 2 bad input (arguments, files, inadmissible states).
"""

from __future__ import annotations

import argparse
import contextlib
import sys

import numpy as np

from . import gaussian as G
from . import hilbert as H
from . import io
from . import purify as P
from . import states as S
from . import wigner as Wm
from .checks import random_covariance, run_suite
from .grid import Partition, make_grid

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _grid_args(p: argparse.ArgumentParser, N_default=32) -> None:
    p.add_argument("--n", type=int, default=None, help="degrees of freedom (default: na + nb, or 1)")
    p.add_argument("--N", type=int, default=N_default, help="points per axis (even, >= 8)")
    p.add_argument("--xmin", type=float, default=None, help="lower bound (default -9 sqrt(hbar))")
    p.add_argument("--xmax", type=float, default=None, help="upper bound (default +9 sqrt(hbar))")
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--na", type=int, default=None)
    p.add_argument("--nb", type=int, default=None)


def _make_grid(args, n: int):
    half = 9.0 * np.sqrt(args.hbar) if args.hbar > 0 else 9.0
    lo = -half if args.xmin is None else args.xmin
    hi = half if args.xmax is None else args.xmax
    return make_grid(n, args.N, lo, hi, args.hbar)


def _partition(args, n_default=None) -> Partition | None:
    if args.na is None and args.nb is None:
        return None
    na = args.na if args.na is not None else (n_default or 1)
    nb = args.nb if args.nb is not None else 1
    return Partition(na, nb)


def _emit(doc: dict, report_path=None) -> None:
    text = io.dumps_json(doc)
    if report_path:
        with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)


# -- gen -------------------------------------------------------------------

def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    kind = args.kind
    if kind in ("gaussian", "two-mode-squeezed"):
        if kind == "two-mode-squeezed":
            cov = G.two_mode_squeezed(args.r, args.hbar)
        else:
            part = _partition(args) or Partition(1, 1)
            cov = random_covariance(rng, part, args.hbar, thermal=True)
        rep = G.validate_covariance(cov)
        if not rep.admissible:
            raise InputError("generated covariance is not admissible")
        io.write_covariance(args.out, cov)
        return EXIT_OK

    part = _partition(args)
    if kind == "schmidt":
        part = part or Partition(1, 1)
        ga = _make_grid(args, part.n_a)
        gb = ga.with_dof(part.n_b)
        rank = args.rank or 2
        weights = rng.dirichlet(np.ones(rank))
        psi = S.schmidt_state(ga, gb, weights)
        rho = H.DensityMatrix(psi.grid, H.projector(psi).kernel, part)
    else:
        n = args.n or (part.n if part else 1)
        if part is not None and part.n != n:
            raise InputError(f"--na/--nb ({part.n_a}+{part.n_b}) disagree with --n {n}")
        grid = _make_grid(args, n)
        if kind == "packet":
            psi = H.gaussian_wavepacket(grid, args.x0, args.p0)
            rho = H.DensityMatrix(grid, H.projector(psi).kernel, part)
        elif kind == "mixed":
            rho = S.random_mixed(grid, args.rank or 3, rng, part)
        else:
            raise InputError(f"unknown kind {kind!r}")
    io.write_density(args.out, rho)
    return EXIT_OK


# -- check -----------------------------------------------------------------

def cmd_check(args) -> int:
    ctx = Wm.sabotaged() if args.sabotage else contextlib.nullcontext()
    with ctx:
        report = run_suite(args.seed, args.hbar, args.tol)
    _emit(report, args.report)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# -- reduce / wigner / purity ----------------------------------------------

def _load_density(path, args) -> H.DensityMatrix:
    obj = io.read_any(path)
    if isinstance(obj, H.WaveFunction):
        part = _partition(args)
        return H.DensityMatrix(obj.grid, H.projector(obj).kernel, part)
    if not isinstance(obj, H.DensityMatrix):
        raise InputError(f"{path}: expected a state file")
    return obj


def cmd_reduce(args) -> int:
    obj = io.read_any(args.input)
    if isinstance(obj, G.CovarianceMatrix):
        red = G.reduce_gaussian(obj)
        io.write_covariance(args.out, red)
        _emit({
            "kind": "covariance",
            "n_a": red.partition.n_a,
            "sigma_aa": red.sigma.tolist(),
            "reduced_purity": G.gaussian_purity(red),
        }, args.report)
        return EXIT_OK
    if isinstance(obj, Wm.WignerGrid):
        raise InputError("reduce expects a state or covariance file, not a Wigner grid")
    rho = _load_density(args.input, args)
    part = _partition(args, rho.grid.n) or rho.partition
    if part is None or not part.is_bipartite:
        raise InputError("state has no bipartite partition; pass --na/--nb")
    rho = H.DensityMatrix(rho.grid, rho.kernel, part)
    rho_a = H.partial_trace_operator(rho, part)
    W_full = Wm.wigner_of_density(rho)
    W_marg = Wm.marginalize_b(W_full, part)
    W_op = Wm.wigner_of_density(rho_a)
    residual = float(np.max(np.abs(W_op.values - W_marg.values)))
    scale = float(np.max(np.abs(W_full.values)))
    io.write_density(args.out, rho_a)
    wig_path = io.stem(args.out) + ".wig"
    io.write_wigner(wig_path, W_marg)
    _emit({
        "kind": "density",
        "operator_path": args.out,
        "wigner_path": wig_path,
        "residual": residual,
        "relative_residual": residual / scale,
        "reduced_trace": rho_a.trace().real,
        "reduced_purity": H.purity(rho_a),
    }, args.report)
    return EXIT_OK


def cmd_wigner(args) -> int:
    rho = _load_density(args.input, args)
    W = Wm.wigner_of_density(rho)
    io.write_wigner(args.out, W)
    if args.csv:
        io.write_wigner_csv(args.csv, W)
    return EXIT_OK


def cmd_purity(args) -> int:
    obj = io.read_any(args.input)
    if isinstance(obj, G.CovarianceMatrix):
        grid = _make_grid_for_cov(args, obj)
        W = G.sample_gaussian_wigner(obj, grid)
        doc = {
            "formula": G.gaussian_purity(obj),
            "lattice": H.purity(Wm.density_from_wigner(W)),
        }
    else:
        rho = _load_density(args.input, args)
        doc = {
            "operator": H.purity(rho),
            "wigner": Wm.wigner_purity(Wm.wigner_of_density(rho)),
        }
    _emit(doc, args.report)
    return EXIT_OK


def _make_grid_for_cov(args, cov):
    if cov.n * 2 > 4:
        raise InputError("lattice purity is limited to covariances with at most 2 modes")
    hb = cov.hbar
    half = 10.0 * np.sqrt(hb)
    lo = -half if args.xmin is None else args.xmin
    hi = half if args.xmax is None else args.xmax
    return make_grid(cov.n, args.N, lo, hi, hb)


# -- purify ----------------------------------------------------------------

def cmd_purify(args) -> int:
    rho_a = _load_density(args.input, args)
    ga = rho_a.grid
    if args.N != ga.N:
        raise InputError(f"--N {args.N} differs from the A grid ({ga.N}); grids must match")
    nb = args.nb or 1
    gb = ga.with_dof(nb)
    pur = P.purify(rho_a, gb)
    rep = P.verify_wigsum(pur, args.tol)
    io.write_wavefunction(args.out, pur.psi, pur.partition)
    _emit({
        "rank": pur.rank,
        "schmidt_weights": [float(w) for w in pur.weights],
        "dropped_mass": pur.dropped_mass,
        "wigsum": rep.as_dict(),
    }, args.report)
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wigmarg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a test state")
    p.add_argument("kind", choices=["packet", "mixed", "schmidt", "gaussian", "two-mode-squeezed"])
    _grid_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--r", type=float, default=0.5, help="two-mode squeezing parameter")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--p0", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1.0, help="multiplier on every check tolerance")
    p.add_argument("--report", default=None)
    p.add_argument("--sabotage", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="partial trace by both routes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--na", type=int, default=None)
    p.add_argument("--nb", type=int, default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("wigner", help="Wigner distribution of a state")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("--na", type=int, default=None)
    p.add_argument("--nb", type=int, default=None)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("purity", help="purity by two independent routes")
    p.add_argument("--in", dest="input", required=True)
    _grid_args(p, N_default=64)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_purity)

    p = sub.add_parser("purify", help="purify a reduced state and verify the Wigner sum")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--nb", type=int, default=1)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--na", type=int, default=None)
    p.set_defaults(func=cmd_purify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"wigmarg {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
