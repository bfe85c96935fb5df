"""Seeded invariant suite run by ``wigmarg check``.

Each check produces one record ``{name, residual, tolerance, passed}``.  The
report contains no timings or paths, so a fixed seed gives byte-identical
output.
"""

from __future__ import annotations

import numpy as np

from . import gaussian as G
from . import hilbert as H
from . import purify as P
from . import states as S
from . import wigner as Wm
from .grid import Partition

KINDS = ("pure", "product", "schmidt", "mixed")


class _Recorder:
    def __init__(self, tol_scale: float):
        self.tol_scale = tol_scale
        self.records: list[dict] = []

    def add(self, name: str, residual: float, tolerance: float) -> None:
        tol = tolerance * self.tol_scale
        residual = float(residual)
        self.records.append({
            "name": name,
            "residual": residual,
            "tolerance": tol,
            "passed": bool(np.isfinite(residual) and residual <= tol),
        })


def _rel(a, b) -> float:
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def _grid_checks(rec, hbar):
    g = S.natural_grid(1, 64, hbar)
    rec.add("grid.fft_duality", abs(g.dx * g.dp * g.N - 2 * np.pi * hbar) / (2 * np.pi * hbar), 1e-14)
    rec.add("grid.position_measure", abs(g.N * g.dx - g.length) / g.length, 1e-12)


def _hilbert_checks(rec, rng, hbar):
    g1 = S.natural_grid(1, 64, hbar)
    rho = S.random_mixed(g1, 3, rng)
    d = H.spectral_decompose(rho)
    orig = np.sort(np.linalg.eigvalsh(rho.operator()))[::-1][:3]
    rec.add("hilbert.spectral_round_trip", np.max(np.abs(d.weights - orig)), 1e-8)
    rec.add("hilbert.purity_sum_squares", abs(H.purity(rho) - np.sum(d.weights**2)), 1e-8)

    ga = S.natural_grid(1, 32, hbar)
    prod, rho_a, _ = S.product_state(ga, ga, rng)
    rec.add("hilbert.partial_trace_product",
            _rel(H.partial_trace_operator(prod).kernel, rho_a.kernel), 1e-10)

    r1 = S.state_family("mixed", ga, ga, rng)
    r2 = S.state_family("pure", ga, ga, rng)
    alpha = 0.3
    mix = H.DensityMatrix(r1.grid, alpha * r1.kernel + (1 - alpha) * r2.kernel, r1.partition)
    lhs = H.partial_trace_operator(mix).kernel
    rhs = alpha * H.partial_trace_operator(r1).kernel + (1 - alpha) * H.partial_trace_operator(r2).kernel
    rec.add("hilbert.partial_trace_linearity", _rel(lhs, rhs), 1e-10)
    rec.add("hilbert.partial_trace_preserves_trace",
            abs(H.partial_trace_operator(r1).trace() - r1.trace()), 1e-8)

    # any complete orthonormal B basis gives the same partial trace
    basis = np.linalg.qr(rng.normal(size=(ga.N, ga.N)) + 1j * rng.normal(size=(ga.N, ga.N)))[0]
    K = r1.kernel.reshape(ga.N, ga.N, ga.N, ga.N)
    via_basis = np.einsum("ajbk,jm,km->ab", K, basis.conj(), basis) * ga.dx
    rec.add("hilbert.basis_independence", _rel(via_basis, H.partial_trace_operator(r1).kernel), 1e-10)


def _wigner_checks(rec, rng, hbar):
    g = S.natural_grid(1, 64, hbar)
    ground = H.gaussian_wavepacket(g)
    W = Wm.wigner_transform(ground)
    X, Pm = g.phase_mesh()
    closed = np.exp(-(X**2 + Pm**2) / hbar) / (np.pi * hbar)
    rec.add("wigner.ground_state_anchor", np.max(np.abs(W.values - closed)), 1e-6)
    rec.add("wigner.normalization", abs(W.integral() - 1), 1e-6)

    psi = S.random_packets(g, 1, rng)[0]
    Wpsi = Wm.wigner_transform(psi)
    rec.add("wigner.position_marginal",
            np.max(np.abs(Wm.marginal_position(Wpsi) - np.abs(psi.amplitudes) ** 2)), 1e-6)

    p0 = 1.25 * np.sqrt(hbar)
    moving = H.gaussian_wavepacket(g, 0.5 * np.sqrt(hbar), p0)
    rec.add("wigner.momentum_expectation", abs(Wm.pairing_via_symbol(Pm, moving, moving) - p0), 1e-6)
    rec.add("wigner.position_expectation",
            abs(Wm.pairing_via_symbol(X, moving, moving) - 0.5 * np.sqrt(hbar)), 1e-6)

    phi, chi = S.random_packets(g, 2, rng)
    rec.add("wigner.cross_conjugate_symmetry",
            np.max(np.abs(Wm.cross_wigner(phi, chi).values - Wm.cross_wigner(chi, phi).values.conj())),
            1e-10)
    rec.add("wigner.pure_density_consistency",
            np.max(np.abs(Wm.wigner_of_density(H.projector(psi)).values - Wpsi.values)), 1e-10)

    ga = S.natural_grid(1, 32, hbar)
    a1, a2 = S.random_packets(ga, 2, rng)
    b1, b2 = S.random_packets(ga, 2, rng)
    joint = Wm.cross_wigner(H.tensor_product(a1, b1), H.tensor_product(a2, b2)).values
    fa = Wm.cross_wigner(a1, a2).values
    fb = Wm.cross_wigner(b1, b2).values
    factored = np.einsum("ik,jl->ijkl", fa, fb)
    rec.add("wigner.tensor_factorization", np.max(np.abs(joint - factored)), 1e-8)

    ga = S.natural_grid(1, 32, hbar)
    worst = 0.0
    for kind in KINDS:
        for _ in range(2):
            rho = S.state_family(kind, ga, ga, rng)
            Wfull = Wm.wigner_of_density(rho)
            lhs = Wm.wigner_of_density(H.partial_trace_operator(rho)).values
            rhs = Wm.marginalize_b(Wfull).values
            worst = max(worst, float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(Wfull.values))))
    rec.add("wigner.reduction_oracle_equivalence", worst, 1e-6)

    r1 = S.random_mixed(g, 2, rng)
    r2 = S.random_mixed(g, 3, rng)
    mix = H.DensityMatrix(g, 0.4 * r1.kernel + 0.6 * r2.kernel)
    rec.add("wigner.convexity",
            np.max(np.abs(Wm.wigner_of_density(mix).values
                          - 0.4 * Wm.wigner_of_density(r1).values
                          - 0.6 * Wm.wigner_of_density(r2).values)),
            1e-10)

    gr = S.natural_grid(1, 96, hbar, half_width=12.0)
    rho = S.random_mixed(gr, 3, rng)
    back = Wm.density_from_wigner(Wm.wigner_of_density(rho))
    rec.add("wigner.density_round_trip", np.max(np.abs(back.kernel - rho.kernel)), 1e-8)

    rec.add("wigner.symbol_trace", abs(Wm.trace_via_integral(Wm.weyl_symbol(rho)) - 1), 1e-6)
    sq = H.DensityMatrix(gr, rho.kernel @ rho.kernel * gr.dx)
    rec.add("wigner.symbol_purity", abs(Wm.trace_via_integral(Wm.weyl_symbol(sq)) - H.purity(rho)), 1e-6)


def _gaussian_checks(rec, rng, hbar):
    thermal = G.CovarianceMatrix(hbar * np.eye(2), Partition(1, 0), hbar)
    g = S.natural_grid(1, 64, hbar, half_width=10.0)
    lattice = H.purity(Wm.density_from_wigner(G.sample_gaussian_wigner(thermal, g)))
    rec.add("gaussian.purity_two_paths", abs(lattice - G.gaussian_purity(thermal)), 1e-4)

    tms = G.two_mode_squeezed(0.5, hbar)
    g2 = S.natural_grid(2, 48, hbar, half_width=9.0)
    full = G.sample_gaussian_wigner(tms, g2)
    reduced = G.sample_gaussian_wigner(G.reduce_gaussian(tms), g2.with_dof(1))
    rec.add("gaussian.reduction_lattice_marginal", np.max(np.abs(Wm.marginalize_b(full).values - reduced.values)), 1e-6)

    worst_tms = 0.0
    for r in (0.25, 0.5, 1.0):
        red = G.reduce_gaussian(G.two_mode_squeezed(r, hbar))
        worst_tms = max(worst_tms, abs(G.gaussian_purity(red) - 1 / np.cosh(2 * r)))
    rec.add("gaussian.two_mode_squeezed_reduced_purity", worst_tms, 1e-6)

    worst_adm = 0.0
    mismatches = 0
    for _ in range(4):
        cov = random_covariance(rng, Partition(1, 1), hbar, thermal=True)
        red = G.reduce_gaussian(cov)
        rep = G.validate_covariance(red)
        worst_adm = max(worst_adm, -rep.uncertainty_min_eigenvalue / np.max(np.abs(red.sigma)))
        for c in (cov, random_covariance(rng, Partition(1, 1), hbar, thermal=False)):
            diag = G.is_pure(c)
            mismatches += diag.pure != (abs(diag.purity - 1) <= 1e-8)
    rec.add("gaussian.admissibility_inherited", max(worst_adm, 0.0), 1e-10)
    rec.add("gaussian.is_pure_matches_purity", mismatches, 0)


def _purify_checks(rec, rng, hbar):
    g = S.natural_grid(1, 64, hbar, half_width=10.0)
    rho = S.random_mixed(g, 3, rng)
    pur = P.purify(rho, g)
    back = H.partial_trace_operator(H.DensityMatrix(pur.psi.grid, H.projector(pur.psi).kernel),
                                    pur.partition)
    rec.add("purify.partial_trace_round_trip", np.max(np.abs(back.kernel - rho.kernel)), 1e-8)
    rep = P.verify_wigsum(pur)
    rec.add("purify.wigsum", rep.residual / rep.scale, 1e-6)
    rec.add("purify.schmidt_weights", np.max(np.abs(P.schmidt_weights(pur.psi, pur.partition)[:3]
                                                    - pur.weights)), 1e-8)
    alt = P.purify(rho, g, b_vectors=P.orthonormal_family(g, 3, center=0.5 * np.sqrt(hbar)))
    alt_back = H.partial_trace_operator(H.DensityMatrix(alt.psi.grid, H.projector(alt.psi).kernel),
                                        alt.partition)
    rec.add("purify.non_uniqueness", np.max(np.abs(alt_back.kernel - back.kernel)), 1e-8)


def random_covariance(rng: np.random.Generator, part: Partition, hbar: float,
                      thermal: bool = True) -> G.CovarianceMatrix:
    """Random admissible covariance: ``(hbar/2) S^T D S`` with ``D >= 1`` thermal factors."""
    n = part.n
    S_ = G.random_symplectic(n, rng)
    nu = rng.uniform(1.0, 2.0, size=n) if thermal else np.ones(n)
    D = np.diag(np.concatenate([nu, nu]))
    sigma = 0.5 * hbar * S_.T @ D @ S_
    perm = G.partition_permutation(part)
    sigma = sigma[np.ix_(perm, perm)]
    return G.CovarianceMatrix(0.5 * (sigma + sigma.T), part, hbar)


def run_suite(seed: int = 0, hbar: float = 1.0, tol_scale: float = 1.0) -> dict:
    """Run every check; the report's ``passed`` is true iff all checks pass."""
    rng = np.random.default_rng(seed)
    rec = _Recorder(tol_scale)
    _grid_checks(rec, hbar)
    _hilbert_checks(rec, rng, hbar)
    _wigner_checks(rec, rng, hbar)
    _gaussian_checks(rec, rng, hbar)
    _purify_checks(rec, rng, hbar)
    return {
        "version": 1,
        "seed": int(seed),
        "hbar": float(hbar),
        "tol_scale": float(tol_scale),
        "passed": all(r["passed"] for r in rec.records),
        "checks": rec.records,
    }
