"""Wigner-function numerics for reduced states of bipartite systems.

The package discretizes the Weyl-Wigner correspondence on a uniform phase-space
lattice and checks that tracing out a subsystem in Hilbert space agrees with
integrating its Wigner distribution over the traced-out phase-space variables.

``wigmarg.purify`` is the purification module; its ``purify`` function is not
re-exported here so the module name stays importable.
"""

from .gaussian import (
    CovarianceMatrix,
    PurityDiagnosis,
    ValidityReport,
    gaussian_purity,
    gaussian_wigner_value,
    is_pure,
    random_symplectic,
    reduce_gaussian,
    sample_gaussian_wigner,
    symplectic_eigenvalues,
    symplectic_form,
    two_mode_squeezed,
    validate_covariance,
)
from .grid import Partition, PhaseSpaceGrid, make_grid, phase_point
from .hilbert import (
    DensityMatrix,
    SpectralDecomposition,
    WaveFunction,
    assemble_density,
    gaussian_wavepacket,
    inner,
    normalize,
    partial_trace_operator,
    projector,
    purity,
    spectral_decompose,
    tensor_product,
)
from .purify import Purification, WigsumReport, schmidt_weights, verify_wigsum
from .wigner import (
    BoundaryDecayWarning,
    CrossWignerGrid,
    Symbol,
    WignerGrid,
    cross_wigner,
    density_from_wigner,
    marginal_position,
    marginalize_b,
    pairing_via_symbol,
    trace_via_integral,
    weyl_symbol,
    wigner_of_density,
    wigner_purity,
    wigner_transform,
)

__version__ = "0.1.0"
