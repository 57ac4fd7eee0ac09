"""Spectra, symmetries and entanglement structures of three particles in 1D."""

__version__ = "0.1.0"

from .models import (
    ContactInteraction,
    HarmonicInteraction,
    HarmonicTrap,
    InfiniteWell,
    InverseSquareInteraction,
    ModelSpec,
    NoInteraction,
    NoTrap,
    QuadraticTrap,
    SeparabilityVerdict,
    TabulatedTrap,
    UnitsConvention,
    classify_separability,
    classify_symmetry_group,
    load_config,
    parse_config,
    validate_model,
)
from .grids import Grid1D, PolarGrid
from .onebody import OneBodySpectrum, analytic_spectrum, grid_spectrum_1d
from .jacobi import from_jacobi, parity_action, permutation_action, to_jacobi
from .composition import SpectrumLevel, compose_spectrum, detect_accidental
from .solvable import (
    SectorState,
    SilverLevel,
    calogero_moser_spectrum,
    girardeau_wavefunction,
    harm_harm_spectrum,
    unitary_contact_spectrum,
)
from .symmetry import (
    GroupSpec,
    IrrepDecomposition,
    build_group,
    decompose_eigenspace,
    irrep_towers,
    project,
    representation_on_space,
)
from .oracle import (
    OracleResult,
    WaveFunctionGrid,
    apply_hamiltonian,
    full_spectrum_3d,
    relative_spectrum_2d,
)
from .dynamics import (
    SchmidtResult,
    TPSBipartition,
    TruncatedState,
    evolve,
    gold_locality_check,
    ladder_check,
    schmidt,
    schmidt_invariance_check,
    superintegrability_check,
)
