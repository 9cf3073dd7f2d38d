"""Magnetic fields on flat tori: invariants, Landau spectra and classical flows."""

from magtor.core import (
    DEFAULT_TOL,
    MetricGram,
    SpectralSignature,
    SymplecticGram,
    TorusMagneticSystem,
    f_matrix,
    spectral_signature,
    symplectic_volume,
    validate_system,
)
from magtor.normal_form import (
    ChernFactors,
    UnimodularTransform,
    chern_factors,
    chern_invariant_factors,
    phase_space_obstruction,
    verify_normal_form,
)
from magtor.spectra import (
    LandauSpectrum,
    all_k_consistency,
    is_kahler,
    landau_spectrum,
    quantum_equivalent,
    reconstruct_signature,
    spectra_equal,
)

__version__ = "0.1.0"
