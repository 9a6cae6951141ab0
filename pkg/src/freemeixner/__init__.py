"""Exact free Meixner toolkit.

Moment sequences, Jacobi parameters, the operator ``L_mu`` and second-order
operators built from it, the free Meixner family, and numerical and
random-matrix checks of the resulting identities.
"""
from .errors import FreeMeixnerError
from .measures import (
    JacobiParameters,
    MeasurePair,
    MomentSequence,
    jacobi_to_moments,
    moments_to_jacobi,
    phi_shift,
    r_transform,
    strip,
)
from .meixner import FreeMeixnerSpec, canonical_operator, conjugate_variable, density_and_atoms, meixner_jacobi, meixner_moments
from .operators import BochnerOperator, apply_L, bochner_nullspace, bochner_nullspace_pair, eigensystem
from .polysys import cfree_appell, orthogonal_polys
from .series import FormalPowerSeries, Polynomial

__version__ = "0.1.0"

__all__ = [
    "BochnerOperator",
    "FormalPowerSeries",
    "FreeMeixnerError",
    "FreeMeixnerSpec",
    "JacobiParameters",
    "MeasurePair",
    "MomentSequence",
    "Polynomial",
    "apply_L",
    "bochner_nullspace",
    "bochner_nullspace_pair",
    "canonical_operator",
    "cfree_appell",
    "conjugate_variable",
    "density_and_atoms",
    "eigensystem",
    "jacobi_to_moments",
    "meixner_jacobi",
    "meixner_moments",
    "moments_to_jacobi",
    "orthogonal_polys",
    "phi_shift",
    "r_transform",
    "strip",
]
