from .correlations import kpoint_determinantal, kpoint_permanental, permanent
from .gaf import (
    GafConditioningError,
    GafDomainError,
    gaf_g,
    gaf_h,
    gaf_I,
    gaf_kpoint,
    gaf_matrices,
    gaf_phi,
    gaf_tail_cutoff,
)
from .pairs import (
    InvalidProcessError,
    ProcessKind,
    ProcessSpec,
    determinantal,
    diffraction_pair,
    permanental,
)

__all__ = [
    "GafConditioningError",
    "GafDomainError",
    "InvalidProcessError",
    "ProcessKind",
    "ProcessSpec",
    "determinantal",
    "diffraction_pair",
    "gaf_I",
    "gaf_g",
    "gaf_h",
    "gaf_kpoint",
    "gaf_matrices",
    "gaf_phi",
    "gaf_tail_cutoff",
    "kpoint_determinantal",
    "kpoint_permanental",
    "permanent",
    "permanental",
]
