"""Finite realizations of the process families with deterministic seeding."""

from .dpp import DiscretizationError, FrequencyTruncationError, periodic_modes, sample_dpp_spectral
from .gaf import GafTruncationError, RootFindingError, sample_gaf_zeros
from .ginibre import ginibre_matrix_size, sample_ginibre
from .permanental import field_grid, field_variance, sample_gaussian_field, sample_permanental
from .rng import make_rng, realization_seeds
from .simple import (
    BudgetError,
    SamplerError,
    renewal_increment_cdf,
    renewal_increment_pdf,
    renewal_rates,
    sample_cox_cosine,
    sample_poisson,
    sample_renewal_dpp,
    sample_renewal_increments,
)
from .window import PointConfiguration, Shape, Window, read_points_csv, write_points_csv

__all__ = [
    "BudgetError",
    "DiscretizationError",
    "FrequencyTruncationError",
    "GafTruncationError",
    "PointConfiguration",
    "RootFindingError",
    "SamplerError",
    "Shape",
    "Window",
    "field_grid",
    "field_variance",
    "ginibre_matrix_size",
    "make_rng",
    "periodic_modes",
    "read_points_csv",
    "realization_seeds",
    "renewal_increment_cdf",
    "renewal_increment_pdf",
    "renewal_rates",
    "sample_cox_cosine",
    "sample_dpp_spectral",
    "sample_gaf_zeros",
    "sample_gaussian_field",
    "sample_ginibre",
    "sample_permanental",
    "sample_poisson",
    "sample_renewal_dpp",
    "sample_renewal_increments",
    "write_points_csv",
]
