"""Closed-form and semi-closed-form performance analysis of the hybrid network."""
from __future__ import annotations

from .association import (
    DEGENERATE_TIER,
    association_prob_mmwave,
    association_prob_thz,
    conditioned_distance_pdf_mmwave,
    conditioned_distance_pdf_thz,
    mm_association_numerator,
    nearest_distance_pdf,
    nu,
    thz_association_numerator,
)
from .coverage import (
    coverage_conditioned,
    coverage_hybrid,
    coverage_mmwave_interference_limited,
    coverage_mmwave_standalone,
    coverage_thz_standalone,
)
from .derived import DerivedQuantities, alzer_constant, derived, epsilon, normalized_noise
from .laplace import (
    chi_mmwave,
    chi_thz,
    laplace_interference_mmwave,
    laplace_interference_mmwave_numeric,
    laplace_interference_thz,
    laplace_interference_thz_numeric,
)
from .spectral import se_hybrid, se_mmwave, se_thz, zeta

__all__ = [
    "DEGENERATE_TIER",
    "DerivedQuantities",
    "alzer_constant",
    "association_prob_mmwave",
    "association_prob_thz",
    "chi_mmwave",
    "chi_thz",
    "conditioned_distance_pdf_mmwave",
    "conditioned_distance_pdf_thz",
    "coverage_conditioned",
    "coverage_hybrid",
    "coverage_mmwave_interference_limited",
    "coverage_mmwave_standalone",
    "coverage_thz_standalone",
    "derived",
    "epsilon",
    "laplace_interference_mmwave",
    "laplace_interference_mmwave_numeric",
    "laplace_interference_thz",
    "laplace_interference_thz_numeric",
    "mm_association_numerator",
    "nearest_distance_pdf",
    "normalized_noise",
    "nu",
    "se_hybrid",
    "se_mmwave",
    "se_thz",
    "thz_association_numerator",
    "zeta",
]
