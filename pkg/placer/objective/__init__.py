"""
Objective module: wirelength, penalties and their analytic subgradients.
"""

from .model import total_objective
from .penalties import (
    boundary_partials,
    boundary_penalty,
    exact_overlap_area,
    hat,
    hat_terms,
    overlap_penalty_hat,
    overlap_penalty_quadratic,
    pair_geometry,
)
from .weights import PenaltyWeights, TermValueGrad, as_pair_array, pair_key
from .wirelength import hpwl, mean_field

__all__ = [
    'PenaltyWeights', 'TermValueGrad', 'as_pair_array', 'pair_key',
    'hpwl', 'mean_field', 'hat', 'hat_terms', 'boundary_penalty', 'boundary_partials',
    'overlap_penalty_hat', 'overlap_penalty_quadratic', 'exact_overlap_area',
    'pair_geometry', 'total_objective',
]
