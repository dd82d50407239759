import logging

from ..netlist import Netlist, Placement, Region
from .penalties import boundary_penalty, overlap_penalty_hat
from .weights import PenaltyWeights
from .wirelength import hpwl, mean_field

logger = logging.getLogger(__name__)


def total_objective(
    netlist: Netlist,
    region: Region,
    placement: Placement,
    weights: PenaltyWeights,
    alpha: float,
    pairs,
) -> float:
    """
    HPWL over all nets + weighted boundary penalty + weighted hat overlap
    penalty over `pairs` + mean-field term. Never subsampled.
    """
    value = hpwl(netlist, placement).value
    value += boundary_penalty(netlist, region, placement, weights).value
    value += overlap_penalty_hat(netlist, placement, weights, pairs).value
    if len(placement):
        value += mean_field(placement, alpha).value
    return value
