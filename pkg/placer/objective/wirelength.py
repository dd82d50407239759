"""
Distance terms of the objective: half-perimeter wirelength and the mean-field pull.
"""

import logging
from typing import Iterable, Optional, Tuple

import numpy as np

from ..netlist import Netlist, Placement
from .weights import TermValueGrad

logger = logging.getLogger(__name__)


def _net_extremes(netlist: Netlist, coords: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-net max/min of one coordinate and the cell attaining each; ties go to the
    lowest cell id.
    """
    pins = netlist.pin_cells
    starts = netlist.net_offsets[:-1]
    values = coords[pins]
    hi = np.maximum.reduceat(values, starts)
    lo = np.minimum.reduceat(values, starts)
    sentinel = netlist.n_cells
    owner = netlist.pin_net
    hi_cell = np.minimum.reduceat(np.where(values == hi[owner], pins, sentinel), starts)
    lo_cell = np.minimum.reduceat(np.where(values == lo[owner], pins, sentinel), starts)
    return hi, lo, hi_cell, lo_cell


def _resolve_subset(netlist: Netlist, net_subset: Optional[Iterable[int]]) -> np.ndarray:
    if net_subset is None:
        return np.arange(netlist.n_nets, dtype=np.int64)
    subset = np.unique(np.asarray(list(net_subset) if not isinstance(net_subset, np.ndarray) else net_subset,
                                  dtype=np.int64))
    if subset.size == 0:
        raise ValueError("net_subset is empty")
    if subset[0] < 0 or subset[-1] >= netlist.n_nets:
        raise IndexError(f"net_subset contains ids outside [0, {netlist.n_nets})")
    return subset


def hpwl(netlist: Netlist, placement: Placement, net_subset: Optional[Iterable[int]] = None) -> TermValueGrad:
    """
    Half-perimeter wirelength over a set of nets (all nets when None).

    Per net and axis the subgradient is +1 on the max-coordinate cell and -1 on
    the min-coordinate cell; the share of a terminal is dropped since it is fixed.
    """
    subset = _resolve_subset(netlist, net_subset)
    result = TermValueGrad.zeros(netlist.n_movable)
    if subset.size == 0:
        placement.check_dimension(netlist)
        return result

    x_all, y_all = netlist.full_coordinates(placement)
    # single-pin nets have zero extent
    subset = subset[netlist.net_sizes[subset] >= 2]
    index = netlist.movable_index

    value = 0.0
    for coords, grad in ((x_all, result.grad_x), (y_all, result.grad_y)):
        hi, lo, hi_cell, lo_cell = _net_extremes(netlist, coords)
        value += float(np.sum(hi[subset] - lo[subset]))
        for cells, sign in ((hi_cell[subset], 1.0), (lo_cell[subset], -1.0)):
            movable = index[cells]
            np.add.at(grad, movable[movable >= 0], sign)
    result.value = value
    return result


def mean_field(placement: Placement, alpha: float) -> TermValueGrad:
    """
    alpha * sum_i |p_i - p_mean|^2. The mean is held fixed while differentiating;
    since the deviations sum to zero this equals the exact gradient.
    """
    n = len(placement)
    if n < 1:
        raise ValueError("mean_field needs at least one movable cell")
    if alpha == 0:
        return TermValueGrad.zeros(n)
    dx = placement.x - placement.x.mean()
    dy = placement.y - placement.y.mean()
    value = alpha * float(np.sum(dx * dx) + np.sum(dy * dy))
    return TermValueGrad(value, 2.0 * alpha * dx, 2.0 * alpha * dy)
