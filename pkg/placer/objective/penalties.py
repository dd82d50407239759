"""
Constraint penalties: boundary ReLU penalty, the 2-D hat overlap penalty and
the quadratic (overlap-area) penalty kept for the gradient-vanishing comparison.

Every ReLU/abs kink takes the zero subgradient.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..netlist import Netlist, Placement, Region
from .weights import PenaltyWeights, TermValueGrad, as_pair_array

logger = logging.getLogger(__name__)


def hat_terms(dx: np.ndarray, dy: np.ndarray, r: np.ndarray, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorized hat function phi_{r,t}(dx, dy) and its partials.

    Inside the support the x-branch (1 - |dx|/r) applies when |dy|/t <= |dx|/r,
    the y-branch (1 - |dy|/t) otherwise.
    """
    ax, ay = np.abs(dx), np.abs(dy)
    sx, sy = ax / r, ay / t
    inside = (sx < 1.0) & (sy < 1.0)
    x_branch = sy <= sx
    value = np.where(inside, np.where(x_branch, 1.0 - sx, 1.0 - sy), 0.0)
    d_dx = np.where(inside & x_branch, -np.sign(dx) / r, 0.0)
    d_dy = np.where(inside & ~x_branch, -np.sign(dy) / t, 0.0)
    return value, d_dx, d_dy


def hat(x: float, y: float, r: float, t: float) -> Tuple[float, float, float]:
    """phi_{r,t}(x, y) with (d/dx, d/dy)"""
    if not (r > 0 and t > 0):
        raise ValueError(f"hat support must be positive, got r={r}, t={t}")
    value, d_dx, d_dy = hat_terms(np.float64(x), np.float64(y), np.float64(r), np.float64(t))
    return float(value), float(d_dx), float(d_dy)


def boundary_penalty(
    netlist: Netlist,
    region: Region,
    placement: Placement,
    weights: PenaltyWeights,
    cells: Optional[np.ndarray] = None,
) -> TermValueGrad:
    """
    sum_i gamma_i * l_b(x_i, y_i) over movable cells.

    Args:
        cells: optional Placement indices restricting the sum; other cells
            contribute neither value nor gradient
    """
    placement.check_dimension(netlist)
    w_half = netlist.movable_widths / 2.0
    h_half = netlist.movable_heights / 2.0
    x, y = placement.x, placement.y

    below_x = w_half - x
    above_x = x - (region.width - w_half)
    below_y = h_half - y
    above_y = y - (region.height - h_half)

    gamma = weights.gamma_b
    if gamma.size != len(placement):
        raise ValueError(f"Expected {len(placement)} boundary weights, got {gamma.size}")
    if cells is not None:
        mask = np.zeros(len(placement), dtype=bool)
        mask[np.asarray(cells, dtype=np.int64)] = True
        gamma = np.where(mask, gamma, 0.0)

    loss = (np.maximum(below_x, 0.0) + np.maximum(above_x, 0.0)
            + np.maximum(below_y, 0.0) + np.maximum(above_y, 0.0))
    grad_x = gamma * ((above_x > 0).astype(np.float64) - (below_x > 0).astype(np.float64))
    grad_y = gamma * ((above_y > 0).astype(np.float64) - (below_y > 0).astype(np.float64))
    return TermValueGrad(float(np.sum(gamma * loss)), grad_x, grad_y)


def boundary_partials(netlist: Netlist, region: Region, placement: Placement) -> Tuple[np.ndarray, np.ndarray]:
    """Unweighted per-cell partials of l_b"""
    unit = PenaltyWeights(np.ones(len(placement)), {}, 1.0)
    term = boundary_penalty(netlist, region, placement, unit)
    return term.grad_x, term.grad_y


def pair_geometry(netlist: Netlist, placement: Placement, pairs) -> Tuple[np.ndarray, ...]:
    """
    Resolve cell-id pairs to Placement indices and the offsets/half-sum sizes.

    Returns:
        (pairs, mi, mj, dx, dy, w_ij, h_ij)
    """
    placement.check_dimension(netlist)
    pairs = as_pair_array(pairs)
    if pairs.size and (pairs.min() < 0 or pairs.max() >= netlist.n_cells):
        raise IndexError("Pair references a cell id outside the netlist")
    mi = netlist.movable_index[pairs[:, 0]]
    mj = netlist.movable_index[pairs[:, 1]]
    if np.any(mi < 0) or np.any(mj < 0):
        bad = pairs[(mi < 0) | (mj < 0)][0]
        raise ValueError(f"Pair ({bad[0]}, {bad[1]}) references a terminal; overlap is defined on movable cells only")
    dx = placement.x[mi] - placement.x[mj]
    dy = placement.y[mi] - placement.y[mj]
    w_ij = (netlist.widths[pairs[:, 0]] + netlist.widths[pairs[:, 1]]) / 2.0
    h_ij = (netlist.heights[pairs[:, 0]] + netlist.heights[pairs[:, 1]]) / 2.0
    return pairs, mi, mj, dx, dy, w_ij, h_ij


def _scatter_pairs(n: int, mi: np.ndarray, mj: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    grad_x = np.zeros(n)
    grad_y = np.zeros(n)
    np.add.at(grad_x, mi, gx)
    np.add.at(grad_x, mj, -gx)
    np.add.at(grad_y, mi, gy)
    np.add.at(grad_y, mj, -gy)
    return grad_x, grad_y


def overlap_penalty_hat(netlist: Netlist, placement: Placement, weights: PenaltyWeights, pairs) -> TermValueGrad:
    """sum over pairs of gamma_ij * phi_{w_ij, h_ij}(x_i - x_j, y_i - y_j)"""
    pairs, mi, mj, dx, dy, w_ij, h_ij = pair_geometry(netlist, placement, pairs)
    if pairs.shape[0] == 0:
        return TermValueGrad.zeros(len(placement))
    value, d_dx, d_dy = hat_terms(dx, dy, w_ij, h_ij)
    gamma = weights.pair_weights(pairs)
    grad_x, grad_y = _scatter_pairs(len(placement), mi, mj, gamma * d_dx, gamma * d_dy)
    return TermValueGrad(float(np.sum(gamma * value)), grad_x, grad_y)


def overlap_penalty_quadratic(netlist: Netlist, placement: Placement, weights: PenaltyWeights, pairs) -> TermValueGrad:
    """
    sum over pairs of gamma_ij * l_x * l_y with l_x = ReLU(w_ij - |dx|) and
    l_y = ReLU(h_ij - |dy|), the product of overlap extents. Its partials shrink
    linearly as a pair approaches tangency.
    """
    pairs, mi, mj, dx, dy, w_ij, h_ij = pair_geometry(netlist, placement, pairs)
    if pairs.shape[0] == 0:
        return TermValueGrad.zeros(len(placement))
    lx = np.maximum(w_ij - np.abs(dx), 0.0)
    ly = np.maximum(h_ij - np.abs(dy), 0.0)
    active = (lx > 0) & (ly > 0)
    gamma = weights.pair_weights(pairs)
    gx = np.where(active, -np.sign(dx) * ly, 0.0) * gamma
    gy = np.where(active, -np.sign(dy) * lx, 0.0) * gamma
    grad_x, grad_y = _scatter_pairs(len(placement), mi, mj, gx, gy)
    return TermValueGrad(float(np.sum(gamma * lx * ly)), grad_x, grad_y)


def exact_overlap_area(netlist: Netlist, placement: Placement, pairs) -> float:
    """Total pairwise overlap sum ReLU(w_ij - |dx|) * ReLU(h_ij - |dy|) over the given pairs"""
    pairs, _, _, dx, dy, w_ij, h_ij = pair_geometry(netlist, placement, pairs)
    if pairs.shape[0] == 0:
        return 0.0
    return float(np.sum(np.maximum(w_ij - np.abs(dx), 0.0) * np.maximum(h_ij - np.abs(dy), 0.0)))
