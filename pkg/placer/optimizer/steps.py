"""
Building blocks of one optimizer step: penalty-weight adaptation, gradient
perturbation, the learning-rate schedule, the stopping rule and the update rules.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..netlist import Netlist, Placement, Region
from ..objective import PenaltyWeights, TermValueGrad, boundary_partials, hat_terms, hpwl, mean_field, pair_geometry

logger = logging.getLogger(__name__)


def adaptive_gamma(hpwl_grads, penalty_grads, gamma0: float) -> np.ndarray:
    """
    Penalty weight per row (a cell or a pair) from the ratio of wirelength to
    penalty partials.

    Args:
        hpwl_grads: (k, c) wirelength partials, one row per weighted entity
        penalty_grads: (k, c) unweighted penalty partials on the same coordinates
        gamma0: weight kept where a row's penalty partials are all zero

    Returns:
        (k,) weights: ceil of the largest |hpwl|/|penalty| ratio floored at 1,
        or gamma0 for inactive rows
    """
    num = np.abs(np.atleast_2d(np.asarray(hpwl_grads, dtype=np.float64)))
    den = np.abs(np.atleast_2d(np.asarray(penalty_grads, dtype=np.float64)))
    if num.shape != den.shape:
        raise ValueError(f"Gradient shapes differ: {num.shape} vs {den.shape}")
    if num.shape[0] == 0 or num.shape[1] == 0:
        return np.full(num.shape[0], float(gamma0))

    active = den > 0
    ratio = np.divide(num, den, out=np.zeros_like(num), where=active)
    gamma = np.maximum(np.ceil(ratio.max(axis=1)), 1.0)
    return np.where(active.any(axis=1), gamma, float(gamma0))


def adapt_weights(netlist: Netlist, region: Region, placement: Placement, pairs: np.ndarray,
                  gamma0: float, alpha: float = 0.0) -> PenaltyWeights:
    """
    Recompute boundary and overlap weights at the current placement. Pairs whose
    hat partials vanish get no entry and fall back to gamma0.

    The numerator is the whole wirelength split: HPWL partials plus the
    mean-field pull when alpha > 0.
    """
    n = len(placement)
    wire = TermValueGrad.zeros(n)
    if netlist.n_nets:
        wire = wire + hpwl(netlist, placement)
    if alpha:
        wire = wire + mean_field(placement, alpha)
    wx, wy = wire.grad_x, wire.grad_y

    bx, by = boundary_partials(netlist, region, placement)
    gamma_b = adaptive_gamma(np.column_stack([wx, wy]), np.column_stack([bx, by]), gamma0)
    weights = PenaltyWeights(gamma_b, {}, gamma0)

    pairs, mi, mj, dx, dy, w_ij, h_ij = pair_geometry(netlist, placement, pairs)
    if pairs.shape[0] == 0:
        return weights
    _, d_dx, d_dy = hat_terms(dx, dy, w_ij, h_ij)
    active = (d_dx != 0) | (d_dy != 0)
    if not np.any(active):
        return weights

    # coordinates of a pair: x_i, x_j, y_i, y_j
    num = np.column_stack([wx[mi], wx[mj], wy[mi], wy[mj]])[active]
    den = np.column_stack([d_dx, -d_dx, d_dy, -d_dy])[active]
    gamma_ov = adaptive_gamma(num, den, gamma0)
    weights.set_pairs(((int(i), int(j)), float(g)) for (i, j), g in zip(pairs[active], gamma_ov))
    logger.debug(f"Adapted {len(gamma_ov)} pair weights, max {gamma_ov.max():.0f}")
    return weights


def perturbation_scale(k: int) -> float:
    if k < 1:
        raise ValueError(f"Outer iteration index must be >= 1, got {k}")
    return 0.2 / k ** 3


def perturb_gradient(grad: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """g + eps * ||g|| * eta with eta ~ N(0, I) and eps = 0.2 / k^3"""
    eps = perturbation_scale(k)
    grad = np.asarray(grad, dtype=np.float64)
    # always draw so the random stream does not depend on the gradient
    eta = rng.standard_normal(grad.shape)
    norm = float(np.linalg.norm(grad))
    if norm == 0.0:
        return grad.copy()
    return grad + eps * norm * eta


def lr_schedule(lr0: float, k: int, iter_max: int) -> float:
    """Cosine annealing from lr0 at k=0 down to 0 at k=iter_max"""
    if iter_max < 1:
        raise ValueError(f"iter_max must be >= 1, got {iter_max}")
    if not (0 <= k <= iter_max):
        raise ValueError(f"k must be in [0, {iter_max}], got {k}")
    return lr0 * (1.0 + math.cos(math.pi * k / iter_max)) / 2.0


def should_stop(prev_hpwl: Optional[float], hpwl_value: float, overlap_ratio: float,
                eps_hpwl: float, eps_overlap: float) -> bool:
    """
    True when HPWL changed by less than eps_hpwl (relative) since the previous
    outer iteration AND the overlap ratio is below eps_overlap.
    """
    if prev_hpwl is None:
        return False
    if hpwl_value == 0.0:
        change = 0.0 if prev_hpwl == 0.0 else math.inf
    else:
        change = abs(prev_hpwl / hpwl_value - 1.0)
    return change < eps_hpwl and overlap_ratio < eps_overlap


class SgdUpdater:
    """Plain subgradient step"""

    def step(self, grad: np.ndarray, lr: float) -> np.ndarray:
        return -lr * grad


class AdamState:
    """First/second moment estimates for one split; fresh per run"""

    def __init__(self, size: int, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, grad: np.ndarray, lr: float) -> np.ndarray:
        if grad.shape != self.m.shape:
            raise ValueError(f"Gradient shape {grad.shape} does not match moments {self.m.shape}")
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        return -lr * m_hat / (np.sqrt(v_hat) + self.eps)
