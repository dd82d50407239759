"""
Degree-weighted mini-batch sampling of nets.

Nets with many neighbouring nets (nets sharing a cell) are drawn more often:
p_i = exp(d_i / T) / sum_j exp(d_j / T).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SamplingPlan:
    probabilities: np.ndarray
    temperature: float
    batch_size: int

    @property
    def n_nets(self) -> int:
        return int(self.probabilities.size)


def default_temperature(degrees: np.ndarray) -> float:
    """max(1, mean degree)"""
    if len(degrees) == 0:
        return 1.0
    return max(1.0, float(np.mean(degrees)))


def default_batch_size(n_nets: int, fraction: float = 0.2) -> int:
    return max(1, min(n_nets, math.ceil(n_nets * fraction)))


def build_plan(degrees, temperature: Optional[float], batch_size: int) -> SamplingPlan:
    """
    Softmax of degrees at the given temperature (None picks the default).

    Raises:
        ValueError: nonpositive temperature, no nets, or a batch larger than
            the number of nets
    """
    degrees = np.asarray(degrees, dtype=np.float64)
    if degrees.size == 0:
        raise ValueError("Cannot build a sampling plan without nets")
    if temperature is None:
        temperature = default_temperature(degrees)
    if not (temperature > 0) or not math.isfinite(temperature):
        raise ValueError(f"Sampling temperature must be positive and finite, got {temperature}")
    if not (1 <= batch_size <= degrees.size):
        raise ValueError(f"batch_size must be in [1, {degrees.size}], got {batch_size}")

    logits = degrees / temperature
    weights = np.exp(logits - logits.max())
    probabilities = weights / weights.sum()
    # keep every net reachable even when the exponent underflows
    tiny = np.finfo(np.float64).tiny
    if probabilities.min() < tiny:
        probabilities = np.maximum(probabilities, tiny)
        probabilities /= probabilities.sum()
    return SamplingPlan(probabilities, float(temperature), int(batch_size))


def uniform_plan(n_nets: int, batch_size: int) -> SamplingPlan:
    """Equal probabilities, used by the random-batch ablation"""
    return build_plan(np.zeros(n_nets), 1.0, batch_size)


def sample_batch(plan: SamplingPlan, rng: np.random.Generator) -> List[int]:
    """
    batch_size distinct nets drawn without replacement, proportionally to p.

    Uses exponential keys log(u_i) / p_i: taking the largest keys in order is
    distributed exactly like drawing one net at a time and renormalizing.
    """
    u = rng.random(plan.n_nets)
    with np.errstate(divide="ignore", over="ignore"):
        keys = np.log(u) / plan.probabilities
    order = np.argsort(-keys, kind="stable")[: plan.batch_size]
    return [int(i) for i in order]
