import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

PairKey = Tuple[int, int]


def pair_key(i: int, j: int) -> PairKey:
    """Unordered pair key, smaller id first"""
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass
class TermValueGrad:
    """Value of one objective term and a subgradient w.r.t. the movable centers"""

    value: float
    grad_x: np.ndarray
    grad_y: np.ndarray

    @classmethod
    def zeros(cls, n: int) -> "TermValueGrad":
        return cls(0.0, np.zeros(n), np.zeros(n))

    def __add__(self, other: "TermValueGrad") -> "TermValueGrad":
        return TermValueGrad(self.value + other.value, self.grad_x + other.grad_x, self.grad_y + other.grad_y)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.grad_x, self.grad_y])


@dataclass
class PenaltyWeights:
    """
    Boundary weights gamma_b (one per movable cell, Placement order) and pairwise
    overlap weights keyed by unordered cell-id pairs. Pairs without an entry use
    gamma0.
    """

    gamma_b: np.ndarray
    gamma_ov: Dict[PairKey, float] = field(default_factory=dict)
    gamma0: float = 1000.0

    def __post_init__(self):
        self.gamma_b = np.asarray(self.gamma_b, dtype=np.float64)
        if self.gamma0 < 1 or not np.isfinite(self.gamma0):
            raise ValueError(f"gamma0 must be finite and >= 1, got {self.gamma0}")
        if self.gamma_b.size and (not np.all(np.isfinite(self.gamma_b)) or np.min(self.gamma_b) < 1):
            raise ValueError("Boundary weights must be finite and >= 1")

    @classmethod
    def uniform(cls, n_movable: int, gamma0: float = 1000.0) -> "PenaltyWeights":
        return cls(np.full(n_movable, float(gamma0)), {}, float(gamma0))

    def pair_weight(self, i: int, j: int) -> float:
        return self.gamma_ov.get(pair_key(i, j), self.gamma0)

    def pair_weights(self, pairs: np.ndarray) -> np.ndarray:
        if len(pairs) == 0:
            return np.zeros(0)
        get = self.gamma_ov.get
        default = self.gamma0
        return np.array([get(pair_key(i, j), default) for i, j in pairs], dtype=np.float64)

    def set_pairs(self, updates: Iterable[Tuple[PairKey, float]]) -> None:
        for key, value in updates:
            if value < 1 or not np.isfinite(value):
                raise ValueError(f"Overlap weight for {key} must be finite and >= 1, got {value}")
            self.gamma_ov[pair_key(*key)] = float(value)

    def copy(self) -> "PenaltyWeights":
        return PenaltyWeights(self.gamma_b.copy(), dict(self.gamma_ov), self.gamma0)


def as_pair_array(pairs: Optional[Iterable]) -> np.ndarray:
    """Normalize a pair collection to an (k, 2) int64 array"""
    if pairs is None:
        return np.zeros((0, 2), dtype=np.int64)
    arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"Pairs must have shape (k, 2), got {arr.shape}")
    return arr
