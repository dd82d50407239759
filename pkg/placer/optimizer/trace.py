"""
Per-iteration history of an optimizer run.
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional

import numpy as np


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    hpwl: float
    overlap: float
    overlap_ratio: float
    objective: float
    lr: float
    wall_time: float


@dataclass
class IterationTrace:
    """Append-only list of IterationRecord, one per outer iteration"""

    records: List[IterationRecord] = field(default_factory=list)
    stopped_early: bool = False
    best_iteration: Optional[int] = None

    def append(self, record: IterationRecord) -> None:
        if self.records and record.iteration <= self.records[-1].iteration:
            raise ValueError(
                f"Trace iterations must increase: got {record.iteration} after {self.records[-1].iteration}"
            )
        self.records.append(record)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[IterationRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> IterationRecord:
        return self.records[index]

    @property
    def last(self) -> Optional[IterationRecord]:
        return self.records[-1] if self.records else None

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)

    def values(self) -> np.ndarray:
        """Every numeric column except wall time, for reproducibility checks"""
        names = ("iteration", "hpwl", "overlap", "overlap_ratio", "objective", "lr")
        if not self.records:
            return np.zeros((0, len(names)))
        return np.array([[getattr(r, n) for n in names] for r in self.records], dtype=np.float64)

    def to_rows(self) -> List[Dict[str, float]]:
        return [asdict(r) for r in self.records]
