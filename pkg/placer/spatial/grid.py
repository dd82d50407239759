"""
Uniform-grid broad phase for finding possibly overlapping cell pairs.
"""

import logging
import math
from collections import defaultdict
from itertools import combinations
from typing import Dict, List, Optional, Set, Tuple

import numpy as np

from ..netlist import Netlist, Placement, Region

logger = logging.getLogger(__name__)

BinKey = Tuple[int, int]


class UniformGrid:
    """
    Bins of size bin_w x bin_h; a cell is registered in every bin its closed
    rectangle touches. With a region, bin indices are clamped to one halo ring
    around the die so far-away cells still land in a finite set of bins.
    """

    def __init__(self, bin_w: float, bin_h: float, region: Optional[Region] = None):
        if not (bin_w > 0 and bin_h > 0):
            raise ValueError(f"Bin size must be positive, got {bin_w}x{bin_h}")
        self.bin_w = float(bin_w)
        self.bin_h = float(bin_h)
        self.region = region
        self.occupancy: Dict[BinKey, List[int]] = defaultdict(list)
        if region is not None:
            self.n_bins_x: Optional[int] = max(1, math.ceil(region.width / self.bin_w))
            self.n_bins_y: Optional[int] = max(1, math.ceil(region.height / self.bin_h))
        else:
            self.n_bins_x = self.n_bins_y = None

    def _bin_span(self, lo: np.ndarray, hi: np.ndarray, size: float, n_bins: Optional[int]) -> Tuple[np.ndarray, np.ndarray]:
        first = np.floor(lo / size).astype(np.int64)
        last = np.floor(hi / size).astype(np.int64)
        if n_bins is not None:
            first = np.clip(first, -1, n_bins)
            last = np.clip(last, -1, n_bins)
        return first, last

    def insert_many(self, cell_ids: np.ndarray, x_lo: np.ndarray, y_lo: np.ndarray, x_hi: np.ndarray, y_hi: np.ndarray) -> None:
        bx0, bx1 = self._bin_span(x_lo, x_hi, self.bin_w, self.n_bins_x)
        by0, by1 = self._bin_span(y_lo, y_hi, self.bin_h, self.n_bins_y)
        for cid, ax, bx, ay, by in zip(cell_ids.tolist(), bx0.tolist(), bx1.tolist(), by0.tolist(), by1.tolist()):
            for i in range(ax, bx + 1):
                for j in range(ay, by + 1):
                    self.occupancy[(i, j)].append(cid)

    def cells(self) -> Set[int]:
        found: Set[int] = set()
        for members in self.occupancy.values():
            found.update(members)
        return found

    def bins_of(self, cell_id: int) -> List[BinKey]:
        return sorted(key for key, members in self.occupancy.items() if cell_id in members)

    def candidate_pairs(self) -> np.ndarray:
        return candidate_pairs(self)


def build_grid(
    netlist: Netlist,
    placement: Placement,
    bin_w: Optional[float] = None,
    bin_h: Optional[float] = None,
    region: Optional[Region] = None,
) -> UniformGrid:
    """
    Register every movable cell in the grid. Default bins are as large as the
    largest movable cell in each dimension.
    """
    placement.check_dimension(netlist)
    if bin_w is None:
        bin_w = float(netlist.movable_widths.max()) if netlist.n_movable else 1.0
    if bin_h is None:
        bin_h = float(netlist.movable_heights.max()) if netlist.n_movable else 1.0

    grid = UniformGrid(bin_w, bin_h, region)
    if netlist.n_movable == 0:
        return grid

    w_half = netlist.movable_widths / 2.0
    h_half = netlist.movable_heights / 2.0
    grid.insert_many(
        netlist.movable_ids,
        placement.x - w_half, placement.y - h_half,
        placement.x + w_half, placement.y + h_half,
    )
    return grid


def candidate_pairs(grid: UniformGrid) -> np.ndarray:
    """
    Unordered pairs (i < j) of cell ids sharing at least one bin, deduplicated and
    sorted. Always a superset of the truly overlapping pairs.
    """
    found: Set[Tuple[int, int]] = set()
    for members in grid.occupancy.values():
        if len(members) < 2:
            continue
        for a, b in combinations(members, 2):
            found.add((a, b) if a < b else (b, a))
    if not found:
        return np.zeros((0, 2), dtype=np.int64)
    return np.array(sorted(found), dtype=np.int64)
