"""
Alternating legalization: a wirelength descent step, then exact pairwise
de-overlap of each cell against its first overlapping partner, then snapping
every cell back inside the die. Rounds repeat because pairwise constraints
are coupled.
"""

import logging
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import LegalizationError
from ..netlist import Netlist, Placement, Region
from ..objective import exact_overlap_area, hpwl
from ..spatial import build_grid, candidate_pairs

logger = logging.getLogger(__name__)

# Relative slack below which two cells count as touching rather than overlapping
OVERLAP_TOLERANCE = 1e-9


class LegalizeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    rounds: int = Field(10, ge=1)
    # None uses 0.01 * mean cell size; 0 disables the wirelength sub-step
    wl_lr: Optional[float] = Field(None, ge=0)
    pair_order: Literal["ascending", "descending"] = "ascending"
    symmetric: bool = False
    sweep_cap: int = Field(100, ge=0)


class LegalizeReport(BaseModel):
    initial_hpwl: float
    hpwl: float
    overlap: float
    sweeps: int
    in_bounds: bool
    success: bool
    message: str


def _strictly_overlapping(adx, ady, w_ij, h_ij):
    return (adx < w_ij * (1.0 - OVERLAP_TOLERANCE)) & (ady < h_ij * (1.0 - OVERLAP_TOLERANCE))


def deoverlap_step(netlist: Netlist, placement: Placement, cell_i: int, cell_j: int) -> Tuple[float, float]:
    """
    Displacement of cell_i that makes the pair exactly tangent along the axis
    where the hat subgradient is active.

    The step is -alpha * g / |g| with g the hat subgradient at cell_i, so the
    cell moves straight away from its partner by alpha = w_ij - |dx| (x-branch)
    or h_ij - |dy| (y-branch). Coincident centers take the x-branch and move +x.

    Raises:
        LegalizationError: the pair does not strictly overlap, or a terminal
            is involved
    """
    index = netlist.movable_index
    mi, mj = int(index[cell_i]), int(index[cell_j])
    if mi < 0 or mj < 0:
        raise LegalizationError(f"Cells {cell_i} and {cell_j} must both be movable")
    dx = placement.x[mi] - placement.x[mj]
    dy = placement.y[mi] - placement.y[mj]
    w_ij = (netlist.widths[cell_i] + netlist.widths[cell_j]) / 2.0
    h_ij = (netlist.heights[cell_i] + netlist.heights[cell_j]) / 2.0
    if cell_i == cell_j or not _strictly_overlapping(abs(dx), abs(dy), w_ij, h_ij):
        raise LegalizationError(f"Cells {cell_i} and {cell_j} do not overlap")

    if abs(dy) / h_ij <= abs(dx) / w_ij:
        alpha = w_ij - abs(dx)
        direction = 1.0 if dx >= 0 else -1.0
        return alpha * direction, 0.0
    alpha = h_ij - abs(dy)
    direction = 1.0 if dy > 0 else -1.0
    return 0.0, alpha * direction


def boundary_snap(netlist: Netlist, region: Region, placement: Placement, cell_id: int) -> Tuple[float, float]:
    """
    Displacement putting a violating coordinate exactly on the nearest feasible
    bound; zero for a cell already inside.

    Raises:
        LegalizationError: the cell is larger than the die
    """
    m = int(netlist.movable_index[cell_id])
    if m < 0:
        raise LegalizationError(f"Cell {cell_id} is a terminal")
    w, h = netlist.widths[cell_id], netlist.heights[cell_id]
    if w > region.width or h > region.height:
        raise LegalizationError(f"Cell {cell_id} ({w}x{h}) is larger than the {region.width}x{region.height} die")
    x, y = placement.x[m], placement.y[m]
    new_x = min(max(x, w / 2.0), region.width - w / 2.0)
    new_y = min(max(y, h / 2.0), region.height - h / 2.0)
    return new_x - x, new_y - y


class Legalizer:
    """Runs the alternating sweeps over one netlist; works on copies of the input"""

    def __init__(self, netlist: Netlist, region: Region, config: Optional[LegalizeConfig] = None):
        self.netlist = netlist
        self.region = region
        self.config = config or LegalizeConfig()
        region.validate_for(netlist)

        if self.config.wl_lr is None:
            sizes = (netlist.movable_widths + netlist.movable_heights) / 2.0
            self.wl_lr = 0.01 * float(sizes.mean()) if sizes.size else 0.0
        else:
            self.wl_lr = self.config.wl_lr

        order = netlist.movable_ids
        self.order = order[::-1] if self.config.pair_order == "descending" else order

    def _partner(self, placement: Placement, cell_id: int) -> Optional[int]:
        """Lowest-id movable cell strictly overlapping cell_id"""
        netlist = self.netlist
        m = netlist.movable_index[cell_id]
        adx = np.abs(placement.x - placement.x[m])
        ady = np.abs(placement.y - placement.y[m])
        w_ij = (netlist.movable_widths + netlist.widths[cell_id]) / 2.0
        h_ij = (netlist.movable_heights + netlist.heights[cell_id]) / 2.0
        hits = _strictly_overlapping(adx, ady, w_ij, h_ij)
        hits[m] = False
        found = np.flatnonzero(hits)
        return int(netlist.movable_ids[found[0]]) if found.size else None

    def has_overlap(self, placement: Placement) -> bool:
        return any(self._partner(placement, int(c)) is not None for c in self.netlist.movable_ids)

    def sweep(self, placement: Placement, wl_lr: float) -> Placement:
        netlist = self.netlist
        placement = placement.copy()

        if wl_lr > 0 and netlist.n_nets:
            grad = hpwl(netlist, placement)
            placement.x -= wl_lr * grad.grad_x
            placement.y -= wl_lr * grad.grad_y

        index = netlist.movable_index
        for cell_id in self.order:
            cell_id = int(cell_id)
            partner = self._partner(placement, cell_id)
            if partner is None:
                continue
            step_x, step_y = deoverlap_step(netlist, placement, cell_id, partner)
            if self.config.symmetric:
                mj = index[partner]
                placement.x[mj] -= step_x / 2.0
                placement.y[mj] -= step_y / 2.0
                step_x, step_y = step_x / 2.0, step_y / 2.0
            m = index[cell_id]
            placement.x[m] += step_x
            placement.y[m] += step_y

        # boundary_snap for every cell at once; assigning the bound avoids rounding
        w_half = netlist.movable_widths / 2.0
        h_half = netlist.movable_heights / 2.0
        placement.x = np.clip(placement.x, w_half, self.region.width - w_half)
        placement.y = np.clip(placement.y, h_half, self.region.height - h_half)
        return placement

    def in_bounds(self, placement: Placement) -> bool:
        w_half = self.netlist.movable_widths / 2.0
        h_half = self.netlist.movable_heights / 2.0
        return bool(
            np.all(placement.x >= w_half) and np.all(placement.x <= self.region.width - w_half)
            and np.all(placement.y >= h_half) and np.all(placement.y <= self.region.height - h_half)
        )

    def run(self, placement: Placement) -> Tuple[Placement, LegalizeReport]:
        netlist = self.netlist
        placement.check_dimension(netlist)
        initial_hpwl = hpwl(netlist, placement).value

        sweeps = 0
        for _ in range(self.config.rounds):
            placement = self.sweep(placement, self.wl_lr)
            sweeps += 1

        extra = 0
        while self.has_overlap(placement) and extra < self.config.sweep_cap:
            placement = self.sweep(placement, 0.0)
            extra += 1
        sweeps += extra

        pairs = candidate_pairs(build_grid(netlist, placement, region=self.region))
        overlap = exact_overlap_area(netlist, placement, pairs)
        residual = self.has_overlap(placement)
        inside = self.in_bounds(placement)
        final_hpwl = hpwl(netlist, placement).value

        if residual or not inside:
            message = (
                f"Legalization failed after {sweeps} sweeps: residual overlap {overlap:.6g}, "
                f"in_bounds={inside}"
            )
            logger.warning(message)
        else:
            message = f"Legal after {sweeps} sweeps ({extra} overlap-only)"
            logger.info(f"{message}; hpwl {initial_hpwl:.1f} -> {final_hpwl:.1f}")

        report = LegalizeReport(
            initial_hpwl=initial_hpwl,
            hpwl=final_hpwl,
            overlap=overlap,
            sweeps=sweeps,
            in_bounds=inside,
            success=not residual and inside,
            message=message,
        )
        return placement, report


def legalize(netlist: Netlist, region: Region, placement: Placement,
             config: Optional[LegalizeConfig] = None) -> Tuple[Placement, LegalizeReport]:
    """
    Remove all overlaps and boundary violations.

    Runs `rounds` sweeps of {HPWL descent step, de-overlap scan, boundary snap},
    then overlap-only sweeps until no pair overlaps or sweep_cap is reached.
    A failure is reported through the returned report, never raised.
    """
    return Legalizer(netlist, region, config).run(placement)
