"""
Seeded synthetic circuits for tests and for runs without benchmark files.
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import GenerationError
from .model import Cell, CellKind, Netlist, Region, build_netlist

logger = logging.getLogger(__name__)

MAX_DENSITY = 0.6
MIN_NET_SIZE = 2
MAX_NET_SIZE = 6


def generate_synthetic(
    seed: int,
    n_cells: int,
    n_nets: int,
    region: Region,
    size_range: Tuple[float, float] = (1.0, 10.0),
    n_terminals: int = 0,
) -> Tuple[Netlist, Region]:
    """
    Generate a random circuit.

    Cell widths and heights are drawn uniformly from size_range, every net joins
    2-6 distinct cells, and optional terminals are spread evenly on the die
    boundary (terminal ids follow the movable ids).

    Raises:
        GenerationError: bad counts, cells larger than the die, or a total cell
            area above 60% of the region.
    """
    if n_cells < 2:
        raise GenerationError(f"n_cells must be >= 2, got {n_cells}")
    if n_nets < 1:
        raise GenerationError(f"n_nets must be >= 1, got {n_nets}")
    if n_terminals < 0:
        raise GenerationError(f"n_terminals must be >= 0, got {n_terminals}")
    low, high = size_range
    if not (0 < low <= high):
        raise GenerationError(f"Invalid size range {size_range}")
    if high > min(region.width, region.height):
        raise GenerationError(f"Cell sizes up to {high} do not fit the {region.width}x{region.height} region")

    rng = np.random.default_rng(seed)
    widths = rng.uniform(low, high, size=n_cells)
    heights = rng.uniform(low, high, size=n_cells)

    cell_area = float(np.sum(widths * heights))
    if cell_area > MAX_DENSITY * region.area:
        raise GenerationError(
            f"Total cell area {cell_area:.1f} exceeds {MAX_DENSITY:.0%} of the region area {region.area:.1f}"
        )

    cells = [Cell(i, float(widths[i]), float(heights[i]), name=f"bk{i + 1}") for i in range(n_cells)]

    # Pads walk the boundary counter-clockwise from the origin
    perimeter = 2.0 * (region.width + region.height)
    for k in range(n_terminals):
        s = perimeter * k / n_terminals
        if s < region.width:
            pos = (s, 0.0)
        elif s < region.width + region.height:
            pos = (region.width, s - region.width)
        elif s < 2 * region.width + region.height:
            pos = (region.width - (s - region.width - region.height), region.height)
        else:
            pos = (0.0, region.height - (s - 2 * region.width - region.height))
        cells.append(
            Cell(n_cells + k, 0.0, 0.0, kind=CellKind.TERMINAL, fixed_pos=pos, name=f"p{k + 1}")
        )

    total = n_cells + n_terminals
    largest = min(MAX_NET_SIZE, total)
    nets = []
    for _ in range(n_nets):
        size = int(rng.integers(MIN_NET_SIZE, largest + 1))
        members = rng.choice(total, size=size, replace=False)
        nets.append([int(m) for m in members])

    netlist = build_netlist(cells, nets)
    logger.debug(f"Generated synthetic circuit seed={seed}: {netlist.summary()}")
    return netlist, region
