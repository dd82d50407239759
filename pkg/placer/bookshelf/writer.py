import logging
from pathlib import Path
from typing import Union

from ..netlist import Netlist, Placement

logger = logging.getLogger(__name__)


def write_placement(netlist: Netlist, placement: Placement, path: Union[str, Path]) -> None:
    """
    Write a .pl file: one 'name x y' line per cell, x/y being the lower-left
    corner (center minus half size). Terminals are written at their fixed position.
    """
    placement.check_dimension(netlist)
    path = Path(path)

    lines = ["UCLA pl 1.0", f"# {netlist.n_movable} blocks, {netlist.n_terminals} terminals", ""]
    for k, cid in enumerate(netlist.movable_ids):
        cell = netlist.cells[int(cid)]
        llx = placement.x[k] - cell.width / 2.0
        lly = placement.y[k] - cell.height / 2.0
        lines.append(f"{cell.name}\t{llx:.17g}\t{lly:.17g}")
    for cid in netlist.terminal_ids:
        cell = netlist.cells[int(cid)]
        fx, fy = cell.fixed_pos
        lines.append(f"{cell.name}\t{fx:.17g}\t{fy:.17g}")

    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write("\n".join(lines) + "\n")
    except OSError as e:
        logger.error(f"Failed to write placement to {path}: {str(e)}")
        raise OSError(f"Cannot write placement to {path}: {e}") from e

    logger.info(f"Wrote placement of {netlist.n_movable} blocks to {path}")
