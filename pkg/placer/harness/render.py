import logging
from pathlib import Path
from typing import Union

import svgwrite

from ..netlist import Netlist, Placement, Region
from ..legalize.legalizer import OVERLAP_TOLERANCE
from .oracles import overlapping_cells

logger = logging.getLogger(__name__)

CELL_FILL = "rgb(160,196,255)"
OVERLAP_FILL = "rgb(255,120,120)"
TERMINAL_FILL = "rgb(60,60,60)"


def _r(value: float) -> float:
    # fixed precision keeps the output byte-stable
    return round(float(value), 4)


def render_svg(netlist: Netlist, region: Region, placement: Placement, path: Union[str, Path]) -> Path:
    """
    Draw the die outline, every movable cell as a labelled rectangle (red when it
    overlaps another cell) and terminals as dots. The y axis points up.
    """
    path = Path(path)
    placement.check_dimension(netlist)
    tinted = overlapping_cells(netlist, placement, rel_tol=OVERLAP_TOLERANCE)
    x_all, y_all = netlist.full_coordinates(placement)

    # viewBox covers the die and every terminal
    margin = 0.02 * max(region.width, region.height)
    lo_x, hi_x, lo_y, hi_y = 0.0, region.width, 0.0, region.height
    for cid in netlist.terminal_ids.tolist():
        lo_x, hi_x = min(lo_x, x_all[cid]), max(hi_x, x_all[cid])
        lo_y, hi_y = min(lo_y, y_all[cid]), max(hi_y, y_all[cid])
    view_w = hi_x - lo_x + 2 * margin
    view_h = hi_y - lo_y + 2 * margin

    def flip(y: float) -> float:
        return region.height - y

    dr = svgwrite.Drawing(
        str(path), profile="tiny", debug=False,
        size=(_r(view_w), _r(view_h)),
    )
    dr.viewbox(_r(lo_x - margin), _r(flip(hi_y) - margin), _r(view_w), _r(view_h))
    stroke = _r(max(region.width, region.height) / 800.0)
    font = _r(max(region.width, region.height) / 80.0)

    dr.add(dr.rect(insert=(0, 0), size=(_r(region.width), _r(region.height)),
                   stroke="black", fill="none", stroke_width=stroke))

    for k, cid in enumerate(netlist.movable_ids.tolist()):
        cell = netlist.cells[cid]
        left = placement.x[k] - cell.width / 2.0
        top = flip(placement.y[k] + cell.height / 2.0)
        fill = OVERLAP_FILL if cid in tinted else CELL_FILL
        dr.add(dr.rect(insert=(_r(left), _r(top)), size=(_r(cell.width), _r(cell.height)),
                       stroke="gray", fill=fill, stroke_width=stroke))
        dr.add(dr.text(str(cid), insert=(_r(placement.x[k]), _r(flip(placement.y[k]))),
                       font_size=font, text_anchor="middle"))

    radius = _r(max(region.width, region.height) / 400.0)
    for cid in netlist.terminal_ids.tolist():
        dr.add(dr.circle(center=(_r(x_all[cid]), _r(flip(y_all[cid]))), r=radius, fill=TERMINAL_FILL))

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        dr.save()
    except OSError as e:
        raise OSError(f"Cannot write SVG to {path}: {e}") from e
    logger.info(f"Rendered {netlist.n_movable} cells ({len(tinted)} overlapping) to {path}")
    return path
