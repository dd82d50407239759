"""
Brute-force metric oracles. They share no code with the objective module so
they can check it.
"""

from ..netlist import Netlist, Placement


def _positions(netlist: Netlist, placement: Placement):
    placement.check_dimension(netlist)
    positions = {}
    movable = iter(zip(placement.x.tolist(), placement.y.tolist()))
    for cell in netlist.cells:
        positions[cell.id] = cell.fixed_pos if cell.is_terminal else next(movable)
    return positions


def oracle_hpwl(netlist: Netlist, placement: Placement) -> float:
    """Sum over nets of (max x - min x) + (max y - min y) of member centers"""
    positions = _positions(netlist, placement)
    total = 0.0
    for net in netlist.nets:
        xs = [positions[c][0] for c in net.members]
        ys = [positions[c][1] for c in net.members]
        total += (max(xs) - min(xs)) + (max(ys) - min(ys))
    return total


def oracle_overlap(netlist: Netlist, placement: Placement) -> float:
    """Pairwise rectangle overlap area summed over all movable pairs, O(N^2)"""
    placement.check_dimension(netlist)
    boxes = []
    for k, cid in enumerate(netlist.movable_ids.tolist()):
        cell = netlist.cells[cid]
        boxes.append((float(placement.x[k]), float(placement.y[k]), cell.width, cell.height))

    total = 0.0
    for a in range(len(boxes)):
        xa, ya, wa, ha = boxes[a]
        for b in range(a + 1, len(boxes)):
            xb, yb, wb, hb = boxes[b]
            ox = (wa + wb) / 2.0 - abs(xa - xb)
            oy = (ha + hb) / 2.0 - abs(ya - yb)
            if ox > 0 and oy > 0:
                total += ox * oy
    return total


def overlapping_cells(netlist: Netlist, placement: Placement, rel_tol: float = 0.0) -> set:
    """
    Ids of movable cells overlapping at least one other cell by more than
    rel_tol times the pair's half-sum size on both axes
    """
    placement.check_dimension(netlist)
    ids = netlist.movable_ids.tolist()
    found = set()
    for a in range(len(ids)):
        ca = netlist.cells[ids[a]]
        for b in range(a + 1, len(ids)):
            cb = netlist.cells[ids[b]]
            w_ij = (ca.width + cb.width) / 2.0
            h_ij = (ca.height + cb.height) / 2.0
            ox = w_ij - abs(float(placement.x[a] - placement.x[b]))
            oy = h_ij - abs(float(placement.y[a] - placement.y[b]))
            if ox > rel_tol * w_ij and oy > rel_tol * h_ij:
                found.update((ids[a], ids[b]))
    return found
