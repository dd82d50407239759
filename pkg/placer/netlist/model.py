"""
Circuit domain model: cells, nets, the die region and placements.

A netlist is a hypergraph whose vertices are cells (movable rectangles or fixed
terminal pads) and whose hyperedges are nets. Cells are identified by a dense
integer id; a placement only carries coordinates for the movable cells, in
ascending cell-id order.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import NetlistError

logger = logging.getLogger(__name__)


class CellKind(str, Enum):
    MOVABLE = "movable"
    TERMINAL = "terminal"


@dataclass(frozen=True)
class Cell:
    """A rectangular block, or a fixed pad when kind is TERMINAL"""

    id: int
    width: float
    height: float
    kind: CellKind = CellKind.MOVABLE
    fixed_pos: Optional[Tuple[float, float]] = None
    name: str = ""

    def __post_init__(self):
        if not self.name:
            object.__setattr__(self, "name", f"c{self.id}")
        if not (np.isfinite(self.width) and np.isfinite(self.height)):
            raise NetlistError(f"Cell {self.name}: non-finite size ({self.width}, {self.height})")

        if self.kind == CellKind.MOVABLE:
            if self.width <= 0 or self.height <= 0:
                raise NetlistError(
                    f"Movable cell {self.name} must have positive size, got {self.width}x{self.height}"
                )
            if self.fixed_pos is not None:
                raise NetlistError(f"Movable cell {self.name} cannot carry a fixed position")
        else:
            if self.width < 0 or self.height < 0:
                raise NetlistError(f"Terminal {self.name} has negative size")
            if self.fixed_pos is None:
                raise NetlistError(f"Terminal {self.name} requires a fixed position")
            fx, fy = self.fixed_pos
            if not (np.isfinite(fx) and np.isfinite(fy)):
                raise NetlistError(f"Terminal {self.name} has a non-finite position {self.fixed_pos}")
            object.__setattr__(self, "fixed_pos", (float(fx), float(fy)))

    @property
    def is_terminal(self) -> bool:
        return self.kind == CellKind.TERMINAL


@dataclass(frozen=True)
class Net:
    id: int
    members: Tuple[int, ...]

    def __post_init__(self):
        if len(self.members) < 1:
            raise NetlistError(f"Net {self.id} has no members")

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Region:
    """The die (0,0)-(W,H)"""

    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise NetlistError(f"Region must have positive size, got {self.width}x{self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    def validate_for(self, netlist: "Netlist") -> None:
        """Every movable cell must fit inside the die"""
        too_wide = netlist.movable_widths > self.width
        too_tall = netlist.movable_heights > self.height
        bad = np.flatnonzero(too_wide | too_tall)
        if bad.size:
            cell = netlist.cells[int(netlist.movable_ids[bad[0]])]
            raise NetlistError(
                f"Cell {cell.name} ({cell.width}x{cell.height}) does not fit in the "
                f"{self.width}x{self.height} region ({bad.size} oversized cells)"
            )


class Placement:
    """Center coordinates of the movable cells"""

    def __init__(self, x: Iterable[float], y: Iterable[float]):
        self.x = np.array(x, dtype=np.float64).reshape(-1)
        self.y = np.array(y, dtype=np.float64).reshape(-1)
        if self.x.shape != self.y.shape:
            raise ValueError(f"Placement x/y length mismatch: {self.x.size} vs {self.y.size}")
        if not (np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.y))):
            raise ValueError("Placement contains NaN or infinite coordinates")

    def __len__(self) -> int:
        return int(self.x.size)

    def __repr__(self) -> str:
        return f"Placement(n={len(self)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    def copy(self) -> "Placement":
        return Placement(self.x, self.y)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "Placement":
        vector = np.asarray(vector, dtype=np.float64)
        if vector.size % 2:
            raise ValueError(f"Placement vector must have even length, got {vector.size}")
        half = vector.size // 2
        return cls(vector[:half], vector[half:])

    def check_dimension(self, netlist: "Netlist") -> None:
        if len(self) != netlist.n_movable:
            raise ValueError(
                f"Placement has {len(self)} cells but the netlist has {netlist.n_movable} movable cells"
            )


@dataclass(frozen=True)
class Netlist:
    """Hypergraph of cells and nets; build it with build_netlist()"""

    cells: Tuple[Cell, ...]
    nets: Tuple[Net, ...]
    incidence: Tuple[Tuple[int, ...], ...]

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def n_nets(self) -> int:
        return len(self.nets)

    @cached_property
    def pin_count(self) -> int:
        return sum(len(net) for net in self.nets)

    @cached_property
    def movable_ids(self) -> np.ndarray:
        return np.array([c.id for c in self.cells if not c.is_terminal], dtype=np.int64)

    @cached_property
    def terminal_ids(self) -> np.ndarray:
        return np.array([c.id for c in self.cells if c.is_terminal], dtype=np.int64)

    @property
    def n_movable(self) -> int:
        return int(self.movable_ids.size)

    @property
    def n_terminals(self) -> int:
        return int(self.terminal_ids.size)

    @cached_property
    def movable_index(self) -> np.ndarray:
        """cell id -> position in a Placement, -1 for terminals"""
        index = np.full(self.n_cells, -1, dtype=np.int64)
        index[self.movable_ids] = np.arange(self.n_movable)
        return index

    @cached_property
    def widths(self) -> np.ndarray:
        return np.array([c.width for c in self.cells], dtype=np.float64)

    @cached_property
    def heights(self) -> np.ndarray:
        return np.array([c.height for c in self.cells], dtype=np.float64)

    @cached_property
    def movable_widths(self) -> np.ndarray:
        return self.widths[self.movable_ids]

    @cached_property
    def movable_heights(self) -> np.ndarray:
        return self.heights[self.movable_ids]

    @cached_property
    def total_movable_area(self) -> float:
        return float(np.sum(self.movable_widths * self.movable_heights))

    @cached_property
    def name_to_id(self) -> dict:
        return {c.name: c.id for c in self.cells}

    @cached_property
    def _fixed_coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        x = np.zeros(self.n_cells, dtype=np.float64)
        y = np.zeros(self.n_cells, dtype=np.float64)
        for cid in self.terminal_ids:
            x[cid], y[cid] = self.cells[cid].fixed_pos
        return x, y

    def full_coordinates(self, placement: Placement) -> Tuple[np.ndarray, np.ndarray]:
        """Coordinates of every cell: movable from the placement, terminals fixed"""
        placement.check_dimension(self)
        fixed_x, fixed_y = self._fixed_coordinates
        x = fixed_x.copy()
        y = fixed_y.copy()
        x[self.movable_ids] = placement.x
        y[self.movable_ids] = placement.y
        return x, y

    # Flat (CSR-style) view of net membership used by vectorized evaluators
    @cached_property
    def pin_cells(self) -> np.ndarray:
        if not self.nets:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([np.asarray(n.members, dtype=np.int64) for n in self.nets])

    @cached_property
    def net_sizes(self) -> np.ndarray:
        return np.array([len(n) for n in self.nets], dtype=np.int64)

    @cached_property
    def net_offsets(self) -> np.ndarray:
        offsets = np.zeros(self.n_nets + 1, dtype=np.int64)
        np.cumsum(self.net_sizes, out=offsets[1:])
        return offsets

    @cached_property
    def pin_net(self) -> np.ndarray:
        """net id of every entry of pin_cells"""
        return np.repeat(np.arange(self.n_nets, dtype=np.int64), self.net_sizes)

    def cells_of_nets(self, net_ids: Iterable[int]) -> np.ndarray:
        found = set()
        for nid in net_ids:
            found.update(self.nets[nid].members)
        return np.array(sorted(found), dtype=np.int64)

    def summary(self) -> dict:
        return {
            "modules": self.n_movable,
            "terminals": self.n_terminals,
            "nets": self.n_nets,
            "pins": self.pin_count,
        }


NetSpec = Union[Net, Sequence[int]]


def build_netlist(cells: Sequence[Cell], nets: Sequence[NetSpec]) -> Netlist:
    """
    Assemble a netlist, deduplicating net members and building incidence lists.

    Args:
        cells: cells with ids 0..n-1 in order
        nets: Net objects or plain member-id sequences; net ids are reassigned
            densely in the given order

    Returns:
        Netlist with incidence[c] = ids of the nets containing cell c
    """
    cells = tuple(cells)
    for position, cell in enumerate(cells):
        if cell.id != position:
            raise NetlistError(f"Cell ids must be dense and ordered: position {position} holds id {cell.id}")

    n_cells = len(cells)
    built: List[Net] = []
    incidence: List[List[int]] = [[] for _ in range(n_cells)]

    for net_id, spec in enumerate(nets):
        raw = spec.members if isinstance(spec, Net) else tuple(spec)
        for cid in raw:
            if not (0 <= int(cid) < n_cells):
                raise NetlistError(f"Net {net_id} references unknown cell id {cid}")
        # dict preserves first-occurrence order
        members = tuple(dict.fromkeys(int(c) for c in raw))
        if len(members) < len(raw):
            logger.debug(f"Net {net_id}: removed {len(raw) - len(members)} duplicate members")
        built.append(Net(net_id, members))
        for cid in members:
            incidence[cid].append(net_id)

    return Netlist(
        cells=cells,
        nets=tuple(built),
        incidence=tuple(tuple(lst) for lst in incidence),
    )


def net_degrees(netlist: Netlist) -> np.ndarray:
    """
    Degree of every net in the net-adjacency graph: the number of distinct other
    nets sharing at least one cell with it.
    """
    degrees = np.zeros(netlist.n_nets, dtype=np.int64)
    for net in netlist.nets:
        neighbours = set()
        for cid in net.members:
            neighbours.update(netlist.incidence[cid])
        neighbours.discard(net.id)
        degrees[net.id] = len(neighbours)
    return degrees
