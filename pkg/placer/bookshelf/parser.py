"""
Reader for the GSRC Bookshelf floorplanning dialect (.blocks / .nets / .pl).
"""

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..config import settings
from ..errors import BenchmarkNotFoundError, BookshelfParseError
from ..netlist import Cell, CellKind, Netlist, Placement, Region, build_netlist

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

VERTEX_RE = re.compile(r"\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)")
HEADER_PREFIXES = ("UCSC", "UCLA")


@dataclass(frozen=True)
class BenchmarkBundle:
    blocks_path: Path
    nets_path: Path
    pl_path: Path
    circuit_name: str

    @classmethod
    def from_directory(cls, directory: PathLike, circuit_name: str) -> "BenchmarkBundle":
        """Resolve <circuit>.blocks/.nets/.pl inside a directory"""
        base = Path(directory)
        return cls(
            blocks_path=base / f"{circuit_name}.blocks",
            nets_path=base / f"{circuit_name}.nets",
            pl_path=base / f"{circuit_name}.pl",
            circuit_name=circuit_name,
        )

    def missing_files(self) -> List[str]:
        return [str(p) for p in (self.blocks_path, self.nets_path, self.pl_path) if not p.is_file()]

    def require(self) -> None:
        missing = self.missing_files()
        if missing:
            raise BenchmarkNotFoundError(self.circuit_name, missing)


def _content_lines(path: Path) -> Iterator[Tuple[int, str]]:
    """Yield (line number, text) with comments, blanks and the format banner removed"""
    with open(path, "r", encoding="utf-8", errors="replace") as f:
        for line_no, raw in enumerate(f, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text or text.startswith(HEADER_PREFIXES):
                continue
            yield line_no, text


def _header_value(text: str, path: Path, line_no: int) -> int:
    try:
        return int(text.split(":", 1)[1].strip())
    except (IndexError, ValueError):
        raise BookshelfParseError(f"Malformed header '{text}'", str(path), line_no)


def _parse_blocks(path: Path) -> Tuple[List[Tuple[str, float, float]], List[str]]:
    """Return ([(name, width, height)] for hard blocks, [terminal names])"""
    declared: Dict[str, int] = {}
    blocks: List[Tuple[str, float, float]] = []
    terminals: List[str] = []
    last_line = 0

    for line_no, text in _content_lines(path):
        last_line = line_no
        if text.startswith(("NumSoftRectangularBlocks", "NumHardRectilinearBlocks", "NumTerminals")):
            declared[text.split(":", 1)[0].strip()] = _header_value(text, path, line_no)
            continue

        tokens = text.split()
        if len(tokens) < 2:
            raise BookshelfParseError(f"Cannot parse block line '{text}'", str(path), line_no)
        name, kind = tokens[0], tokens[1].lower()

        if kind == "terminal":
            terminals.append(name)
        elif kind == "hardrectilinear":
            try:
                n_vertices = int(tokens[2])
            except (IndexError, ValueError):
                raise BookshelfParseError(f"Block {name}: missing vertex count", str(path), line_no)
            try:
                vertices = [(float(a), float(b)) for a, b in VERTEX_RE.findall(text)]
            except ValueError as exc:
                raise BookshelfParseError(f"Block {name}: bad vertex ({exc})", str(path), line_no) from exc
            if n_vertices < 3 or len(vertices) != n_vertices:
                raise BookshelfParseError(
                    f"Block {name}: declared {n_vertices} vertices, found {len(vertices)}",
                    str(path), line_no,
                )
            xs = [v[0] for v in vertices]
            ys = [v[1] for v in vertices]
            width, height = max(xs) - min(xs), max(ys) - min(ys)
            if width <= 0 or height <= 0:
                raise BookshelfParseError(f"Block {name}: degenerate vertex list", str(path), line_no)
            blocks.append((name, width, height))
        elif kind == "softrectangular":
            raise BookshelfParseError(f"Soft block {name} is not supported", str(path), line_no)
        else:
            raise BookshelfParseError(f"Unknown block type '{tokens[1]}'", str(path), line_no)

    n_soft = declared.get("NumSoftRectangularBlocks", 0)
    n_hard = declared.get("NumHardRectilinearBlocks")
    n_term = declared.get("NumTerminals")
    if n_hard is None or n_term is None:
        raise BookshelfParseError("Missing NumHardRectilinearBlocks/NumTerminals header", str(path), last_line)
    if len(blocks) != n_hard + n_soft:
        raise BookshelfParseError(
            f"Header declares {n_hard + n_soft} blocks but {len(blocks)} were listed", str(path), last_line
        )
    if len(terminals) != n_term:
        raise BookshelfParseError(
            f"Header declares {n_term} terminals but {len(terminals)} were listed", str(path), last_line
        )
    return blocks, terminals


def _parse_nets(path: Path, name_to_id: Dict[str, int]) -> List[List[int]]:
    declared: Dict[str, int] = {}
    nets: List[List[int]] = []
    expected = 0  # pins still owed by the current NetDegree record
    degree_line = 0
    n_pins = 0

    for line_no, text in _content_lines(path):
        if text.startswith(("NumNets", "NumPins")):
            declared[text.split(":", 1)[0].strip()] = _header_value(text, path, line_no)
            continue

        if text.startswith("NetDegree"):
            if expected:
                raise BookshelfParseError(
                    f"Net {len(nets)} (line {degree_line}) ended after "
                    f"{len(nets[-1])} of {len(nets[-1]) + expected} pins",
                    str(path), line_no,
                )
            try:
                expected = int(text.split(":", 1)[1].split()[0])
            except (IndexError, ValueError):
                raise BookshelfParseError(f"Malformed NetDegree record '{text}'", str(path), line_no)
            if expected < 1:
                raise BookshelfParseError(f"NetDegree must be >= 1, got {expected}", str(path), line_no)
            degree_line = line_no
            nets.append([])
            continue

        if not expected:
            raise BookshelfParseError(f"Pin line outside a NetDegree record: '{text}'", str(path), line_no)
        name = text.split()[0]
        if name not in name_to_id:
            raise BookshelfParseError(f"Net {len(nets) - 1} references unknown block '{name}'", str(path), line_no)
        # pin offsets after the direction token are ignored: pins sit at cell centers
        nets[-1].append(name_to_id[name])
        expected -= 1
        n_pins += 1

    if expected:
        raise BookshelfParseError(
            f"File truncated: net {len(nets) - 1} declared at line {degree_line} is missing {expected} pins",
            str(path), degree_line,
        )
    if "NumNets" in declared and declared["NumNets"] != len(nets):
        raise BookshelfParseError(f"Header declares {declared['NumNets']} nets but {len(nets)} were listed", str(path))
    if "NumPins" in declared and declared["NumPins"] != n_pins:
        raise BookshelfParseError(f"Header declares {declared['NumPins']} pins but {n_pins} were listed", str(path))
    return nets


def _parse_pl(path: Path) -> Dict[str, Tuple[float, float, int]]:
    """name -> (x, y, line number) of the lower-left corner"""
    positions: Dict[str, Tuple[float, float, int]] = {}
    for line_no, text in _content_lines(path):
        tokens = text.split()
        if len(tokens) < 3:
            raise BookshelfParseError(f"Expected 'name x y', got '{text}'", str(path), line_no)
        try:
            x, y = float(tokens[1]), float(tokens[2])
        except ValueError:
            raise BookshelfParseError(f"Non-numeric coordinates in '{text}'", str(path), line_no)
        if not (np.isfinite(x) and np.isfinite(y)):
            raise BookshelfParseError(f"Non-finite coordinates in '{text}'", str(path), line_no)
        positions[tokens[0]] = (x, y, line_no)
    return positions


def parse_bundle(bundle: BenchmarkBundle, region: Optional[Region] = None) -> Tuple[Netlist, Region]:
    """
    Parse a GSRC bundle into a Netlist.

    Blocks become movable cells (ids in file order), terminals follow them and
    take their fixed position from the .pl file. The die is not stored in GSRC
    floorplan files, so it comes from the argument or PLACER_REGION.

    Raises:
        BenchmarkNotFoundError: a file of the bundle does not exist
        BookshelfParseError: malformed content, with path and line number
    """
    bundle.require()
    if region is None:
        region = Region(*settings.region_size)

    blocks, terminal_names = _parse_blocks(bundle.blocks_path)
    positions = _parse_pl(bundle.pl_path)

    cells: List[Cell] = []
    for name, width, height in blocks:
        cells.append(Cell(len(cells), width, height, name=name))
    for name in terminal_names:
        if name not in positions:
            raise BookshelfParseError(f"Terminal '{name}' has no position", str(bundle.pl_path))
        x, y, _ = positions[name]
        # terminal coordinates outside the die are accepted verbatim
        cells.append(Cell(len(cells), 0.0, 0.0, kind=CellKind.TERMINAL, fixed_pos=(x, y), name=name))

    name_to_id = {c.name: c.id for c in cells}
    if len(name_to_id) != len(cells):
        raise BookshelfParseError("Duplicate block or terminal names", str(bundle.blocks_path))
    for name, (_, _, line_no) in positions.items():
        if name not in name_to_id:
            raise BookshelfParseError(f"Unknown block '{name}'", str(bundle.pl_path), line_no)

    nets = _parse_nets(bundle.nets_path, name_to_id)
    netlist = build_netlist(cells, nets)
    region.validate_for(netlist)

    logger.info(f"Parsed {bundle.circuit_name}: {netlist.summary()}, region {region.width:g}x{region.height:g}")
    return netlist, region


def load_placement(pl_path: PathLike, netlist: Netlist) -> Placement:
    """
    Read block positions (lower-left corners) from a .pl file as a Placement of
    centers. Every movable cell must be listed.
    """
    path = Path(pl_path)
    positions = _parse_pl(path)
    x = np.empty(netlist.n_movable)
    y = np.empty(netlist.n_movable)
    for k, cid in enumerate(netlist.movable_ids):
        cell = netlist.cells[int(cid)]
        if cell.name not in positions:
            raise BookshelfParseError(f"Block '{cell.name}' has no position", str(path))
        llx, lly, _ = positions[cell.name]
        x[k] = llx + cell.width / 2.0
        y[k] = lly + cell.height / 2.0
    return Placement(x, y)
