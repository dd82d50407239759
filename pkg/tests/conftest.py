from pathlib import Path
from typing import Sequence, Tuple

import numpy as np
import pytest

from placer.config import settings
from placer.netlist import Cell, CellKind, Netlist, Placement, Region, build_netlist, generate_synthetic

GSRC_FOLDER = Path(settings.DATA_FOLDER)

requires_gsrc = pytest.mark.skipif(
    not (GSRC_FOLDER / "n10.blocks").is_file(),
    reason=f"GSRC benchmarks not found in {GSRC_FOLDER}",
)


def make_netlist(sizes: Sequence[Tuple[float, float]], nets, terminals: Sequence[Tuple[float, float]] = ()) -> Netlist:
    """Movable cells from (w, h) pairs, then zero-size terminals at the given positions"""
    cells = [Cell(i, float(w), float(h)) for i, (w, h) in enumerate(sizes)]
    for k, pos in enumerate(terminals):
        cells.append(Cell(len(cells), 0.0, 0.0, kind=CellKind.TERMINAL, fixed_pos=pos, name=f"p{k + 1}"))
    return build_netlist(cells, nets)


def random_placement(netlist: Netlist, region: Region, rng: np.random.Generator) -> Placement:
    return Placement(
        rng.uniform(0.0, region.width, netlist.n_movable),
        rng.uniform(0.0, region.height, netlist.n_movable),
    )


@pytest.fixture
def region():
    return Region(100.0, 100.0)


@pytest.fixture
def synthetic(region):
    return generate_synthetic(seed=7, n_cells=12, n_nets=16, region=region, n_terminals=4)


@pytest.fixture
def two_cells():
    """Two unit squares joined by one net"""
    return make_netlist([(1.0, 1.0), (1.0, 1.0)], [[0, 1]])


BLOCKS = """UCSC blocks 1.0
# mini bundle
NumSoftRectangularBlocks : 0
NumHardRectilinearBlocks : 3
NumTerminals : 2

bk1 hardrectilinear 4 (0, 0) (0, 20) (10, 20) (10, 0)
bk2 hardrectilinear 4 (0, 0) (0, 5) (30, 5) (30, 0)
bk3 hardrectilinear 4 (0, 0) (0, 8) (8, 8) (8, 0)

p1 terminal
p2 terminal
"""

NETS = """UCLA nets 1.0

NumNets : 3
NumPins : 7
NetDegree : 3
bk1 B : %0.0 %0.0
bk2 B : %0.0 %0.0
p1 B
NetDegree : 2
bk2 B
bk3 B
NetDegree : 2
bk3 B
p2 B
"""

PL = """UCLA pl 1.0

bk1 10 10
bk2 40 50
bk3 0 0
p1 0 45
p2 100 60
"""


@pytest.fixture
def mini_bundle(tmp_path):
    from placer.bookshelf import BenchmarkBundle

    (tmp_path / "mini.blocks").write_text(BLOCKS)
    (tmp_path / "mini.nets").write_text(NETS)
    (tmp_path / "mini.pl").write_text(PL)
    return BenchmarkBundle.from_directory(tmp_path, "mini")
