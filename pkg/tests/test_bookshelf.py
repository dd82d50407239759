import pytest

from placer.bookshelf import BenchmarkBundle, load_placement, parse_bundle, write_placement
from placer.errors import BenchmarkNotFoundError, BookshelfParseError
from placer.harness import oracle_hpwl
from placer.harness.reference import CIRCUIT_STATS
from placer.netlist import CellKind, Region
from placer.objective import hpwl

from conftest import BLOCKS, GSRC_FOLDER, NETS, PL, requires_gsrc

REGION = Region(100.0, 100.0)


class TestParseBundle:
    def test_mini_bundle_structure(self, mini_bundle):
        netlist, region = parse_bundle(mini_bundle, REGION)
        assert region == REGION
        assert netlist.n_movable == 3
        assert netlist.n_terminals == 2
        assert netlist.n_nets == 3
        assert netlist.pin_count == 7
        assert [c.name for c in netlist.cells] == ["bk1", "bk2", "bk3", "p1", "p2"]

    def test_block_sizes_from_vertices(self, mini_bundle):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        assert (netlist.cells[0].width, netlist.cells[0].height) == (10.0, 20.0)
        assert (netlist.cells[1].width, netlist.cells[1].height) == (30.0, 5.0)

    def test_terminals_are_fixed(self, mini_bundle):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        p1 = netlist.cells[3]
        assert p1.kind == CellKind.TERMINAL
        assert p1.fixed_pos == (0.0, 45.0)

    def test_net_membership(self, mini_bundle):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        assert [net.members for net in netlist.nets] == [(0, 1, 3), (1, 2), (2, 4)]

    def test_missing_files_listed(self, tmp_path):
        bundle = BenchmarkBundle.from_directory(tmp_path, "n10")
        with pytest.raises(BenchmarkNotFoundError) as info:
            parse_bundle(bundle, REGION)
        assert len(info.value.missing) == 3
        assert "n10.blocks" in str(info.value)

    def test_truncated_nets_reports_line(self, mini_bundle):
        mini_bundle.nets_path.write_text(NETS.rsplit("p2 B", 1)[0])
        with pytest.raises(BookshelfParseError) as info:
            parse_bundle(mini_bundle, REGION)
        assert info.value.line_no is not None
        assert "mini.nets" in str(info.value)

    def test_malformed_vertex_reports_line(self, mini_bundle):
        mini_bundle.blocks_path.write_text(BLOCKS.replace("(10, 20) (10, 0)", "(1e, 20) (10, 0)"))
        with pytest.raises(BookshelfParseError, match="bk1") as info:
            parse_bundle(mini_bundle, REGION)
        assert info.value.line_no == 7
        assert "mini.blocks:7" in str(info.value)

    def test_unknown_pin_name(self, mini_bundle):
        mini_bundle.nets_path.write_text(NETS.replace("bk3 B\np2 B", "bk9 B\np2 B"))
        with pytest.raises(BookshelfParseError, match="unknown block 'bk9'"):
            parse_bundle(mini_bundle, REGION)

    def test_block_count_mismatch(self, mini_bundle):
        mini_bundle.blocks_path.write_text(BLOCKS.replace("NumHardRectilinearBlocks : 3", "NumHardRectilinearBlocks : 4"))
        with pytest.raises(BookshelfParseError, match="declares 4 blocks"):
            parse_bundle(mini_bundle, REGION)

    def test_unknown_name_in_pl(self, mini_bundle):
        mini_bundle.pl_path.write_text(PL + "ghost 1 1\n")
        with pytest.raises(BookshelfParseError, match="ghost"):
            parse_bundle(mini_bundle, REGION)

    def test_block_larger_than_die(self, mini_bundle):
        with pytest.raises(ValueError):
            parse_bundle(mini_bundle, Region(20.0, 100.0))


class TestPlacementFiles:
    def test_load_converts_corners_to_centers(self, mini_bundle):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        placement = load_placement(mini_bundle.pl_path, netlist)
        assert placement.x.tolist() == [15.0, 55.0, 4.0]
        assert placement.y.tolist() == [20.0, 52.5, 4.0]

    def test_reference_hpwl(self, mini_bundle):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        placement = load_placement(mini_bundle.pl_path, netlist)
        assert hpwl(netlist, placement).value == pytest.approx(339.0)
        assert oracle_hpwl(netlist, placement) == pytest.approx(339.0)

    def test_write_then_load(self, mini_bundle, tmp_path):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        placement = load_placement(mini_bundle.pl_path, netlist)
        placement.x[0] = 33.25
        out = tmp_path / "out.pl"
        write_placement(netlist, placement, out)
        assert load_placement(out, netlist) == placement

    def test_write_to_unwritable_path(self, mini_bundle, tmp_path):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        placement = load_placement(mini_bundle.pl_path, netlist)
        target = tmp_path / "missing" / "out.pl"
        with pytest.raises(OSError, match="out.pl"):
            write_placement(netlist, placement, target)
        assert not target.exists()

    def test_missing_block_position(self, mini_bundle, tmp_path):
        netlist, _ = parse_bundle(mini_bundle, REGION)
        partial = tmp_path / "partial.pl"
        partial.write_text("p1 0 45\np2 100 60\n")
        with pytest.raises(BookshelfParseError, match="bk1"):
            load_placement(partial, netlist)


@requires_gsrc
@pytest.mark.parametrize("circuit", list(CIRCUIT_STATS))
def test_gsrc_counts(circuit):
    bundle = BenchmarkBundle.from_directory(GSRC_FOLDER, circuit)
    if not bundle.blocks_path.is_file():
        pytest.skip(f"{circuit} not in {GSRC_FOLDER}")
    netlist, _ = parse_bundle(bundle)
    assert netlist.summary() == CIRCUIT_STATS[circuit]
