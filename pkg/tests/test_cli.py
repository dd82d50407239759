import pytest

from placer.bookshelf import load_placement, parse_bundle
from placer.harness import read_reports_csv
from placer.harness.cli import build_parser, main, parse_synthetic
from placer.netlist import Region

FAST = ["--iter-max", "3"]


def test_run_synthetic_writes_outputs(tmp_path):
    csv_path = tmp_path / "run.csv"
    svg_path = tmp_path / "run.svg"
    code = main(["run", "--synthetic", "10:12:4", "--region", "100x100", *FAST,
                 "--out-csv", str(csv_path), "--out-svg", str(svg_path)])
    assert code == 0
    (report,) = read_reports_csv(csv_path)
    assert report.circuit == "synthetic10"
    assert report.method == "rbsm"
    assert report.legal is True
    assert svg_path.read_text().count("<rect") == 11


@pytest.mark.parametrize("method", ["gd", "adam"])
def test_run_other_methods(tmp_path, method):
    code = main(["run", "--synthetic", "6:8", "--region", "80x80", "--method", method, *FAST, "--no-legalize",
                 "--out-csv", str(tmp_path / "r.csv")])
    assert code == 0
    (report,) = read_reports_csv(tmp_path / "r.csv")
    assert report.lhpwl is None and report.legal is None


def test_run_with_config_file(tmp_path):
    config = tmp_path / "rbsm.env"
    config.write_text("ITER_MAX=2\nINNER_STEPS=2\n")
    assert main(["run", "--synthetic", "5:5", "--region", "60x60", "--config", str(config), "--no-legalize"]) == 0


def test_unknown_config_key_is_a_usage_error(tmp_path):
    config = tmp_path / "rbsm.env"
    config.write_text("SPEED=fast\n")
    assert main(["run", "--synthetic", "5:5", "--config", str(config)]) == 2


def test_missing_benchmark_is_a_usage_error(tmp_path):
    assert main(["run", "--circuit", "n10", "--data-folder", str(tmp_path)]) == 2
    assert main(["bench", "--circuits", "n10", "--data-folder", str(tmp_path), "--seeds", "1"]) == 2


def test_bad_region_is_a_usage_error():
    assert main(["run", "--synthetic", "5:5", "--region", "big"]) == 2


def test_needs_an_instance():
    assert main(["run"]) == 2


def test_argument_errors_exit_with_usage(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run", "--method", "sgd"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main([])


def test_parse_synthetic():
    spec = parse_synthetic("20:30:5", seed=4)
    assert (spec.n_cells, spec.n_nets, spec.n_terminals, spec.seed) == (20, 30, 5, 4)
    with pytest.raises(ValueError):
        parse_synthetic("20", seed=0)


def test_ablation_flags_reach_the_config():
    args = build_parser().parse_args(["run", "--synthetic", "5:5", "--fix-gamma", "--no-perturb"])
    from placer.harness.cli import optimizer_config

    config = optimizer_config(args, seed=1)
    assert config.fixed_gamma == 10000.0 and not config.adaptive_gamma
    assert config.perturb is False
    assert config.seed == 1


def test_legalize_mini_bundle(mini_bundle, tmp_path):
    out_pl = tmp_path / "legal.pl"
    code = main(["legalize", "--blocks", str(mini_bundle.blocks_path), "--nets", str(mini_bundle.nets_path),
                 "--pl", str(mini_bundle.pl_path), "--region", "100x100", "--out-pl", str(out_pl),
                 "--out-svg", str(tmp_path / "legal.svg")])
    assert code == 0
    netlist, _ = parse_bundle(mini_bundle, Region(100.0, 100.0))
    placement = load_placement(out_pl, netlist)
    assert len(placement) == 3
    assert (tmp_path / "legal.svg").is_file()


def test_render_mini_bundle(mini_bundle, tmp_path):
    out = tmp_path / "mini.svg"
    code = main(["render", "--circuit", "mini", "--data-folder", str(mini_bundle.pl_path.parent),
                 "--region", "100x100", "--out-svg", str(out)])
    assert code == 0
    assert out.read_text().count("<circle") == 2


def test_render_synthetic_needs_placement(tmp_path):
    assert main(["render", "--synthetic", "5:5", "--out-svg", str(tmp_path / "x.svg")]) == 2
