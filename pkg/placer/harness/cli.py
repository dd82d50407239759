"""
Command-line entry point: run / bench / legalize / render.
"""

import logging
import sys
import time
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from ..bookshelf import BenchmarkBundle, load_placement, parse_bundle, write_placement
from ..config import parse_region, settings
from ..errors import PlacerError
from ..legalize import LegalizeConfig, legalize
from ..netlist import Netlist, Region, generate_synthetic
from ..optimizer import Method, RbsmConfig, load_config_file, run_method
from .bench import SuiteConfig, SyntheticCircuit, RunTask, all_legal, evaluate, run_benchmark
from .oracles import oracle_hpwl, oracle_overlap
from .reference import GSRC_CIRCUITS
from .render import render_svg
from .reports import write_reports_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _add_instance_options(parser: ArgumentParser) -> None:
    parser.add_argument("--circuit", type=str, help="GSRC circuit name, e.g. n100")
    parser.add_argument("--data-folder", type=str, default=settings.DATA_FOLDER,
                        help="Directory holding <circuit>.blocks/.nets/.pl")
    parser.add_argument("--blocks", type=str, help="Explicit .blocks file")
    parser.add_argument("--nets", type=str, help="Explicit .nets file")
    parser.add_argument("--pl", type=str, help="Explicit .pl file (terminal positions)")
    parser.add_argument("--synthetic", type=str, metavar="CELLS:NETS[:TERMINALS]",
                        help="Use a seeded random instance instead of benchmark files")
    parser.add_argument("--region", type=str, default=settings.REGION, help="Die size WxH")


def _add_optimizer_options(parser: ArgumentParser) -> None:
    parser.add_argument("--config", type=str, help="KEY=VALUE file of optimizer settings")
    parser.add_argument("--iter-max", type=int, dest="iter_max", help="Outer iterations")
    parser.add_argument("--uniform-batch", action="store_true", help="Sample nets uniformly")
    parser.add_argument("--fix-gamma", action="store_true", help="Constant gamma = 10000 instead of adaptive")
    parser.add_argument("--no-mean-force", action="store_true", help="Disable the mean-field pull")
    parser.add_argument("--no-perturb", action="store_true", help="Disable gradient perturbation")


def build_parser(prog: Optional[str] = None) -> ArgumentParser:
    parser = ArgumentParser(prog=prog, description="Stochastic subgradient global placement for GSRC floorplans")
    parser.add_argument("--log-level", type=str, default=settings.LOG_LEVEL, help="Logging level")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Place one circuit with one method")
    _add_instance_options(run)
    _add_optimizer_options(run)
    run.add_argument("--method", type=str, choices=[m.value for m in Method], default=Method.RBSM.value)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--no-legalize", action="store_true", help="Skip legalization")
    run.add_argument("--out-csv", type=str, help="Write the run report as CSV")
    run.add_argument("--out-svg", type=str, help="Write an SVG of the final placement")
    run.add_argument("--out-pl", type=str, help="Write the final placement as a .pl file")

    bench = sub.add_parser("bench", help="Run the benchmark suite")
    _add_optimizer_options(bench)
    bench.add_argument("--circuits", type=str, nargs="+", default=list(GSRC_CIRCUITS))
    bench.add_argument("--methods", type=str, nargs="+", choices=[m.value for m in Method],
                       default=[m.value for m in Method])
    bench.add_argument("--seeds", type=int, default=settings.SEEDS, help="Number of seeds (0..n-1)")
    bench.add_argument("--ablation-circuits", type=str, nargs="*", default=[])
    bench.add_argument("--data-folder", type=str, default=settings.DATA_FOLDER)
    bench.add_argument("--region", type=str, default=settings.REGION)
    bench.add_argument("--workers", type=int, default=settings.WORKERS)
    bench.add_argument("--no-legalize", action="store_true")
    bench.add_argument("--omit-time", action="store_true", help="Write time_s as 0 so CSVs diff cleanly")
    bench.add_argument("--out-csv", type=str, default=str(Path(settings.OUTPUT_FOLDER) / "results.csv"))
    bench.add_argument("--out-ablation-csv", type=str,
                       default=str(Path(settings.OUTPUT_FOLDER) / "ablation.csv"))

    leg = sub.add_parser("legalize", help="Legalize a placement file")
    _add_instance_options(leg)
    leg.add_argument("--placement", type=str, help="Placement to legalize (defaults to the bundle .pl)")
    leg.add_argument("--rounds", type=int, default=10)
    leg.add_argument("--wl-lr", type=float, dest="wl_lr")
    leg.add_argument("--out-pl", type=str, required=True)
    leg.add_argument("--out-svg", type=str)

    render = sub.add_parser("render", help="Draw a placement as SVG")
    _add_instance_options(render)
    render.add_argument("--placement", type=str, help="Placement to draw (defaults to the bundle .pl)")
    render.add_argument("--out-svg", type=str, required=True)
    return parser


def parse_synthetic(text: str, seed: int) -> SyntheticCircuit:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"Invalid --synthetic '{text}'. Expected CELLS:NETS[:TERMINALS]")
    counts = [int(p) for p in parts]
    return SyntheticCircuit(
        name=f"synthetic{counts[0]}", n_cells=counts[0], n_nets=counts[1],
        n_terminals=counts[2] if len(counts) == 3 else 0, seed=seed,
    )


def resolve_bundle(args: Namespace) -> BenchmarkBundle:
    if args.blocks or args.nets or args.pl:
        if not (args.blocks and args.nets and args.pl):
            raise ValueError("--blocks, --nets and --pl must be given together")
        name = args.circuit or Path(args.blocks).stem
        return BenchmarkBundle(Path(args.blocks), Path(args.nets), Path(args.pl), name)
    if not args.circuit:
        raise ValueError("Give --circuit, --synthetic or --blocks/--nets/--pl")
    return BenchmarkBundle.from_directory(args.data_folder, args.circuit)


def load_instance(args: Namespace, seed: int = 0) -> Tuple[str, Netlist, Region, Optional[BenchmarkBundle]]:
    region = Region(*parse_region(args.region))
    if args.synthetic:
        spec = parse_synthetic(args.synthetic, seed)
        netlist, region = generate_synthetic(spec.seed, spec.n_cells, spec.n_nets, region,
                                             (spec.size_low, spec.size_high), spec.n_terminals)
        return spec.name, netlist, region, None
    bundle = resolve_bundle(args)
    bundle.require()
    netlist, region = parse_bundle(bundle, region)
    return bundle.circuit_name, netlist, region, bundle


def optimizer_config(args: Namespace, seed: Optional[int] = None) -> RbsmConfig:
    overrides = {"seed": seed, "iter_max": args.iter_max}
    if args.uniform_batch:
        overrides["uniform_batch"] = True
    if args.fix_gamma:
        overrides.update(adaptive_gamma=False, fixed_gamma=10000.0)
    if args.no_mean_force:
        overrides["alpha"] = 0.0
    if args.no_perturb:
        overrides["perturb"] = False
    if args.config:
        return load_config_file(args.config, **overrides)
    return RbsmConfig(**{k: v for k, v in overrides.items() if v is not None})


def cmd_run(args: Namespace) -> int:
    name, netlist, region, _ = load_instance(args, args.seed)
    method = Method(args.method)
    config = optimizer_config(args, args.seed)
    logger.info(f"Loaded {name}: {netlist.summary()}")

    start = time.perf_counter()
    placement, trace = run_method(method, netlist, region, config)
    elapsed = time.perf_counter() - start

    task = RunTask(
        circuit=name, method=method, seed=args.seed, optimizer=config,
        legalize=not args.no_legalize, legalizer=LegalizeConfig(),
        data_folder=args.data_folder, region=(region.width, region.height),
    )
    report, legal_placement = evaluate(netlist, region, placement, task, elapsed)
    final = legal_placement if legal_placement is not None else placement
    logger.info(
        f"{name}/{method.value}: hpwl={report.hpwl:.1f} overlap={report.overlap:.2f} "
        f"lhpwl={report.lhpwl} legal={report.legal} time={elapsed:.2f}s iterations={len(trace)}"
    )

    if args.out_csv:
        write_reports_csv([report], args.out_csv)
    if args.out_svg:
        render_svg(netlist, region, final, args.out_svg)
    if args.out_pl:
        write_placement(netlist, final, args.out_pl)
    return EXIT_OK if report.legal is not False else EXIT_FAILED


def cmd_bench(args: Namespace) -> int:
    suite = SuiteConfig(
        circuits=args.circuits,
        methods=[Method(m) for m in args.methods],
        seeds=list(range(args.seeds)),
        data_folder=args.data_folder,
        region=parse_region(args.region),
        optimizer=optimizer_config(args),
        legalize=not args.no_legalize,
        ablation_circuits=args.ablation_circuits,
        workers=args.workers,
        record_time=not args.omit_time,
        out_csv=args.out_csv,
        out_ablation_csv=args.out_ablation_csv,
    )
    reports, ablations = run_benchmark(suite)
    return EXIT_OK if all_legal(reports) and all_legal(ablations) else EXIT_FAILED


def _input_placement(args: Namespace, netlist: Netlist, bundle: Optional[BenchmarkBundle]):
    if args.placement:
        return load_placement(args.placement, netlist)
    if bundle is None:
        raise ValueError("--placement is required with --synthetic")
    return load_placement(bundle.pl_path, netlist)


def cmd_legalize(args: Namespace) -> int:
    _, netlist, region, bundle = load_instance(args)
    placement = _input_placement(args, netlist, bundle)
    config = LegalizeConfig(rounds=args.rounds, wl_lr=args.wl_lr)
    legal, report = legalize(netlist, region, placement, config)
    logger.info(
        f"hpwl {oracle_hpwl(netlist, placement):.1f} -> {oracle_hpwl(netlist, legal):.1f}, "
        f"overlap {oracle_overlap(netlist, legal):.6g}"
    )
    write_placement(netlist, legal, args.out_pl)
    if args.out_svg:
        render_svg(netlist, region, legal, args.out_svg)
    return EXIT_OK if report.success else EXIT_FAILED


def cmd_render(args: Namespace) -> int:
    _, netlist, region, bundle = load_instance(args)
    placement = _input_placement(args, netlist, bundle)
    render_svg(netlist, region, placement, args.out_svg)
    return EXIT_OK


COMMANDS = {"run": cmd_run, "bench": cmd_bench, "legalize": cmd_legalize, "render": cmd_render}


def main(argv: Optional[List[str]] = None, prog: Optional[str] = None) -> int:
    args = build_parser(prog).parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (PlacerError, ValidationError, ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
