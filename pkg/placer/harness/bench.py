"""
Benchmark suite runner: every (circuit, method, seed) run, legalization, oracle
metrics, median rows, GSRC reference rows and ablation sweeps.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..bookshelf import BenchmarkBundle, load_placement, parse_bundle
from ..config import settings
from ..errors import BookshelfParseError
from ..legalize import LegalizeConfig, legalize
from ..netlist import Netlist, Placement, Region, generate_synthetic
from ..optimizer import Method, RbsmConfig, run_method
from .oracles import oracle_hpwl, oracle_overlap
from .reference import compare_ablations, compare_with_published
from .reports import RunReport, median_reports, sort_reports, write_reports_csv

logger = logging.getLogger(__name__)

# label -> RbsmConfig overrides; each row switches off one enhancement
ABLATIONS: Dict[str, Dict[str, object]] = {
    "RBSM": {},
    "Random batch": {"uniform_batch": True},
    "Fix gamma": {"adaptive_gamma": False, "fixed_gamma": 10000.0},
    "No mean force": {"alpha": 0.0},
    "No perturbation": {"perturb": False},
}

# Relative slack (of total movable area) under which the oracle counts as zero overlap
LEGAL_AREA_TOLERANCE = 1e-9


class SyntheticCircuit(BaseModel):
    """Seeded random instance used when no benchmark files are at hand"""

    model_config = ConfigDict(frozen=True)

    name: str
    n_cells: int = Field(ge=2)
    n_nets: int = Field(ge=1)
    n_terminals: int = Field(0, ge=0)
    seed: int = 0
    size_low: float = Field(1.0, gt=0)
    size_high: float = Field(10.0, gt=0)


class SuiteConfig(BaseModel):
    circuits: List[str] = Field(default_factory=list)
    synthetic: List[SyntheticCircuit] = Field(default_factory=list)
    methods: List[Method] = Field(default_factory=lambda: [Method.RBSM, Method.GD, Method.ADAM])
    seeds: List[int] = Field(default_factory=lambda: list(range(settings.SEEDS)))
    data_folder: str = settings.DATA_FOLDER
    region: Tuple[float, float] = Field(default_factory=lambda: settings.region_size)
    optimizer: RbsmConfig = Field(default_factory=RbsmConfig)
    legalize: bool = True
    legalizer: LegalizeConfig = Field(default_factory=LegalizeConfig)
    ablation_circuits: List[str] = Field(default_factory=list)
    workers: int = Field(default_factory=lambda: settings.WORKERS, ge=1)
    include_reference: bool = True
    record_time: bool = True
    out_csv: Optional[str] = None
    out_ablation_csv: Optional[str] = None


class RunTask(BaseModel):
    """One unit of work; picklable so it can cross a process boundary"""

    circuit: str
    method: Method
    seed: int
    variant: str = ""
    optimizer: RbsmConfig
    legalize: bool
    legalizer: LegalizeConfig
    record_time: bool = True
    data_folder: str
    region: Tuple[float, float]
    synthetic: Optional[SyntheticCircuit] = None


@lru_cache(maxsize=16)
def _load_gsrc(data_folder: str, circuit: str, region: Tuple[float, float]) -> Tuple[Netlist, Region]:
    bundle = BenchmarkBundle.from_directory(data_folder, circuit)
    bundle.require()
    return parse_bundle(bundle, Region(*region))


def load_circuit(task: RunTask) -> Tuple[Netlist, Region]:
    if task.synthetic is not None:
        spec = task.synthetic
        return generate_synthetic(
            spec.seed, spec.n_cells, spec.n_nets, Region(*task.region),
            (spec.size_low, spec.size_high), spec.n_terminals,
        )
    return _load_gsrc(task.data_folder, task.circuit, tuple(task.region))


def legal_from_oracle(netlist: Netlist, overlap: float) -> bool:
    return overlap <= LEGAL_AREA_TOLERANCE * netlist.total_movable_area


def evaluate(netlist: Netlist, region: Region, placement: Placement, task: RunTask,
             elapsed: float) -> Tuple[RunReport, Optional[Placement]]:
    """Oracle metrics of an optimizer result, legalizing it when requested"""
    lhpwl = loverlap = legal = None
    legal_placement = None
    if task.legalize:
        legal_placement, report = legalize(netlist, region, placement, task.legalizer)
        lhpwl = oracle_hpwl(netlist, legal_placement)
        loverlap = oracle_overlap(netlist, legal_placement)
        legal = report.success and legal_from_oracle(netlist, loverlap)

    result = RunReport(
        circuit=task.circuit,
        method=task.method.value,
        variant=task.variant,
        seed=task.seed,
        hpwl=oracle_hpwl(netlist, placement),
        overlap=oracle_overlap(netlist, placement),
        time_s=round(elapsed, 3) if task.record_time else 0.0,
        lhpwl=lhpwl,
        loverlap=loverlap,
        legal=legal,
    )
    return result, legal_placement


def execute_task(task: RunTask) -> RunReport:
    netlist, region = load_circuit(task)
    config = task.optimizer.model_copy(update={"seed": task.seed})

    # only the optimizer is timed
    start = time.perf_counter()
    placement, trace = run_method(task.method, netlist, region, config)
    elapsed = time.perf_counter() - start

    report, _ = evaluate(netlist, region, placement, task, elapsed)
    logger.info(
        f"{task.circuit}/{task.method.value}{'/' + task.variant if task.variant else ''} seed {task.seed}: "
        f"hpwl={report.hpwl:.1f} overlap={report.overlap:.1f} lhpwl={report.lhpwl} "
        f"legal={report.legal} ({elapsed:.2f}s, {len(trace)} iterations)"
    )
    return report


def reference_report(data_folder: str, circuit: str, region: Tuple[float, float]) -> Optional[RunReport]:
    """Metrics of the floorplan shipped in <circuit>.pl, if it positions every block"""
    netlist, _ = _load_gsrc(data_folder, circuit, tuple(region))
    bundle = BenchmarkBundle.from_directory(data_folder, circuit)
    try:
        placement = load_placement(bundle.pl_path, netlist)
    except BookshelfParseError as e:
        logger.info(f"No reference floorplan for {circuit}: {e}")
        return None
    return RunReport(
        circuit=circuit, method="gsrc", kind="reference",
        hpwl=oracle_hpwl(netlist, placement), overlap=oracle_overlap(netlist, placement),
    )


def build_tasks(suite: SuiteConfig) -> Tuple[List[RunTask], List[RunTask]]:
    """(main tasks, ablation tasks)"""
    common = dict(
        legalize=suite.legalize, legalizer=suite.legalizer, record_time=suite.record_time,
        data_folder=suite.data_folder, region=suite.region,
    )
    circuits = [(name, None) for name in suite.circuits] + [(s.name, s) for s in suite.synthetic]

    main = [
        RunTask(circuit=name, method=method, seed=seed, optimizer=suite.optimizer, synthetic=spec, **common)
        for name, spec in circuits
        for method in suite.methods
        for seed in suite.seeds
    ]

    synthetic_by_name = {s.name: s for s in suite.synthetic}
    ablation = [
        RunTask(
            circuit=name, method=Method.RBSM, seed=seed, variant=label,
            optimizer=suite.optimizer.model_copy(update=overrides),
            synthetic=synthetic_by_name.get(name), **common,
        )
        for name in suite.ablation_circuits
        for label, overrides in ABLATIONS.items()
        for seed in suite.seeds
    ]
    return main, ablation


def check_benchmarks(suite: SuiteConfig) -> None:
    """Fail before any run when a benchmark file is missing"""
    synthetic = {s.name for s in suite.synthetic}
    for circuit in dict.fromkeys(suite.circuits + suite.ablation_circuits):
        if circuit not in synthetic:
            BenchmarkBundle.from_directory(suite.data_folder, circuit).require()


def execute_tasks(tasks: List[RunTask], workers: int) -> List[RunReport]:
    if not tasks:
        return []
    if workers <= 1 or len(tasks) == 1:
        return [execute_task(task) for task in tasks]
    logger.info(f"Running {len(tasks)} tasks on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(execute_task, tasks))


def run_benchmark(suite: SuiteConfig) -> Tuple[List[RunReport], List[RunReport]]:
    """
    Run the whole suite.

    Returns:
        (table rows, ablation rows), each sorted and with median rows added

    Raises:
        BenchmarkNotFoundError: a requested circuit has missing files
    """
    check_benchmarks(suite)
    main_tasks, ablation_tasks = build_tasks(suite)
    logger.info(f"Suite: {len(main_tasks)} runs, {len(ablation_tasks)} ablation runs")

    runs = execute_tasks(main_tasks, suite.workers)
    reports = runs + median_reports(runs)
    if suite.include_reference:
        for circuit in suite.circuits:
            row = reference_report(suite.data_folder, circuit, suite.region)
            if row is not None:
                reports.append(row)
    reports = sort_reports(reports)

    ablation_runs = execute_tasks(ablation_tasks, suite.workers)
    ablations = sort_reports(ablation_runs + median_reports(ablation_runs))

    compare_with_published(reports)
    compare_ablations(ablations)
    if suite.out_csv:
        write_reports_csv(reports, suite.out_csv)
    if suite.out_ablation_csv and ablations:
        write_reports_csv(ablations, suite.out_ablation_csv)

    failed = [r for r in runs + ablation_runs if r.legal is False]
    if failed:
        logger.warning(f"{len(failed)} runs did not legalize")
    return reports, ablations


def all_legal(reports: List[RunReport]) -> bool:
    return all(r.legal is not False for r in reports)
