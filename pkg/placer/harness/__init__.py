"""
Harness module: oracles, benchmark suite, reports, SVG rendering and the CLI.
"""

from .bench import ABLATIONS, RunTask, SuiteConfig, SyntheticCircuit, execute_task, run_benchmark
from .oracles import oracle_hpwl, oracle_overlap, overlapping_cells
from .reference import PUBLISHED_ABLATIONS, PUBLISHED_RESULTS, compare_ablations, compare_with_published
from .render import render_svg
from .reports import RunReport, median_reports, read_reports_csv, write_reports_csv

__all__ = [
    'ABLATIONS', 'RunTask', 'SuiteConfig', 'SyntheticCircuit', 'execute_task', 'run_benchmark',
    'oracle_hpwl', 'oracle_overlap', 'overlapping_cells',
    'PUBLISHED_ABLATIONS', 'PUBLISHED_RESULTS', 'compare_ablations', 'compare_with_published',
    'render_svg', 'RunReport', 'median_reports', 'read_reports_csv', 'write_reports_csv',
]
