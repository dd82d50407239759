"""
Optimizer module: operator-split stochastic subgradient placement with GD and
ADAM baselines.
"""

from .config import Method, RbsmConfig, load_config_file
from .solver import PlacementSolver, adam_run, gd_run, random_initial_placement, rbsm_run, run_method
from .steps import (
    AdamState,
    SgdUpdater,
    adapt_weights,
    adaptive_gamma,
    lr_schedule,
    perturb_gradient,
    perturbation_scale,
    should_stop,
)
from .trace import IterationRecord, IterationTrace

__all__ = [
    'Method', 'RbsmConfig', 'load_config_file',
    'PlacementSolver', 'rbsm_run', 'gd_run', 'adam_run', 'run_method', 'random_initial_placement',
    'AdamState', 'SgdUpdater', 'adapt_weights', 'adaptive_gamma', 'lr_schedule',
    'perturb_gradient', 'perturbation_scale', 'should_stop',
    'IterationRecord', 'IterationTrace',
]
