"""
Operator-split stochastic subgradient placement and its GD/ADAM baselines.

Each outer iteration re-weights the penalties, then runs `inner_steps` passes.
In every pass a batch of nets is sampled and two updates follow: one against the
batch wirelength plus the mean-field pull, one against the boundary and overlap
penalties of the cells the batch touches.
"""

import logging
import time
from typing import Optional, Tuple

import numpy as np

from ..errors import OptimizerDivergedError
from ..netlist import Netlist, Placement, Region, net_degrees
from ..objective import (
    PenaltyWeights,
    TermValueGrad,
    boundary_penalty,
    exact_overlap_area,
    hpwl,
    mean_field,
    overlap_penalty_hat,
    total_objective,
)
from ..sampling import build_plan, default_batch_size, sample_batch, uniform_plan
from ..spatial import build_grid, candidate_pairs
from .config import Method, RbsmConfig
from .steps import AdamState, SgdUpdater, adapt_weights, lr_schedule, perturb_gradient, should_stop
from .trace import IterationRecord, IterationTrace

logger = logging.getLogger(__name__)


def random_initial_placement(netlist: Netlist, region: Region, rng: np.random.Generator) -> Placement:
    """Centers drawn uniformly from the feasible box of every movable cell"""
    w_half = netlist.movable_widths / 2.0
    h_half = netlist.movable_heights / 2.0
    x = rng.uniform(w_half, region.width - w_half)
    y = rng.uniform(h_half, region.height - h_half)
    return Placement(x, y)


class PlacementSolver:
    """One optimizer run. Holds no state across calls to run()."""

    def __init__(self, netlist: Netlist, region: Region, config: Optional[RbsmConfig] = None,
                 method: Method = Method.RBSM):
        self.netlist = netlist
        self.region = region
        self.config = config or RbsmConfig()
        self.method = Method(method)

        if netlist.n_movable < 1:
            raise ValueError("Placement needs at least one movable cell")
        region.validate_for(netlist)

        cfg = self.config
        n = netlist.n_movable
        if self.method == Method.GD or cfg.alpha == 0:
            self.alpha = 0.0
        else:
            self.alpha = cfg.alpha
            if cfg.normalize_mean_field:
                # squared distances over a die length: wirelength units
                self.alpha = cfg.alpha / (n * (region.width + region.height) / 2.0)

        movable = netlist.movable_ids
        self._netless = netlist.movable_index[
            np.array([c for c in movable if not netlist.incidence[c]], dtype=np.int64)
        ]
        self._plan = None
        if netlist.n_nets and self.method != Method.GD:
            batch = default_batch_size(netlist.n_nets, cfg.batch_fraction)
            if cfg.uniform_batch:
                self._plan = uniform_plan(netlist.n_nets, batch)
            else:
                self._plan = build_plan(net_degrees(netlist), cfg.temperature, batch)

    # Geometry helpers

    def _pairs(self, placement: Placement) -> np.ndarray:
        size = self.config.bin_size
        grid = build_grid(self.netlist, placement, size, size, self.region)
        return candidate_pairs(grid)

    def _weights(self, placement: Placement, pairs: np.ndarray) -> PenaltyWeights:
        cfg = self.config
        if self.method == Method.GD:
            return PenaltyWeights.uniform(len(placement), cfg.gamma0)
        if not cfg.adaptive_gamma:
            return PenaltyWeights.uniform(len(placement), cfg.penalty_weight())
        return adapt_weights(self.netlist, self.region, placement, pairs, cfg.gamma0, self.alpha)

    def _batch_scope(self, batch) -> Tuple[np.ndarray, np.ndarray]:
        """Movable cells touched by the batch (Placement indices) and a cell-id mask"""
        index = self.netlist.movable_index
        cells = self.netlist.cells_of_nets(batch)
        local = index[cells]
        local = np.union1d(local[local >= 0], self._netless)
        mask = np.zeros(self.netlist.n_cells, dtype=bool)
        mask[self.netlist.movable_ids[local]] = True
        return local, mask

    # Gradients of the two splits

    def _wire_grad(self, placement: Placement, batch) -> TermValueGrad:
        n = len(placement)
        term = TermValueGrad.zeros(n)
        if batch is None or len(batch):
            if self.netlist.n_nets:
                term = term + hpwl(self.netlist, placement, batch)
        if self.alpha:
            term = term + mean_field(placement, self.alpha)
        return term

    def _penalty_grad(self, placement: Placement, weights: PenaltyWeights, batch) -> TermValueGrad:
        pairs = self._pairs(placement)
        cells = None
        if batch is not None and not self.config.full_penalty:
            cells, mask = self._batch_scope(batch)
            if pairs.shape[0]:
                pairs = pairs[mask[pairs[:, 0]] | mask[pairs[:, 1]]]
        term = boundary_penalty(self.netlist, self.region, placement, weights, cells)
        return term + overlap_penalty_hat(self.netlist, placement, weights, pairs)

    def _apply(self, placement: Placement, delta: np.ndarray, trace: IterationTrace, k: int) -> Placement:
        vector = placement.as_vector() + delta
        if not np.all(np.isfinite(vector)):
            raise OptimizerDivergedError(
                f"Non-finite coordinates at outer iteration {k} ({self.method.value})", trace
            )
        return Placement.from_vector(vector)

    def _step(self, placement: Placement, weights: PenaltyWeights, lr: float, k: int,
              rng: np.random.Generator, updaters, trace: IterationTrace) -> Placement:
        cfg = self.config
        if self.method == Method.GD:
            grad = self._wire_grad(placement, None) + self._penalty_grad(placement, weights, None)
            return self._apply(placement, updaters[0].step(grad.as_vector(), lr), trace, k)

        batch = sample_batch(self._plan, rng) if self._plan is not None else []
        wire_updater, penalty_updater = updaters

        grad = self._wire_grad(placement, batch).as_vector()
        if cfg.perturb:
            grad = perturb_gradient(grad, k, rng)
        placement = self._apply(placement, wire_updater.step(grad, lr), trace, k)

        grad = self._penalty_grad(placement, weights, batch).as_vector()
        if cfg.perturb:
            grad = perturb_gradient(grad, k, rng)
        return self._apply(placement, penalty_updater.step(grad, lr), trace, k)

    def _updaters(self):
        cfg = self.config
        size = 2 * self.netlist.n_movable
        if self.method == Method.ADAM:
            return (AdamState(size, cfg.beta1, cfg.beta2, cfg.adam_eps),
                    AdamState(size, cfg.beta1, cfg.beta2, cfg.adam_eps))
        if self.method == Method.GD:
            return (SgdUpdater(),)
        return SgdUpdater(), SgdUpdater()

    def run(self, initial: Optional[Placement] = None) -> Tuple[Placement, IterationTrace]:
        """
        Returns:
            (best placement, trace). Best is the lowest-HPWL iterate among those
            with overlap ratio below eps_overlap, else the lowest overlap ratio.

        Raises:
            OptimizerDivergedError: coordinates or the objective became non-finite
        """
        cfg = self.config
        netlist = self.netlist
        rng = np.random.default_rng(cfg.seed)
        placement = random_initial_placement(netlist, self.region, rng)
        if initial is not None:
            initial.check_dimension(netlist)
            placement = initial.copy()

        updaters = self._updaters()
        trace = IterationTrace()
        total_area = netlist.total_movable_area
        best: Optional[Placement] = None
        best_key = None
        prev_hpwl: Optional[float] = None
        start = time.perf_counter()

        logger.info(
            f"{self.method.value}: {netlist.n_movable} cells, {netlist.n_nets} nets, "
            f"iter_max={cfg.iter_max}, inner_steps={cfg.inner_steps}, seed={cfg.seed}"
        )

        for k in range(1, cfg.iter_max + 1):
            lr = lr_schedule(cfg.lr0, k - 1, cfg.iter_max)
            weights = self._weights(placement, self._pairs(placement))
            for _ in range(cfg.inner_steps):
                placement = self._step(placement, weights, lr, k, rng, updaters, trace)

            pairs = self._pairs(placement)
            wl = hpwl(netlist, placement).value
            overlap = exact_overlap_area(netlist, placement, pairs)
            ratio = overlap / total_area
            objective = total_objective(netlist, self.region, placement, weights, self.alpha, pairs)
            if not np.isfinite(objective):
                raise OptimizerDivergedError(
                    f"Objective became non-finite at outer iteration {k} ({self.method.value})", trace
                )
            trace.append(IterationRecord(k, wl, overlap, ratio, objective, lr, time.perf_counter() - start))

            key = (0, wl) if ratio < cfg.eps_overlap else (1, ratio)
            if best_key is None or key < best_key:
                best_key = key
                best = placement.copy()
                trace.best_iteration = k

            if k % cfg.log_every == 0 or k == 1:
                logger.info(f"iter {k}: hpwl={wl:.1f} overlap={overlap:.2f} ratio={ratio:.4f} lr={lr:.4g}")

            if should_stop(prev_hpwl, wl, ratio, cfg.eps_hpwl, cfg.eps_overlap):
                trace.stopped_early = k < cfg.iter_max
                logger.info(f"Stopping rule met at outer iteration {k}")
                break
            prev_hpwl = wl

        logger.info(
            f"{self.method.value} finished after {len(trace)} iterations; best iteration {trace.best_iteration}"
        )
        return best, trace


def rbsm_run(netlist: Netlist, region: Region, config: Optional[RbsmConfig] = None) -> Tuple[Placement, IterationTrace]:
    return PlacementSolver(netlist, region, config, Method.RBSM).run()


def gd_run(netlist: Netlist, region: Region, config: Optional[RbsmConfig] = None) -> Tuple[Placement, IterationTrace]:
    """Full-batch descent with fixed gamma0 weights, no perturbation and no mean-field pull"""
    return PlacementSolver(netlist, region, config, Method.GD).run()


def adam_run(netlist: Netlist, region: Region, config: Optional[RbsmConfig] = None) -> Tuple[Placement, IterationTrace]:
    return PlacementSolver(netlist, region, config, Method.ADAM).run()


def run_method(method: Method, netlist: Netlist, region: Region,
               config: Optional[RbsmConfig] = None) -> Tuple[Placement, IterationTrace]:
    return PlacementSolver(netlist, region, config, method).run()
