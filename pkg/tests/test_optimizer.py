import math

import numpy as np
import pytest
from pydantic import ValidationError

from placer.errors import OptimizerDivergedError
from placer.harness import oracle_hpwl, oracle_overlap
from placer.netlist import Placement, Region, generate_synthetic
from placer.objective import PenaltyWeights
from placer.optimizer import (
    AdamState,
    IterationRecord,
    IterationTrace,
    Method,
    PlacementSolver,
    RbsmConfig,
    SgdUpdater,
    adam_run,
    adapt_weights,
    adaptive_gamma,
    gd_run,
    load_config_file,
    lr_schedule,
    perturb_gradient,
    perturbation_scale,
    random_initial_placement,
    rbsm_run,
    run_method,
    should_stop,
)

from conftest import make_netlist

FAST = dict(iter_max=4, inner_steps=3)


class TestAdaptiveGamma:
    def test_ratio_is_rounded_up(self):
        assert adaptive_gamma([[3.0, 0.0]], [[1.0, 0.0]], 1000.0).tolist() == [3.0]
        assert adaptive_gamma([[3.5, 1.0]], [[1.0, 1.0]], 1000.0).tolist() == [4.0]

    def test_inactive_penalty_keeps_default(self):
        assert adaptive_gamma([[2.0, 2.0]], [[0.0, 0.0]], 1000.0).tolist() == [1000.0]

    def test_floor_at_one(self):
        assert adaptive_gamma([[0.0, 0.01]], [[0.5, 1.0]], 1000.0).tolist() == [1.0]

    def test_largest_coordinate_ratio_wins(self):
        gamma = adaptive_gamma([[1.0, 0.0, 2.0, 0.0]], [[0.5, -0.5, 0.25, -0.25]], 1000.0)
        assert gamma.tolist() == [8.0]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            adaptive_gamma([[1.0, 2.0]], [[1.0]], 1000.0)

    def test_adapt_weights_on_overlapping_pair(self):
        netlist = make_netlist([(2.0, 2.0), (2.0, 2.0)], [[0, 1]])
        placement = Placement([5.0, 6.0], [5.0, 5.2])
        weights = adapt_weights(netlist, Region(20.0, 20.0), placement, np.array([[0, 1]]), 1000.0)
        # hat x-branch partial is 1/2 and the hpwl partials are 1: ratio 2
        assert weights.pair_weight(0, 1) == 2.0
        # both cells inside the die: boundary weights stay at gamma0
        assert weights.gamma_b.tolist() == [1000.0, 1000.0]

    def test_adapt_weights_counts_mean_field_pull(self):
        netlist = make_netlist([(2.0, 2.0), (2.0, 2.0)], [[0, 1]])
        placement = Placement([5.0, 6.0], [5.0, 5.2])
        weights = adapt_weights(netlist, Region(20.0, 20.0), placement, np.array([[0, 1]]), 1000.0, alpha=1.0)
        # x partials: hpwl 1 plus mean field 2 * 0.5 = 2, over the hat partial 1/2
        assert weights.pair_weight(0, 1) == 4.0

    def test_adapt_weights_on_boundary_violation(self):
        netlist = make_netlist([(2.0, 2.0), (2.0, 2.0)], [[0, 1]])
        placement = Placement([0.5, 10.0], [5.0, 5.0])
        weights = adapt_weights(netlist, Region(20.0, 20.0), placement, np.zeros((0, 2), dtype=np.int64), 1000.0)
        assert weights.gamma_b[0] == 1.0
        assert weights.gamma_b[1] == 1000.0
        assert weights.gamma_ov == {}


class TestPerturbation:
    def test_scale(self):
        assert perturbation_scale(1) == pytest.approx(0.2)
        assert perturbation_scale(2) == pytest.approx(0.025)
        with pytest.raises(ValueError):
            perturbation_scale(0)

    def test_zero_gradient_unchanged(self):
        rng = np.random.default_rng(0)
        assert perturb_gradient(np.zeros(6), 1, rng).tolist() == [0.0] * 6

    def test_noise_relative_to_norm(self):
        grad = np.full(10_000, 1.0)
        noisy = perturb_gradient(grad, 1, np.random.default_rng(1))
        noise = noisy - grad
        assert np.std(noise) == pytest.approx(0.2 * np.linalg.norm(grad), rel=0.05)

    def test_stream_does_not_depend_on_gradient(self):
        a, b = np.random.default_rng(5), np.random.default_rng(5)
        perturb_gradient(np.zeros(4), 3, a)
        perturb_gradient(np.ones(4), 3, b)
        assert a.random() == b.random()


class TestSchedule:
    def test_cosine_endpoints(self):
        assert lr_schedule(0.1, 0, 200) == pytest.approx(0.1)
        assert lr_schedule(0.1, 100, 200) == pytest.approx(0.05)
        assert lr_schedule(0.1, 200, 200) == pytest.approx(0.0, abs=1e-15)

    def test_monotone(self):
        rates = [lr_schedule(1.0, k, 50) for k in range(51)]
        assert all(a >= b for a, b in zip(rates, rates[1:]))

    @pytest.mark.parametrize("k,iter_max", [(-1, 10), (11, 10), (0, 0)])
    def test_bad_arguments(self, k, iter_max):
        with pytest.raises(ValueError):
            lr_schedule(0.1, k, iter_max)


class TestStoppingRule:
    def test_first_iteration_never_stops(self):
        assert not should_stop(None, 10.0, 0.0, 1e-4, 0.02)

    def test_stops_when_both_hold(self):
        assert should_stop(100.0, 100.005, 0.01, 1e-4, 0.02)

    def test_overlap_blocks(self):
        assert not should_stop(100.0, 100.0, 0.03, 1e-4, 0.02)

    def test_hpwl_change_blocks(self):
        assert not should_stop(100.0, 101.0, 0.0, 1e-4, 0.02)

    def test_zero_wirelength(self):
        assert should_stop(0.0, 0.0, 0.0, 1e-4, 0.02)
        assert not should_stop(1.0, 0.0, 0.0, 1e-4, 0.02)


class TestUpdaters:
    def test_sgd(self):
        assert SgdUpdater().step(np.array([1.0, -2.0]), 0.5).tolist() == [-0.5, 1.0]

    def test_adam_first_step_is_sign_times_lr(self):
        state = AdamState(3)
        delta = state.step(np.array([4.0, -0.1, 0.0]), 0.01)
        np.testing.assert_allclose(delta, [-0.01, 0.01, 0.0], atol=1e-8)
        assert state.t == 1

    def test_adam_zero_gradient_stays_put(self):
        state = AdamState(2)
        for _ in range(5):
            assert not state.step(np.zeros(2), 0.1).any()

    def test_adam_shape_check(self):
        with pytest.raises(ValueError):
            AdamState(2).step(np.zeros(3), 0.1)


class TestConfig:
    def test_defaults(self):
        cfg = RbsmConfig()
        assert (cfg.iter_max, cfg.inner_steps, cfg.lr0, cfg.gamma0, cfg.alpha) == (200, 25, 0.1, 1000.0, 5.0)
        assert cfg.penalty_weight() == 1000.0

    def test_fixed_gamma_needs_adaptation_off(self):
        with pytest.raises(ValidationError):
            RbsmConfig(fixed_gamma=10000)
        assert RbsmConfig(adaptive_gamma=False, fixed_gamma=10000).penalty_weight() == 10000

    @pytest.mark.parametrize("field,value", [("lr0", 0), ("iter_max", 0), ("batch_fraction", 1.5), ("gamma0", 0.5)])
    def test_rejects_out_of_range(self, field, value):
        with pytest.raises(ValidationError):
            RbsmConfig(**{field: value})

    def test_rejects_unknown_field(self):
        with pytest.raises(ValidationError):
            RbsmConfig(learning_rate=0.1)

    def test_load_config_file(self, tmp_path):
        path = tmp_path / "rbsm.env"
        path.write_text("ITER_MAX=50\nlr0=0.05\nTEMPERATURE=\nPERTURB=false\n")
        cfg = load_config_file(path, seed=3, iter_max=None)
        assert cfg.iter_max == 50
        assert cfg.lr0 == 0.05
        assert cfg.temperature is None
        assert cfg.perturb is False
        assert cfg.seed == 3

    def test_load_config_overrides_win(self, tmp_path):
        path = tmp_path / "rbsm.env"
        path.write_text("ITER_MAX=50\n")
        assert load_config_file(path, iter_max=7).iter_max == 7

    def test_load_config_unknown_key(self, tmp_path):
        path = tmp_path / "rbsm.env"
        path.write_text("STEP_SIZE=1\n")
        with pytest.raises(ValueError, match="STEP_SIZE"):
            load_config_file(path)

    def test_load_config_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config_file(tmp_path / "absent.env")


class TestTrace:
    def record(self, k):
        return IterationRecord(k, 10.0 * k, 1.0, 0.1, 20.0, 0.1, 0.5)

    def test_iterations_must_increase(self):
        trace = IterationTrace()
        trace.append(self.record(1))
        trace.append(self.record(2))
        with pytest.raises(ValueError):
            trace.append(self.record(2))
        assert len(trace) == 2
        assert trace.last.iteration == 2
        assert trace.column("hpwl").tolist() == [10.0, 20.0]

    def test_values_exclude_wall_time(self):
        trace = IterationTrace()
        trace.append(self.record(1))
        assert trace.values().shape == (1, 6)
        assert trace.to_rows()[0]["wall_time"] == 0.5


class TestSolver:
    def test_initial_placement_is_feasible(self, synthetic):
        netlist, region = synthetic
        placement = random_initial_placement(netlist, region, np.random.default_rng(0))
        assert np.all(placement.x - netlist.movable_widths / 2 >= 0)
        assert np.all(placement.x + netlist.movable_widths / 2 <= region.width)

    def test_deterministic_with_seed(self, synthetic):
        netlist, region = synthetic
        cfg = RbsmConfig(seed=11, **FAST)
        first, trace_a = rbsm_run(netlist, region, cfg)
        second, trace_b = rbsm_run(netlist, region, cfg)
        assert first == second
        np.testing.assert_array_equal(trace_a.values(), trace_b.values())

    def test_seed_changes_result(self, synthetic):
        netlist, region = synthetic
        a, _ = rbsm_run(netlist, region, RbsmConfig(seed=1, **FAST))
        b, _ = rbsm_run(netlist, region, RbsmConfig(seed=2, **FAST))
        assert a != b

    def test_trace_and_best(self, synthetic):
        netlist, region = synthetic
        best, trace = rbsm_run(netlist, region, RbsmConfig(**FAST))
        assert 1 <= len(trace) <= 4
        assert [r.iteration for r in trace] == list(range(1, len(trace) + 1))
        assert trace.best_iteration is not None
        assert len(best) == netlist.n_movable
        for record in trace:
            assert record.overlap_ratio == pytest.approx(record.overlap / netlist.total_movable_area)
        assert trace[0].lr == pytest.approx(0.1)

    def test_reduces_wirelength(self, synthetic):
        netlist, region = synthetic
        cfg = RbsmConfig(iter_max=30, inner_steps=10, lr0=1.0, seed=4)
        start = random_initial_placement(netlist, region, np.random.default_rng(4))
        _, trace = rbsm_run(netlist, region, cfg)
        assert trace.last.hpwl < oracle_hpwl(netlist, start)

    def test_single_cell_without_nets(self):
        netlist = make_netlist([(2.0, 2.0)], [])
        best, trace = rbsm_run(netlist, Region(10.0, 10.0), RbsmConfig(**FAST))
        assert trace[0].hpwl == 0.0
        assert trace.stopped_early
        assert len(trace) == 2
        assert 1.0 <= best.x[0] <= 9.0

    def test_needs_a_movable_cell(self):
        netlist = make_netlist([], [], terminals=[(0.0, 0.0)])
        with pytest.raises(ValueError):
            PlacementSolver(netlist, Region(10.0, 10.0))

    def test_rejects_oversized_cells(self):
        netlist = make_netlist([(20.0, 1.0)], [])
        with pytest.raises(ValueError):
            PlacementSolver(netlist, Region(10.0, 10.0))

    def test_mean_field_weight(self, synthetic):
        netlist, region = synthetic
        # 100x100 die: a die length of 100
        assert PlacementSolver(netlist, region, RbsmConfig()).alpha == pytest.approx(5.0 / (netlist.n_movable * 100.0))
        assert PlacementSolver(netlist, region, RbsmConfig(normalize_mean_field=False)).alpha == 5.0
        assert PlacementSolver(netlist, region, RbsmConfig(alpha=0)).alpha == 0.0
        assert PlacementSolver(netlist, region, RbsmConfig(), Method.GD).alpha == 0.0

    @pytest.mark.parametrize("method", list(Method))
    def test_every_method_runs(self, synthetic, method):
        netlist, region = synthetic
        best, trace = run_method(method, netlist, region, RbsmConfig(**FAST))
        assert len(trace) >= 1
        assert np.all(np.isfinite(best.as_vector()))

    @pytest.mark.parametrize(
        "overrides",
        [
            dict(uniform_batch=True),
            dict(adaptive_gamma=False, fixed_gamma=10000),
            dict(alpha=0),
            dict(perturb=False),
            dict(full_penalty=True),
            dict(temperature=0.5, bin_size=3.0),
        ],
    )
    def test_ablation_switches(self, synthetic, overrides):
        netlist, region = synthetic
        _, trace = rbsm_run(netlist, region, RbsmConfig(**FAST, **overrides))
        assert np.all(np.isfinite(trace.values()))

    def test_full_batch_split_matches_gd_without_active_penalties(self):
        netlist = make_netlist([(1.0, 1.0), (1.0, 1.0)], [[0, 1]])
        region = Region(1000.0, 1000.0)
        initial = Placement([100.0, 900.0], [100.0, 900.0])
        cfg = RbsmConfig(iter_max=2, inner_steps=3, batch_fraction=1.0, perturb=False, alpha=0,
                         adaptive_gamma=False, fixed_gamma=1000, full_penalty=True)
        split_best, split_trace = PlacementSolver(netlist, region, cfg, Method.RBSM).run(initial)
        gd_best, gd_trace = PlacementSolver(netlist, region, cfg, Method.GD).run(initial)
        np.testing.assert_allclose(split_best.as_vector(), gd_best.as_vector())
        np.testing.assert_allclose(split_trace.values(), gd_trace.values())
        # the pair moved towards each other
        assert split_trace.last.hpwl < 1600.0

    def test_two_connected_cells_end_abutting(self):
        netlist = make_netlist([(10.0, 10.0), (10.0, 10.0)], [[0, 1]])
        region = Region(200.0, 200.0)
        cfg = RbsmConfig(seed=3)
        start = random_initial_placement(netlist, region, np.random.default_rng(3))
        best, _ = rbsm_run(netlist, region, cfg)
        assert oracle_overlap(netlist, best) < cfg.eps_overlap * netlist.total_movable_area
        assert oracle_hpwl(netlist, best) <= oracle_hpwl(netlist, start)
        # abutting centers are 10 apart along one axis
        assert oracle_hpwl(netlist, best) <= 12.0

    def test_dense_circuit_does_not_pile_up(self):
        region = Region(800.0, 800.0)
        netlist, _ = generate_synthetic(3, 100, 885, region, size_range=(20.0, 80.0), n_terminals=334)
        _, trace = rbsm_run(netlist, region, RbsmConfig(seed=1, iter_max=100))
        assert trace.best_iteration > 1
        assert trace.last.overlap_ratio < trace[0].overlap_ratio

    def test_adam_runs_are_isolated(self, synthetic):
        netlist, region = synthetic
        cfg = RbsmConfig(seed=5, **FAST)
        solver = PlacementSolver(netlist, region, cfg, Method.ADAM)
        first, trace_a = solver.run()
        second, trace_b = solver.run()
        assert first == second
        np.testing.assert_array_equal(trace_a.values(), trace_b.values())
        _, trace_c = adam_run(netlist, region, cfg)
        np.testing.assert_array_equal(trace_a.values(), trace_c.values())

    def test_initial_placement_dimension_checked(self, two_cells):
        with pytest.raises(ValueError):
            PlacementSolver(two_cells, Region(10.0, 10.0)).run(Placement([1.0], [1.0]))

    def test_divergence_is_reported(self, synthetic):
        netlist, region = synthetic
        cfg = RbsmConfig(iter_max=3, inner_steps=3, lr0=1e308, perturb=False)
        with pytest.raises(OptimizerDivergedError) as info:
            rbsm_run(netlist, region, cfg)
        assert isinstance(info.value.trace, IterationTrace)

    def test_gd_uses_constant_weights(self, synthetic):
        netlist, region = synthetic
        solver = PlacementSolver(netlist, region, RbsmConfig(), Method.GD)
        placement = random_initial_placement(netlist, region, np.random.default_rng(0))
        weights = solver._weights(placement, solver._pairs(placement))
        assert isinstance(weights, PenaltyWeights)
        assert np.all(weights.gamma_b == 1000.0) and weights.gamma_ov == {}

    def test_gd_wrapper(self, synthetic):
        netlist, region = synthetic
        _, trace = gd_run(netlist, region, RbsmConfig(**FAST))
        assert math.isfinite(trace.last.objective)
