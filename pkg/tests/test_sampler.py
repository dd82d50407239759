import math

import numpy as np
import pytest

from placer.sampling import build_plan, default_batch_size, default_temperature, sample_batch, uniform_plan


class TestBuildPlan:
    def test_equal_degrees_are_uniform(self):
        plan = build_plan([3, 3, 3, 3], 2.0, 2)
        np.testing.assert_allclose(plan.probabilities, 0.25)

    def test_softmax_of_degrees(self):
        plan = build_plan([0.0, math.log(2.0)], 1.0, 1)
        np.testing.assert_allclose(plan.probabilities, [1 / 3, 2 / 3])

    def test_high_temperature_flattens(self):
        plan = build_plan([0, 5, 50], 1e9, 1)
        np.testing.assert_allclose(plan.probabilities, 1 / 3, rtol=1e-6)

    def test_low_temperature_keeps_every_net_reachable(self):
        plan = build_plan([0, 1000], 1e-3, 1)
        assert plan.probabilities[0] > 0
        assert plan.probabilities.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize("temperature", [0.5, 3.0, 40.0])
    def test_higher_degree_is_more_likely(self, temperature):
        degrees = np.random.default_rng(8).integers(0, 30, 50)
        plan = build_plan(degrees, temperature, 5)
        higher = np.greater.outer(degrees, degrees)
        assert np.all(np.greater.outer(plan.probabilities, plan.probabilities)[higher])

    def test_default_temperature(self):
        assert default_temperature(np.array([0, 0, 1])) == 1.0
        assert default_temperature(np.array([4, 6])) == 5.0
        assert build_plan([4, 6], None, 1).temperature == 5.0

    @pytest.mark.parametrize("temperature", [0.0, -1.0, float("inf")])
    def test_bad_temperature(self, temperature):
        with pytest.raises(ValueError):
            build_plan([1, 2], temperature, 1)

    @pytest.mark.parametrize("batch_size", [0, 3])
    def test_bad_batch_size(self, batch_size):
        with pytest.raises(ValueError):
            build_plan([1, 2], 1.0, batch_size)

    def test_no_nets(self):
        with pytest.raises(ValueError):
            build_plan([], 1.0, 1)

    def test_default_batch_size(self):
        assert default_batch_size(10) == 2
        assert default_batch_size(11) == 3
        assert default_batch_size(1) == 1
        assert default_batch_size(4, 1.0) == 4


class TestSampleBatch:
    def test_distinct_members(self):
        rng = np.random.default_rng(0)
        plan = build_plan(np.arange(50), 5.0, 20)
        for _ in range(200):
            batch = sample_batch(plan, rng)
            assert len(batch) == 20
            assert len(set(batch)) == 20
            assert all(0 <= b < 50 for b in batch)

    def test_full_batch_is_a_permutation(self):
        plan = build_plan([1, 7, 2, 9], 1.0, 4)
        batch = sample_batch(plan, np.random.default_rng(1))
        assert sorted(batch) == [0, 1, 2, 3]

    def test_point_mass(self):
        plan = build_plan([0, 0, 2000], 1.0, 1)
        rng = np.random.default_rng(2)
        assert all(sample_batch(plan, rng) == [2] for _ in range(100))

    def test_frequencies_follow_probabilities(self):
        plan = build_plan([0.0, 1.0, 2.0, 4.0], 1.5, 1)
        rng = np.random.default_rng(12345)
        draws = 100_000
        counts = np.zeros(4)
        for _ in range(draws):
            counts[sample_batch(plan, rng)[0]] += 1
        expected = plan.probabilities * draws
        sigma = np.sqrt(draws * plan.probabilities * (1 - plan.probabilities))
        assert np.all(np.abs(counts - expected) < 3 * sigma)

    def test_reproducible_with_seed(self):
        plan = uniform_plan(30, 6)
        first = [sample_batch(plan, np.random.default_rng(9)) for _ in range(3)]
        second = [sample_batch(plan, np.random.default_rng(9)) for _ in range(3)]
        assert first == second

    def test_uniform_plan(self):
        plan = uniform_plan(5, 2)
        np.testing.assert_allclose(plan.probabilities, 0.2)
        assert plan.batch_size == 2
        assert plan.n_nets == 5
