import json
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlosbound.geometry import residual
from nlosbound.rng import RngState, mix64
from nlosbound.scenario import (
    Exponential,
    PositiveGaussian,
    Scenario,
    ScenarioConfig,
    Uniform,
    exponential_inverse_cdf,
    generate_scenario,
    sample_noise,
    sample_noise_array,
    scenario_from_json,
    scenario_to_json,
)


class TestRng:
    def test_same_seed_same_stream(self):
        a = RngState(123)
        b = RngState(123)
        assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]

    def test_array_matches_scalar(self):
        a = RngState(99)
        b = RngState(99)
        scal = [a.next_float() for _ in range(100)]
        vec = b.floats_array(100)
        assert_allclose(scal, vec, rtol=0, atol=0)

    def test_units_in_half_open_interval(self):
        r = RngState(5)
        u = r.units_array(10000)
        assert (u > 0).all() and (u <= 1).all()
        f = RngState(5).floats_array(10000)
        assert (f >= 0).all() and (f < 1).all()

    def test_mix64_distinguishes_indices(self):
        seeds = {mix64(7, k) for k in range(1000)}
        assert len(seeds) == 1000


class TestNoise:
    def test_exponential_inverse_cdf_half(self):
        assert exponential_inverse_cdf(0.5, 1.0) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_draws_nonnegative_all_models(self):
        for model in (Exponential(2.0), Uniform(3.0), PositiveGaussian(2.0, 1.5)):
            rng = RngState(3)
            assert all(sample_noise(model, rng) >= 0.0 for _ in range(500))
            arr = sample_noise_array(model, RngState(4), 5000)
            assert (arr >= 0.0).all()

    def test_exponential_mean_million_draws(self):
        # law of large numbers against the analytic mean 1/rate = 1
        eps = sample_noise_array(Exponential(1.0), RngState(mix64(2024, 0)), 10**6)
        assert 0.99 <= eps.mean() <= 1.01

    def test_exponential_moments_three_sigma(self):
        n = 10**5
        eps = sample_noise_array(Exponential(1.0), RngState(mix64(2024, 1)), n)
        se_mean = 1.0 / math.sqrt(n)
        assert abs(eps.mean() - 1.0) <= 3 * se_mean
        # var of the sample variance of exp(1) is (mu4 - sigma^4)/n = 8/n
        se_var = math.sqrt(8.0 / n)
        assert abs(eps.var() - 1.0) <= 3 * se_var

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            Exponential(0.0)
        with pytest.raises(ValueError):
            Uniform(-1.0)
        with pytest.raises(ValueError):
            PositiveGaussian(1.0, 0.0)


class TestGenerateScenario:
    CFG = ScenarioConfig(dim=3, num_anchors=8, cube_side=10.0, noise=Exponential(1.0))

    def test_support(self):
        s = generate_scenario(self.CFG, 42)
        assert ((s.anchors >= 0.0) & (s.anchors < 10.0)).all()
        assert ((s.true_target >= 0.0) & (s.true_target < 10.0)).all()

    def test_ranges_dominate_distances(self):
        s = generate_scenario(self.CFG, 43)
        dists = np.linalg.norm(s.anchors - s.true_target, axis=1)
        assert (s.ranges >= dists).all()

    def test_bit_identical_regeneration(self):
        s1 = generate_scenario(self.CFG, 44)
        s2 = generate_scenario(self.CFG, 44)
        assert np.array_equal(s1.anchors, s2.anchors)
        assert np.array_equal(s1.ranges, s2.ranges)
        assert np.array_equal(s1.true_target, s2.true_target)

    def test_target_in_region_exactly(self):
        for seed in range(30):
            s = generate_scenario(self.CFG, seed)
            assert residual(s.region(), s.true_target) == 0.0

    def test_distinct_seeds_distinct_scenarios(self):
        s1 = generate_scenario(self.CFG, 1)
        s2 = generate_scenario(self.CFG, 2)
        assert not np.array_equal(s1.anchors, s2.anchors)

    def test_dim_validation(self):
        with pytest.raises(ValueError):
            ScenarioConfig(dim=4)
        with pytest.raises(ValueError):
            ScenarioConfig(num_anchors=0)


class TestScenarioJson:
    def test_round_trip_exact(self):
        s = generate_scenario(TestGenerateScenario.CFG, 77)
        back = scenario_from_json(scenario_to_json(s))
        assert np.array_equal(back.anchors, s.anchors)
        assert np.array_equal(back.ranges, s.ranges)
        assert np.array_equal(back.true_target, s.true_target)

    def test_schema_keys_and_null_target(self):
        s = Scenario(anchors=np.array([[0.0, 0.0]]), ranges=np.array([1.0]))
        doc = json.loads(scenario_to_json(s))
        assert set(doc) == {"dim", "anchors", "ranges", "target"}
        assert doc["target"] is None
        assert doc["dim"] == 2

    def test_malformed_raises(self):
        with pytest.raises(ValueError):
            scenario_from_json('{"dim": 2, "ranges": [1.0]}')
        with pytest.raises(ValueError):
            scenario_from_json('{"dim": 3, "anchors": [[0,0]], "ranges": [1], "target": null}')
