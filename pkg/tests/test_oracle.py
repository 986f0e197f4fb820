import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlosbound.geometry import residual
from nlosbound.oracle import (
    DegenerateRegionError,
    OracleOptions,
    circle_intersections,
    oracle_max_mc,
    oracle_vmax1_2d,
)

from conftest import random_scenario, region_of


class TestCircleIntersections:
    def test_two_points(self):
        pts = circle_intersections([0.0, 0.0], 1.5, [2.0, 0.0], 1.5)
        assert len(pts) == 2
        ys = sorted(p[1] for p in pts)
        assert_allclose(ys, [-math.sqrt(1.25), math.sqrt(1.25)])
        assert all(p[0] == pytest.approx(1.0) for p in pts)

    def test_tangency_clamped(self):
        pts = circle_intersections([0.0, 0.0], 1.0, [2.0, 0.0], 1.0)
        assert len(pts) >= 1
        assert_allclose(pts[0], [1.0, 0.0], atol=1e-9)

    def test_disjoint(self):
        assert circle_intersections([0.0, 0.0], 1.0, [5.0, 0.0], 1.0) == []

    def test_concentric(self):
        assert circle_intersections([0.0, 0.0], 1.0, [0.0, 0.0], 2.0) == []


class TestExactOracle:
    def test_single_disc(self, unit_disc):
        assert oracle_vmax1_2d([2.0, 0.0], unit_disc) == pytest.approx(3.0)

    def test_single_disc_center(self, unit_disc):
        assert oracle_vmax1_2d([0.0, 0.0], unit_disc) == pytest.approx(1.0)

    def test_tangent_point(self, tangent_discs):
        assert oracle_vmax1_2d([0.0, 0.0], tangent_discs) == pytest.approx(1.0, abs=1e-9)

    def test_lens_vertices(self, lens_discs):
        # both far-ray candidates fall outside the lens; vertices win
        assert oracle_vmax1_2d([1.0, 0.0], lens_discs) == pytest.approx(
            math.sqrt(1.25), abs=1e-12
        )

    def test_requires_2d(self):
        r3 = region_of(((0.0, 0.0, 0.0), 1.0))
        with pytest.raises(ValueError):
            oracle_vmax1_2d([0.0, 0.0, 0.0], r3)


class TestMcOracle:
    def test_single_disc_diameter(self, unit_disc):
        d = oracle_max_mc(unit_disc, "diameter", OracleOptions(mc_samples=100_000, seed=1))
        assert 1.99 <= d <= 2.0

    def test_lens_diameter(self, lens_discs):
        d = oracle_max_mc(lens_discs, "diameter", OracleOptions(mc_samples=100_000, seed=2))
        truth = 2.0 * math.sqrt(1.25)
        assert truth - 0.02 <= d <= truth

    def test_mc_below_exact(self):
        for seed in range(20):
            s = random_scenario(seed + 400, dim=2, num_anchors=4)
            region = s.region()
            x_hat = s.true_target
            mc = oracle_max_mc(
                region, "max_dist", OracleOptions(mc_samples=4000, seed=seed), estimate=x_hat
            )
            exact = oracle_vmax1_2d(x_hat, region)
            assert mc <= exact + 1e-12

    def test_running_max_in_samples(self, lens_discs):
        small = oracle_max_mc(lens_discs, "diameter", OracleOptions(mc_samples=2000, seed=5))
        big = oracle_max_mc(lens_discs, "diameter", OracleOptions(mc_samples=8000, seed=5))
        assert big >= small

    def test_degenerate_region_raises(self, tangent_discs):
        with pytest.raises(DegenerateRegionError):
            oracle_max_mc(tangent_discs, "diameter", OracleOptions(mc_samples=2000, seed=3))

    def test_max_dist_needs_estimate(self, unit_disc):
        with pytest.raises(ValueError):
            oracle_max_mc(unit_disc, "max_dist", OracleOptions(mc_samples=10, seed=0))

    def test_3d_region_supported(self):
        s = random_scenario(900, dim=3, num_anchors=5)
        region = s.region()
        d = oracle_max_mc(region, "diameter", OracleOptions(mc_samples=20000, seed=4))
        assert d > 0.0
