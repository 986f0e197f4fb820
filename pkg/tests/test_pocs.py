import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlosbound.geometry import farthest_index, residual
from nlosbound.pocs import (
    PocsOptions,
    pocs_estimate,
    pocs_estimate_batch,
    subgradient_estimate,
)

from conftest import random_scenario, region_of


class TestPocs:
    def test_single_projection(self, unit_disc):
        est = pocs_estimate(unit_disc, PocsOptions(x0=np.array([2.0, 0.0])))
        assert_allclose(est.point, [1.0, 0.0])
        assert est.residual == 0.0
        assert est.iterations_used == 1
        assert est.converged

    def test_overlap_feasible_output(self, lens_discs):
        est = pocs_estimate(
            lens_discs,
            PocsOptions(x0=np.array([5.0, 5.0]), residual_tol=1e-9),
        )
        assert est.converged
        # membership verified by direct evaluation of the residual
        assert residual(lens_discs, est.point) <= 1e-9

    def test_feasible_start_zero_iterations(self, lens_discs):
        x0 = np.array([1.0, 0.0])
        est = pocs_estimate(lens_discs, PocsOptions(x0=x0))
        assert est.iterations_used == 0
        assert_allclose(est.point, x0)

    def test_nonconvergence_reported_not_raised(self, tangent_discs):
        est = pocs_estimate(
            tangent_discs,
            PocsOptions(x0=np.array([5.0, 5.0]), max_iters=5, residual_tol=1e-12),
        )
        assert not est.converged
        assert est.iterations_used == 5

    def test_fejer_monotone_toward_target(self):
        for seed in range(20):
            s = random_scenario(seed, dim=3, num_anchors=8)
            region = s.region()
            path = []
            pocs_estimate(region, PocsOptions(x0=np.full(3, 5.0)), path=path)
            d = [np.linalg.norm(p - s.true_target) for p in path]
            for a, b in zip(d, d[1:]):
                assert b <= a + 1e-12

    def test_iterates_land_on_projected_ball(self):
        s = random_scenario(3, dim=2, num_anchors=6)
        region = s.region()
        path = []
        pocs_estimate(region, PocsOptions(x0=np.zeros(2)), path=path)
        for xk, xk1 in zip(path, path[1:]):
            j = farthest_index(region, xk)
            b = region.balls[j]
            assert np.linalg.norm(xk1 - b.center) <= b.radius * (1 + 1e-12)

    def test_convergence_rate_on_scenarios(self):
        converged = 0
        total = 300
        for seed in range(total):
            s = random_scenario(seed, dim=3, num_anchors=10)
            est = pocs_estimate(s.region(), PocsOptions(x0=np.full(3, 5.0)))
            if est.converged:
                converged += 1
            assert residual(s.region(), est.point) == pytest.approx(est.residual)
        assert converged / total >= 0.99

    def test_batch_matches_scalar(self):
        s = random_scenario(9, dim=3, num_anchors=10)
        region = s.region()
        rng = np.random.default_rng(1)
        x0s = rng.uniform(0, 10, size=(16, 3))
        pts, res, iters, conv = pocs_estimate_batch(region, x0s)
        for k in range(16):
            one = pocs_estimate(region, PocsOptions(x0=x0s[k]))
            assert np.abs(one.point - pts[k]).max() <= 1e-12
            assert one.iterations_used == iters[k]
            assert one.converged == conv[k]


class TestSubgradient:
    def test_feasible_start_unchanged(self, lens_discs):
        x0 = np.array([1.0, 0.5])
        est = subgradient_estimate(lens_discs, x0, max_iters=50)
        assert_allclose(est.point, x0)
        assert est.iterations_used == 0

    def test_polyak_step_is_projection(self, unit_disc):
        x0 = np.array([3.0, 0.0])
        f0 = residual(unit_disc, x0)
        est = subgradient_estimate(unit_disc, x0, step_rule=lambda k: f0, max_iters=1)
        assert_allclose(est.point, [1.0, 0.0], atol=1e-12)
        assert est.residual == 0.0

    def test_diminishing_steps_reduce_residual(self, tangent_discs):
        x0 = np.array([5.0, 5.0])
        start = residual(tangent_discs, x0)
        est = subgradient_estimate(tangent_discs, x0, max_iters=200)
        assert est.residual < start

    def test_rejects_nonpositive_steps(self, unit_disc):
        with pytest.raises(ValueError):
            subgradient_estimate(unit_disc, np.array([3.0, 0.0]), step_rule=lambda k: 0.0)
