import numpy as np
import pytest
from numpy.testing import assert_allclose

from nlosbound.geometry import (
    Ball,
    Region,
    bounding_box,
    farthest_index,
    project_onto_ball,
    residual,
)

from conftest import region_of


class TestProjection:
    def test_colinear_scaling(self):
        b = Ball(np.array([0.0, 0.0]), 1.0)
        assert_allclose(project_onto_ball([2.0, 0.0], b), [1.0, 0.0])

    def test_interior_fixed_point(self):
        b = Ball(np.array([0.0, 0.0]), 1.0)
        assert_allclose(project_onto_ball([0.3, 0.0], b), [0.3, 0.0])

    def test_center_case(self):
        b = Ball(np.array([0.0, 0.0]), 1.0)
        assert_allclose(project_onto_ball([0.0, 0.0], b), [0.0, 0.0])
        # zero radius ball, projecting its own center
        b0 = Ball(np.array([1.0, 2.0]), 0.0)
        assert_allclose(project_onto_ball([1.0, 2.0], b0), [1.0, 2.0])

    def test_dimension_mismatch(self):
        b = Ball(np.array([0.0, 0.0]), 1.0)
        with pytest.raises(ValueError, match="dimension mismatch"):
            project_onto_ball([1.0, 2.0, 3.0], b)

    def test_idempotent_and_inside(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            n = rng.integers(1, 4)
            b = Ball(rng.normal(size=n) * 5, float(rng.uniform(0.0, 3.0)))
            x = rng.normal(size=n) * 10
            p1 = project_onto_ball(x, b)
            p2 = project_onto_ball(p1, b)
            scale = max(1.0, np.abs(p1).max())
            assert np.abs(p2 - p1).max() <= 1e-12 * scale
            assert np.linalg.norm(p1 - b.center) <= b.radius * (1 + 1e-12)


class TestResidual:
    def test_outside_single(self, unit_disc):
        assert residual(unit_disc, [2.0, 0.0]) == pytest.approx(1.0)

    def test_interior_exact_zero(self, unit_disc):
        assert residual(unit_disc, [0.5, 0.0]) == 0.0

    def test_two_balls(self):
        r = region_of(((0.0, 0.0), 1.0), ((3.0, 0.0), 1.0))
        assert residual(r, [0.0, 0.0]) == pytest.approx(2.0)

    def test_zero_iff_member(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            r = region_of(*[(rng.normal(size=2) * 2, float(rng.uniform(0.5, 3.0)))
                            for _ in range(rng.integers(1, 5))])
            x = rng.normal(size=2) * 3
            tol = 1e-12 * r.max_radius
            inside = all(
                np.linalg.norm(x - b.center) <= b.radius + tol for b in r.balls
            )
            assert (residual(r, x) <= tol) == inside

    def test_convex_along_segments(self):
        rng = np.random.default_rng(17)
        r = region_of(((0.0, 0.0), 1.0), ((1.5, 0.5), 1.2), ((-0.5, 1.0), 2.0))
        for _ in range(200):
            a, b = rng.normal(size=2) * 4, rng.normal(size=2) * 4
            mid = 0.5 * (a + b)
            assert residual(r, mid) <= max(residual(r, a), residual(r, b)) + 1e-12

    def test_dimension_mismatch(self, unit_disc):
        with pytest.raises(ValueError, match="dimension mismatch"):
            residual(unit_disc, [1.0, 2.0, 3.0])


class TestFarthestIndex:
    def test_basic(self):
        r = region_of(((0.0, 0.0), 1.0), ((3.0, 0.0), 1.0))
        assert farthest_index(r, [0.0, 0.0]) == 1

    def test_tie_breaks_to_smallest(self):
        r = region_of(((-1.0, 0.0), 0.5), ((1.0, 0.0), 0.5))
        assert farthest_index(r, [0.0, 0.0]) == 0

    def test_feasible_returns_none(self, unit_disc):
        assert farthest_index(unit_disc, [0.1, 0.2]) is None


class TestRegion:
    def test_needs_one_ball(self):
        with pytest.raises(ValueError):
            Region([])

    def test_uniform_dimension(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            Region([Ball(np.zeros(2), 1.0), Ball(np.zeros(3), 1.0)])

    def test_invalid_ball(self):
        with pytest.raises(ValueError):
            Ball(np.array([0.0, np.nan]), 1.0)
        with pytest.raises(ValueError):
            Ball(np.zeros(2), -0.5)

    def test_inflate_superset(self, lens_discs):
        bigger = lens_discs.inflate(0.1)
        assert_allclose(bigger.radii, lens_discs.radii + 0.1)
        assert_allclose(bigger.centers, lens_discs.centers)

    def test_bounding_box(self, tangent_discs):
        lo, hi = bounding_box(tangent_discs)
        assert_allclose(lo, [1.0, -1.0])
        assert_allclose(hi, [1.0, 1.0])
