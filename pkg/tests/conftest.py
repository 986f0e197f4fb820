"""Shared builders for the test suite."""

import numpy as np
import pytest

from nlosbound.geometry import Ball, Region
from nlosbound.scenario import Exponential, ScenarioConfig, generate_scenario


def region_of(*specs) -> Region:
    """Region from ((cx, cy, ...), radius) tuples."""
    return Region(Ball(np.asarray(c, dtype=float), r) for c, r in specs)


@pytest.fixture
def unit_disc() -> Region:
    return region_of(((0.0, 0.0), 1.0))


@pytest.fixture
def tangent_discs() -> Region:
    """Two discs touching at (1, 0); the intersection is that single point."""
    return region_of(((0.0, 0.0), 1.0), ((2.0, 0.0), 1.0))


@pytest.fixture
def lens_discs() -> Region:
    """Two overlapping discs; lens vertices at (1, +-sqrt(1.25))."""
    return region_of(((0.0, 0.0), 1.5), ((2.0, 0.0), 1.5))


def random_scenario(seed: int, dim: int = 3, num_anchors: int = 10, cube: float = 10.0):
    cfg = ScenarioConfig(dim=dim, num_anchors=num_anchors, cube_side=cube,
                         noise=Exponential(rate=1.0))
    return generate_scenario(cfg, seed)
