"""Core vector/ball types, projections, and feasibility residuals.

The feasible region for a localization problem with nonnegative range errors
is the intersection of closed balls centered at the anchors with the measured
ranges as radii.  Everything downstream (estimators, bounds, oracles) is built
on the primitives here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

Point = np.ndarray


def as_point(x) -> np.ndarray:
    """Coerce to a finite 1-D float vector."""
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("a point must be a 1-D vector with at least one coordinate")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def row_norms(m: np.ndarray) -> np.ndarray:
    """Euclidean norm of each row; the single distance kernel shared module-wide."""
    return np.sqrt((m * m).sum(axis=1))


@dataclass(frozen=True)
class Ball:
    """Closed ball: anchor position (center, meters) and measured range (radius)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_point(self.center)
        object.__setattr__(self, "center", c)
        r = float(self.radius)
        if not np.isfinite(r) or r < 0.0:
            raise ValueError("radius must be finite and nonnegative")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size


class Region:
    """Nonempty ordered list of balls of a common dimension.

    The (possibly empty) intersection of the balls is the feasible set for the
    target position.  Centers and radii are stacked once at construction since
    feasibility queries dominate the runtime of every iterative algorithm.
    """

    __slots__ = ("balls", "_centers", "_radii")

    def __init__(self, balls: Iterable[Ball]):
        blist = tuple(balls)
        if len(blist) == 0:
            raise ValueError("a region needs at least one ball")
        dim = blist[0].dim
        for b in blist:
            if not isinstance(b, Ball):
                raise TypeError("region entries must be Ball instances")
            if b.dim != dim:
                raise ValueError("dimension mismatch between balls in region")
        self.balls = blist
        self._centers = np.array([b.center for b in blist], dtype=float)
        self._radii = np.array([b.radius for b in blist], dtype=float)

    def __len__(self) -> int:
        return len(self.balls)

    def __repr__(self) -> str:
        return f"Region({len(self.balls)} balls, dim={self.dim})"

    @property
    def centers(self) -> np.ndarray:
        return self._centers

    @property
    def radii(self) -> np.ndarray:
        return self._radii

    @property
    def dim(self) -> int:
        return self._centers.shape[1]

    @property
    def max_radius(self) -> float:
        """Scale of the region; all relative tolerances refer to this."""
        return float(self._radii.max())

    def inflate(self, delta: float) -> "Region":
        """Region with every radius grown by delta >= 0 (superset of this one)."""
        if delta < 0:
            raise ValueError("delta must be nonnegative")
        return Region(Ball(b.center, b.radius + delta) for b in self.balls)


def _check_dim(r: Region, x: np.ndarray):
    if x.size != r.dim:
        raise ValueError(f"dimension mismatch: point has {x.size}, region has {r.dim}")


def project_onto_ball(x, b: Ball) -> np.ndarray:
    """Euclidean projection of x onto the closed ball b.

    Returns x unchanged when x is inside (including x equal to the center,
    which avoids a division-by-zero branch).
    """
    p = as_point(x)
    if p.size != b.dim:
        raise ValueError(f"dimension mismatch: point has {p.size}, ball has {b.dim}")
    d = p - b.center
    dist = float(np.sqrt(d @ d))
    if dist <= b.radius:
        return p
    return b.center + (b.radius / dist) * d


def ball_distances(r: Region, x) -> np.ndarray:
    """dist(x, B_i) for every ball: max(0, ||x - a_i|| - radius_i)."""
    p = as_point(x)
    _check_dim(r, p)
    return np.maximum(row_norms(p - r._centers) - r._radii, 0.0)


def residual(r: Region, x) -> float:
    """Feasibility residual f(x) = max_i dist(x, B_i); zero iff x is in every ball."""
    p = as_point(x)
    _check_dim(r, p)
    worst = float((row_norms(p - r._centers) - r._radii).max())
    return worst if worst > 0.0 else 0.0


def farthest_index(r: Region, x) -> Optional[int]:
    """Index of the ball farthest from x, or None when x is feasible.

    Ties break to the smallest index so the choice is deterministic.
    """
    p = as_point(x)
    _check_dim(r, p)
    gaps = row_norms(p - r._centers) - r._radii
    if gaps.max() <= 0.0:
        return None
    return int(np.argmax(gaps))


def bounding_box(r: Region) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned box enclosing the region's intersection.

    Per dimension: hi = min_i (a_i + radius_i), lo = max_i (a_i - radius_i).
    For a nonempty intersection lo <= hi holds in every dimension.
    """
    hi = (r._centers + r._radii[:, None]).min(axis=0)
    lo = (r._centers - r._radii[:, None]).max(axis=0)
    return lo, hi
