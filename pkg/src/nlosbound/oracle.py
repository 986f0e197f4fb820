"""Independent brute-force references for validating the relaxed bounds.

`oracle_vmax1_2d` evaluates the farthest-point distance exactly in 2-D by
candidate enumeration (the maximum of a convex function over a compact convex
set sits on the boundary, and on each circular arc the distance to a fixed
point peaks at the arc endpoints or at the far ray point).  `oracle_max_mc`
gives certified lower estimates in any dimension by rejection sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Region, as_point, bounding_box, residual, row_norms
from .rng import RngState

MEMBER_TOL = 1e-9  # membership tolerance, relative to the largest radius


class DegenerateRegionError(Exception):
    """Raised when a region's acceptance volume is too small to sample."""


@dataclass(frozen=True)
class OracleOptions:
    mc_samples: int = 100_000
    arc_points: int = 64  # extreme directions tracked in diameter mode
    seed: int = 0

    def __post_init__(self):
        if self.mc_samples < 1:
            raise ValueError("mc_samples must be >= 1")
        if self.arc_points < 2:
            raise ValueError("arc_points must be >= 2")


def circle_intersections(c1, r1: float, c2, r2: float) -> list[np.ndarray]:
    """Intersection points of two circles (radical-line construction).

    Near-tangency (slightly negative discriminant) is clamped to tangency so
    touching circles still yield their common point.
    """
    c1 = as_point(c1)
    c2 = as_point(c2)
    d = float(np.sqrt(((c2 - c1) ** 2).sum()))
    if d == 0.0:
        return []  # concentric: no isolated intersection points
    ell = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - ell * ell
    clamp = 1e-12 * max(1.0, r1 * r1, r2 * r2)
    if h2 < -clamp:
        return []
    h2 = max(h2, 0.0)
    u = (c2 - c1) / d
    perp = np.array([-u[1], u[0]])
    base = c1 + ell * u
    if h2 == 0.0:
        return [base]
    h = float(np.sqrt(h2))
    return [base + h * perp, base - h * perp]


def _members(region: Region, pts: list[np.ndarray]) -> list[np.ndarray]:
    tol = MEMBER_TOL * region.max_radius
    return [p for p in pts if residual(region, p) <= tol]


def oracle_vmax1_2d(x_hat, region: Region) -> float:
    """Exact max over the region of distance to x_hat (2-D only).

    Candidates: circle-circle intersection points inside the region, plus for
    every ball the point diametrically opposite x_hat (kept when inside).
    """
    xh = as_point(x_hat)
    if region.dim != 2 or xh.size != 2:
        raise ValueError("the exact oracle is 2-D only")
    centers, radii = region.centers, region.radii
    num = len(region)
    if num == 1:
        # farthest point of a single disc lies on the far side of the ray
        return float(np.sqrt(((xh - centers[0]) ** 2).sum())) + float(radii[0])
    cands: list[np.ndarray] = []
    for i in range(num - 1):
        for j in range(i + 1, num):
            cands.extend(circle_intersections(centers[i], radii[i], centers[j], radii[j]))
    for i in range(num):
        off = centers[i] - xh
        dist = float(np.sqrt(off @ off))
        if dist > 1e-14 * max(1.0, region.max_radius):
            cands.append(centers[i] + (radii[i] / dist) * off)
        else:
            # x_hat sits on this center: distance to its circle is constant,
            # probe a few boundary points in case the whole circle bounds B
            for probe in (np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
                          np.array([0.0, 1.0]), np.array([0.0, -1.0])):
                cands.append(centers[i] + radii[i] * probe)
    feasible = _members(region, cands)
    if not feasible:
        # degenerate (empty-interior) region: fall back to the single point
        # certified by the enclosing-ball solve when its radius is ~zero
        from .bounds import bound2

        b2 = bound2(region)
        if b2.radius <= 1e-6 * region.max_radius and residual(region, b2.center) <= MEMBER_TOL * region.max_radius:
            return float(np.sqrt(((xh - b2.center) ** 2).sum()))
        raise DegenerateRegionError("no boundary candidates found; region degenerate or empty")
    pts = np.array(feasible)
    return float(row_norms(pts - xh).max())


def _diameter_directions(dim: int, count: int) -> np.ndarray:
    if dim == 2:
        ang = np.linspace(0.0, np.pi, count, endpoint=False)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    # Fibonacci hemisphere; antipodal pairs are redundant for extremes
    k = np.arange(count)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    zc = (k + 0.5) / count  # upper hemisphere
    rad = np.sqrt(1.0 - zc * zc)
    return np.stack([rad * np.cos(phi), rad * np.sin(phi), zc], axis=1)


def oracle_max_mc(
    region: Region,
    mode: str,
    opts: OracleOptions,
    estimate=None,
) -> float:
    """Monte-Carlo lower estimate of the farthest-point distance or diameter.

    Rejection-samples the region's bounding box, keeps exact members
    (residual zero), and returns the max distance to `estimate`
    (mode="max_dist") or the max pairwise distance over per-direction extreme
    points (mode="diameter").  Always a lower estimate of the true value.
    """
    if mode not in ("max_dist", "diameter"):
        raise ValueError("mode must be 'max_dist' or 'diameter'")
    if mode == "max_dist":
        if estimate is None:
            raise ValueError("max_dist mode needs an estimate")
        est = as_point(estimate)
        if est.size != region.dim:
            raise ValueError("dimension mismatch between estimate and region")
    lo, hi = bounding_box(region)
    if np.any(hi < lo):
        raise DegenerateRegionError("bounding box is empty; region has no volume")
    widths = hi - lo
    n = region.dim
    centers, radii = region.centers, region.radii
    rng = RngState(opts.seed)

    max_attempts = 10 * opts.mc_samples
    accepted = 0
    attempts = 0
    best = 0.0
    dirs = extreme_pts = proj_best = None
    if mode == "diameter":
        dirs = _diameter_directions(n, opts.arc_points)
        extreme_pts = np.full((2 * dirs.shape[0], n), np.nan)
        proj_best = np.full(2 * dirs.shape[0], -np.inf)

    batch = 4096
    while accepted < opts.mc_samples and attempts < max_attempts:
        take = min(batch, max_attempts - attempts)
        pts = lo + widths * rng.floats_array(take * n).reshape(take, n)
        attempts += take
        diff = pts[:, None, :] - centers[None, :, :]
        inside = (np.sqrt((diff * diff).sum(axis=2)) <= radii).all(axis=1)
        kept = pts[inside]
        if kept.shape[0] > opts.mc_samples - accepted:
            kept = kept[: opts.mc_samples - accepted]
        accepted += kept.shape[0]
        if kept.shape[0] == 0:
            continue
        if mode == "max_dist":
            best = max(best, float(row_norms(kept - est).max()))
        else:
            proj = kept @ dirs.T  # (k, D)
            for sign, off in ((1.0, 0), (-1.0, dirs.shape[0])):
                vals = sign * proj
                arg = vals.argmax(axis=0)
                upd = vals[arg, np.arange(dirs.shape[0])] > proj_best[off : off + dirs.shape[0]]
                proj_best[off : off + dirs.shape[0]][upd] = vals[arg, np.arange(dirs.shape[0])][upd]
                extreme_pts[off : off + dirs.shape[0]][upd] = kept[arg[upd]]

    if accepted == 0 or (attempts >= max_attempts and accepted / attempts < 1e-4):
        raise DegenerateRegionError(
            f"acceptance rate {accepted}/{attempts} below 1e-4; region volume too small"
        )
    if mode == "max_dist":
        return best
    good = extreme_pts[np.isfinite(extreme_pts).all(axis=1)]
    if good.shape[0] < 2:
        return 0.0
    diff = good[:, None, :] - good[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=2)).max())
