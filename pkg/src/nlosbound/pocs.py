"""Feasible-point estimators.

`pocs_estimate` projects onto the farthest violated ball until the feasibility
residual drops below tolerance (alternating projections).  It is the special
case of the negative-subgradient iteration in `subgradient_estimate` with the
exact minimizing step along the unit subgradient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .geometry import Region, as_point, row_norms

DEFAULT_MAX_ITERS = 500
DEFAULT_TOL_FACTOR = 1e-6  # times the largest radius in the region


@dataclass
class PocsOptions:
    """Iteration budget, residual tolerance (m), and the initialization point."""

    x0: np.ndarray
    max_iters: int = DEFAULT_MAX_ITERS
    residual_tol: Optional[float] = None  # None -> 1e-6 * max radius

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.residual_tol is not None and not (self.residual_tol > 0.0):
            raise ValueError("residual_tol must be positive")


@dataclass
class Estimate:
    """Final iterate with its feasibility residual; converged iff residual <= tol."""

    point: np.ndarray
    residual: float
    iterations_used: int
    converged: bool


def _tol(region: Region, residual_tol: Optional[float]) -> float:
    return DEFAULT_TOL_FACTOR * region.max_radius if residual_tol is None else residual_tol


def pocs_estimate(region: Region, opts: PocsOptions, path: Optional[list] = None) -> Estimate:
    """Alternating projections onto the farthest ball.

    Stops when the residual reaches tolerance or the iteration budget runs
    out; non-convergence is reported through `converged`, never an error.
    When `path` is a list the visited iterates (including x0) are appended,
    which the invariant tests use to check Fejer monotonicity.
    """
    x = as_point(opts.x0)
    if x.size != region.dim:
        raise ValueError("dimension mismatch between x0 and region")
    tol = _tol(region, opts.residual_tol)
    centers, radii = region.centers, region.radii
    if path is not None:
        path.append(x.copy())
    iters = 0
    gaps = row_norms(x - centers) - radii
    f = float(gaps.max())
    while f > tol and iters < opts.max_iters:
        j = int(np.argmax(gaps))
        d = x - centers[j]
        x = centers[j] + (radii[j] / (radii[j] + gaps[j])) * d
        iters += 1
        if path is not None:
            path.append(x.copy())
        gaps = row_norms(x - centers) - radii
        f = float(gaps.max())
    res = f if f > 0.0 else 0.0
    return Estimate(point=x, residual=res, iterations_used=iters, converged=res <= tol)


def pocs_estimate_batch(
    region: Region,
    x0s: np.ndarray,
    max_iters: int = DEFAULT_MAX_ITERS,
    residual_tol: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Run pocs_estimate from many initializations at once.

    Returns (points, residuals, iterations, converged) arrays aligned with the
    rows of x0s.  Each row follows the same update rule as the scalar path;
    the batch form exists because simulation campaigns run hundreds of
    initializations per trial.
    """
    X = np.array(x0s, dtype=float)
    if X.ndim != 2 or X.shape[1] != region.dim:
        raise ValueError("x0s must be (R, n) matching the region dimension")
    tol = _tol(region, residual_tol)
    centers, radii = region.centers, region.radii
    rows = X.shape[0]
    iters = np.zeros(rows, dtype=int)
    res = np.zeros(rows)
    active = np.arange(rows)
    for _ in range(max_iters):
        diff = X[active, None, :] - centers[None, :, :]
        gaps = np.sqrt((diff * diff).sum(axis=2)) - radii
        f = gaps.max(axis=1)
        res[active] = np.maximum(f, 0.0)
        live = f > tol
        if not live.any():
            active = active[:0]
            break
        act = active[live]
        gl = gaps[live]
        j = gl.argmax(axis=1)
        gj = gl[np.arange(j.size), j]
        cj, rj = centers[j], radii[j]
        d = X[act] - cj
        X[act] = cj + (rj / (rj + gj))[:, None] * d
        iters[act] += 1
        active = act
    if active.size:
        diff = X[active, None, :] - centers[None, :, :]
        gaps = np.sqrt((diff * diff).sum(axis=2)) - radii
        res[active] = np.maximum(gaps.max(axis=1), 0.0)
    return X, res, iters, res <= tol


def subgradient_estimate(
    region: Region,
    x0,
    step_rule: Optional[Callable[[int], float]] = None,
    max_iters: int = 100,
    residual_tol: Optional[float] = None,
    path: Optional[list] = None,
) -> Estimate:
    """Negative-subgradient iteration on the feasibility residual.

    The subgradient at an infeasible point is the unit vector away from the
    projection onto the farthest ball; at a feasible point it is zero and the
    iteration stops.  Default step rule is the diminishing 1/(k+1).
    """
    if step_rule is None:
        step_rule = lambda k: 1.0 / (k + 1)
    x = as_point(x0)
    if x.size != region.dim:
        raise ValueError("dimension mismatch between x0 and region")
    tol = _tol(region, residual_tol)
    centers, radii = region.centers, region.radii
    if path is not None:
        path.append(x.copy())
    iters = 0
    for k in range(max_iters):
        gaps = row_norms(x - centers) - radii
        f = float(gaps.max())
        if f <= tol:
            break
        j = int(np.argmax(gaps))
        d = x - centers[j]
        g = d / (radii[j] + gaps[j])  # unit vector toward x from its projection
        alpha = step_rule(k)
        if not (alpha > 0.0):
            raise ValueError("step_rule must return positive steps")
        x = x - alpha * g
        iters += 1
        if path is not None:
            path.append(x.copy())
    gaps = row_norms(x - centers) - radii
    f = float(gaps.max())
    res = f if f > 0.0 else 0.0
    return Estimate(point=x, residual=res, iterations_used=iters, converged=res <= tol)
