"""Worst-case position-error bounds over the feasible region.

Four upper bounds and one lower bound:

* `bound1`      -- largest distance from a given estimate to any point of the
                   region, upper-bounded through the SDP relaxation of the
                   farthest-point problem; also the multiplicative lower bound
                   sqrt(alpha * sdp value) on that largest distance.
* `bound2`      -- twice the radius of an enclosing ball of the region,
                   from the simplex QP over anchor combinations (exact
                   minimum enclosing ball when #anchors <= dimension).
* `bound3_socp` -- diagonal of the bounding box of the region, each side from
                   two linear maximizations over the ball intersection.
* `bound3_lp`   -- diagonal of the box obtained after replacing every ball by
                   its own bounding box; closed form.
* `distance_to_region` -- distance from an estimate to the region (a lower
                   bound on the position error of that estimate).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import Region, as_point, bounding_box, residual
from .solvers import (
    SolverOptions,
    SolverOutcome,
    SolverStatus,
    SymMat,
    find_interior_point,
    lift_strictly_feasible,
    maximize_linear_over_balls,
    nearest_point_in_region,
    region_constraint_mats,
    solve_simplex_qp,
    solve_tiny_sdp,
)

INFLATION_FACTOR = 1e-7


@dataclass
class Bound1Result:
    """SDP-relaxation bound for a specific estimate (meters)."""

    upper: float
    lower: float
    alpha: float
    sdp_value: float  # squared meters
    outcome: SolverOutcome
    inflated: bool = False


@dataclass
class Bound2Result:
    """Enclosing-ball bound: region length <= diameter_bound = 2 * radius."""

    diameter_bound: float
    radius: float
    center: np.ndarray
    lam: np.ndarray
    value: float  # optimal squared radius (may be ~0 or negative for thin/empty regions)
    outcome: SolverOutcome
    probably_empty: bool = False


@dataclass
class Bound3SocpResult:
    """Per-dimension lengths of the region's bounding box and their norm."""

    lengths: np.ndarray
    value: float
    outcomes: list = field(default_factory=list)
    inflated: bool = False


@dataclass
class Bound3LpResult:
    """Per-dimension lengths of the relaxed (box-per-ball) bounding box."""

    lengths: np.ndarray
    value: float
    lo: np.ndarray
    hi: np.ndarray


@dataclass
class Bound3Result:
    v_socp: float
    v_lp: float
    socp_lengths: np.ndarray
    lp_lengths: np.ndarray
    inflated: bool = False


@dataclass
class BoundReport:
    """All bounds for one (estimate, region) pair plus solve timings."""

    bound1: Optional[Bound1Result]
    bound2: Bound2Result
    bound3: Bound3Result
    ell1: Optional[float]
    timings: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        b1 = None
        if self.bound1 is not None:
            b1 = {
                "upper": self.bound1.upper,
                "lower": self.bound1.lower,
                "inflated": self.bound1.inflated,
            }
        return {
            "bound1": b1,
            "bound2": self.bound2.diameter_bound,
            "bound3_socp": self.bound3.v_socp,
            "bound3_lp": self.bound3.v_lp,
            "ell1": self.ell1,
        }


def _alpha(num_anchors: int, dim: int) -> float:
    """Tightness constant 1/(2 ln(2(N+1)mu)) with mu = min(N+1, n+1)."""
    mu = min(num_anchors + 1, dim + 1)
    return 1.0 / (2.0 * math.log(2.0 * (num_anchors + 1) * mu))


def _estimate_objective_mat(x_hat: np.ndarray) -> SymMat:
    """tr(B0 (x,1)(x,1)^T) = ||x - x_hat||^2."""
    n = x_hat.size
    b = np.zeros((n + 1, n + 1))
    b[:n, :n] = np.eye(n)
    b[:n, n] = -x_hat
    b[n, :n] = -x_hat
    b[n, n] = float(x_hat @ x_hat)
    return SymMat.from_dense(b)


def bound1(
    x_hat,
    region: Region,
    opts: Optional[SolverOptions] = None,
    interior=None,
) -> Bound1Result:
    """Upper/lower bound on the farthest-point distance from x_hat to the region.

    The estimate may be feasible or infeasible.  When the region has no
    usable interior the radii are inflated by 1e-7*scale before solving;
    the upper bound stays valid (the region only grew) and the result is
    flagged `inflated`.  `interior` may carry a precomputed strictly interior
    point so several bounds on one region can share the search.
    """
    opts = opts or SolverOptions()
    xh = as_point(x_hat)
    if xh.size != region.dim:
        raise ValueError("dimension mismatch between estimate and region")
    scale = max(region.max_radius, 1.0)
    reg = region
    inflated = False
    if interior is not None:
        interior = (as_point(interior), 0.0)
    else:
        interior = find_interior_point(reg, opts)
    if interior is None:
        reg = region.inflate(INFLATION_FACTOR * scale)
        inflated = True
        interior = find_interior_point(reg, opts)
    if interior is None:
        out = SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"),
                            info={"error": "region appears empty"})
        return Bound1Result(float("nan"), float("nan"),
                            _alpha(len(region), region.dim), float("nan"), out, inflated)
    constraints = region_constraint_mats(reg)
    z0 = lift_strictly_feasible(interior[0], constraints, reg.max_radius)
    if z0 is None:
        reg = reg.inflate(INFLATION_FACTOR * scale)
        inflated = True
        interior = find_interior_point(reg, opts)
        constraints = region_constraint_mats(reg)
        z0 = None if interior is None else lift_strictly_feasible(interior[0], constraints, reg.max_radius)
    if z0 is None:
        out = SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"),
                            info={"error": "no strictly feasible lift found"})
        return Bound1Result(float("nan"), float("nan"),
                            _alpha(len(region), region.dim), float("nan"), out, inflated)
    b0 = _estimate_objective_mat(xh)
    _, value, outcome = solve_tiny_sdp(b0, constraints, opts, z0=z0)
    if inflated and outcome.status == SolverStatus.CONVERGED:
        outcome.status = SolverStatus.NEEDS_INFLATION
    alpha = _alpha(len(region), region.dim)
    upper = math.sqrt(max(value, 0.0)) if np.isfinite(value) else float("nan")
    lower = math.sqrt(max(alpha * value, 0.0)) if np.isfinite(value) else float("nan")
    return Bound1Result(upper, lower, alpha, value, outcome, inflated)


def bound2(region: Region, opts: Optional[SolverOptions] = None) -> Bound2Result:
    """Enclosing-ball bound from the simplex QP over anchor combinations.

    Minimizes ||sum lam_i a_i||^2 - sum lam_i (||a_i||^2 - range_i^2) over the
    simplex; the optimal value is an upper bound on the squared radius of the
    smallest ball enclosing the region (exact when #anchors <= dimension).
    A clearly negative optimum signals a probably-empty intersection.
    """
    opts = opts or SolverOptions()
    a = region.centers
    g = SymMat.from_dense(a @ a.T)
    b = (a * a).sum(axis=1) - region.radii**2
    lam, value, outcome = solve_simplex_qp(g, b, opts)
    radius = math.sqrt(max(value, 0.0))
    center = lam @ a
    scale2 = max(region.max_radius, 1.0) ** 2
    return Bound2Result(
        diameter_bound=2.0 * radius,
        radius=radius,
        center=center,
        lam=lam,
        value=value,
        outcome=outcome,
        probably_empty=value < -opts.tol * scale2,
    )


def bound3_socp(
    region: Region, opts: Optional[SolverOptions] = None, interior=None
) -> Bound3SocpResult:
    """Bounding-box bound: per dimension, maximize +-x_l over the region.

    2n linear maximizations sharing one interior point.  Inflation (when the
    interior is degenerate) only widens the box, so the value stays an upper
    bound on the region length.
    """
    opts = opts or SolverOptions()
    n = region.dim
    scale = max(region.max_radius, 1.0)
    reg = region
    inflated = False
    if interior is not None:
        interior = (as_point(interior), 0.0)
    else:
        interior = find_interior_point(reg, opts)
    if interior is None:
        reg = region.inflate(INFLATION_FACTOR * scale)
        inflated = True
        interior = find_interior_point(reg, opts)
    int_pt = None if interior is None else interior[0]
    lengths = np.zeros(n)
    outcomes = []
    for axis in range(n):
        e = np.zeros(n)
        e[axis] = 1.0
        _, hi, out_hi = maximize_linear_over_balls(e, reg, opts, interior=int_pt)
        _, neg_lo, out_lo = maximize_linear_over_balls(-e, reg, opts, interior=int_pt)
        lengths[axis] = hi + neg_lo  # hi - lo with lo = -max(-x_l)
        outcomes.extend([out_hi, out_lo])
        if out_hi.info.get("inflated") or out_lo.info.get("inflated"):
            inflated = True
    value = float(np.sqrt((lengths**2).sum()))
    return Bound3SocpResult(lengths=lengths, value=value, outcomes=outcomes, inflated=inflated)


def bound3_lp(region: Region) -> Bound3LpResult:
    """Relaxed bounding-box bound; closed form from per-ball boxes."""
    lo, hi = bounding_box(region)
    lengths = np.abs(hi - lo)
    return Bound3LpResult(
        lengths=lengths,
        value=float(np.sqrt((lengths**2).sum())),
        lo=lo,
        hi=hi,
    )


def distance_to_region(
    x_hat, region: Region, opts: Optional[SolverOptions] = None, interior=None
) -> float:
    """Distance from x_hat to the region: zero for feasible estimates,
    otherwise the barrier minimization of ||x_hat - x|| over the region.

    Residuals below 1e-12*scale round to zero, which keeps the result a valid
    lower bound on the position error of x_hat.
    """
    opts = opts or SolverOptions()
    xh = as_point(x_hat)
    if residual(region, xh) <= 1e-12 * region.max_radius:
        return 0.0
    _, dist, outcome = nearest_point_in_region(xh, region, opts, interior=interior)
    if not outcome.ok and not np.isfinite(dist):
        raise ArithmeticError("distance solve failed: region appears empty")
    return dist


def compute_report(
    region: Region,
    estimate=None,
    opts: Optional[SolverOptions] = None,
) -> BoundReport:
    """All bounds for one region, with bound1/ell1 only when an estimate is given."""
    opts = opts or SolverOptions()
    timings = {}

    t0 = time.perf_counter()
    b2 = bound2(region, opts)
    timings["bound2"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    b3s = bound3_socp(region, opts)
    timings["bound3_socp"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    b3l = bound3_lp(region)
    timings["bound3_lp"] = time.perf_counter() - t0

    b1 = None
    ell1 = None
    if estimate is not None:
        t0 = time.perf_counter()
        b1 = bound1(estimate, region, opts)
        timings["bound1"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        ell1 = distance_to_region(estimate, region, opts)
        timings["ell1"] = time.perf_counter() - t0

    b3 = Bound3Result(
        v_socp=b3s.value,
        v_lp=b3l.value,
        socp_lengths=b3s.lengths,
        lp_lengths=b3l.lengths,
        inflated=b3s.inflated,
    )
    return BoundReport(bound1=b1, bound2=b2, bound3=b3, ell1=ell1, timings=timings)
