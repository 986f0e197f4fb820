"""Self-contained small dense convex solvers.

Four kernels back the error bounds:

* `solve_simplex_qp`    -- convex QP over the probability simplex (projected
                           gradient with a fixed 1/L step plus an active-face
                           KKT polish for machine-accurate certificates);
* `maximize_linear_over_balls` -- linear maximization over an intersection of
                           balls via a log-barrier path with damped Newton;
* `solve_tiny_sdp`      -- trace-objective SDP with linear trace constraints,
                           a pinned corner entry, and a PSD variable of order
                           <= dim+1, solved by a primal log-barrier method;
* `sym_eig_small`       -- cyclic Jacobi eigendecomposition used for PSD
                           checks and gradient step lengths.

Problem sizes are capped at desk scale (order <= 64, dimension <= 3); larger
inputs are rejected rather than degraded silently.  All solvers are pure given
their inputs and options.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .geometry import Region, as_point, row_norms

MAX_ORDER = 64
MAX_DIM = 3
INFLATION_FACTOR = 1e-7  # radius inflation, relative to the largest radius
_NEWTON_DEC2_POLISH = 1e-10  # squared Newton decrement: stop polishing
_NEWTON_DEC2_OK = 1e-4  # squared decrement still considered centered
_GAP_SAFETY = 2.0  # factor on nu/t absorbing loose centering in certificates


class SolverStatus(str, Enum):
    CONVERGED = "converged"
    ITERATION_LIMIT = "iteration_limit"
    NEEDS_INFLATION = "needs_inflation"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class SolverOptions:
    """Duality-measure tolerance and barrier schedule knobs."""

    tol: float = 1e-8
    max_outer: int = 12
    max_newton: int = 50
    barrier_growth: float = 10.0

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise ValueError("tol must be positive")
        if self.max_outer < 1 or self.max_newton < 1:
            raise ValueError("iteration limits must be >= 1")
        if not (self.barrier_growth > 1.0):
            raise ValueError("barrier_growth must exceed 1")


@dataclass
class SolverOutcome:
    """Status, objective value, and machine-checkable certificate residuals."""

    status: SolverStatus
    value: float
    residuals: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in (SolverStatus.CONVERGED, SolverStatus.NEEDS_INFLATION)


# --- symmetric matrices ------------------------------------------------------


class SymMat:
    """Symmetric matrix in packed lower-triangular storage.

    Symmetry holds by construction; `from_dense` symmetrizes its argument.
    Order is capped at MAX_ORDER.
    """

    __slots__ = ("order", "data")

    def __init__(self, order: int, data: np.ndarray):
        if order < 1 or order > MAX_ORDER:
            raise ValueError(f"order must be in [1, {MAX_ORDER}]")
        packed = np.asarray(data, dtype=float)
        if packed.shape != (order * (order + 1) // 2,):
            raise ValueError("packed data has wrong length for the given order")
        self.order = order
        self.data = packed

    @classmethod
    def from_dense(cls, a) -> "SymMat":
        m = np.asarray(a, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("expected a square matrix")
        sym = 0.5 * (m + m.T)
        idx = np.tril_indices(m.shape[0])
        return cls(m.shape[0], sym[idx])

    @classmethod
    def zeros(cls, order: int) -> "SymMat":
        return cls(order, np.zeros(order * (order + 1) // 2))

    @classmethod
    def identity(cls, order: int) -> "SymMat":
        return cls.from_dense(np.eye(order))

    def dense(self) -> np.ndarray:
        m = np.zeros((self.order, self.order))
        idx = np.tril_indices(self.order)
        m[idx] = self.data
        m.T[idx] = self.data
        return m

    def __getitem__(self, ij) -> float:
        i, j = ij
        if i < j:
            i, j = j, i
        return float(self.data[i * (i + 1) // 2 + j])

    def __repr__(self) -> str:
        return f"SymMat(order={self.order})"


def _as_symmat(m) -> SymMat:
    return m if isinstance(m, SymMat) else SymMat.from_dense(m)


def sym_eig_small(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi sweeps.

    Returns (eigenvalues ascending, orthonormal eigenvectors as columns) with
    M ~ V diag(w) V^T.  Off-diagonal mass is driven below 1e-14 of the
    Frobenius norm, comfortably inside the 1e-12 contract.
    """
    sm = _as_symmat(m)
    a = sm.dense()
    n = sm.order
    v = np.eye(n)
    if n == 1:
        return a[0, :1].copy(), v
    fro = float(np.sqrt((a * a).sum()))
    if fro == 0.0:
        return np.zeros(n), v
    stop = 1e-14 * fro
    skip = stop / n  # entries this small cannot push the off-norm past `stop`
    for _ in range(60):
        off = float(np.sqrt(2.0 * (np.triu(a, 1) ** 2).sum()))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


# --- simplex kernels ----------------------------------------------------------


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto the unit simplex (sort-and-threshold)."""
    x = np.asarray(v, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("expected a nonempty vector")
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, x.size + 1)
    cond = u - css / ks > 0.0
    rho = int(np.nonzero(cond)[0][-1])
    tau = css[rho] / (rho + 1)
    return np.maximum(x - tau, 0.0)


def _qp_gap(grad: np.ndarray, lam: np.ndarray) -> float:
    """First-order gap over the simplex: max_i(-grad_i) - (-grad . lam)."""
    return float(lam @ grad - grad.min())


def _qp_face_polish(gd: np.ndarray, b: np.ndarray, lam: np.ndarray) -> Optional[np.ndarray]:
    """Solve the KKT system on the face spanned by the current support.

    Returns a simplex-feasible candidate or None when the face solution
    leaves the simplex.
    """
    support = np.nonzero(lam > 1e-12)[0]
    if support.size == 0:
        return None
    k = support.size
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = 2.0 * gd[np.ix_(support, support)]
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([b[support], [1.0]])
    sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
    lam_s = sol[:k]
    if lam_s.min() < -1e-12:
        return None
    cand = np.zeros_like(lam)
    cand[support] = np.maximum(lam_s, 0.0)
    total = cand.sum()
    if not np.isfinite(total) or total <= 0.0:
        return None
    return cand / total


def solve_simplex_qp(
    g, b, opts: Optional[SolverOptions] = None
) -> tuple[np.ndarray, float, SolverOutcome]:
    """Minimize lam^T G lam - b^T lam over the unit simplex (G PSD).

    Projected gradient with fixed step 1/L, L = 2 * lambda_max(G) from the
    Jacobi eigensolver; stops when the first-order gap drops to opts.tol.
    Every 32..64.. iterations a KKT solve on the active face is attempted,
    which usually lands the exact optimum long before the gradient loop
    would; the accepted point still has to pass the same gap test.
    """
    opts = opts or SolverOptions()
    gm = _as_symmat(g)
    gd = gm.dense()
    bv = np.asarray(b, dtype=float)
    n = gm.order
    if bv.shape != (n,):
        raise ValueError("b must match the order of G")
    try:
        w, _ = sym_eig_small(gm)
    except Exception as exc:  # pragma: no cover - eig on finite input succeeds
        out = SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"))
        out.info["error"] = str(exc)
        return np.full(n, np.nan), float("nan"), out
    wmax = float(w[-1])
    if w[0] < -1e-9 * max(1.0, abs(wmax)):
        raise ValueError("G must be positive semidefinite")

    if wmax <= 0.0:
        # G vanishes: pure linear minimization over the simplex, closed form
        j = int(np.argmax(bv))
        lam = np.zeros(n)
        lam[j] = 1.0
        value = -float(bv[j])
        grad = 2.0 * gd @ lam - bv
        out = SolverOutcome(
            SolverStatus.CONVERGED,
            value,
            residuals={"first_order_gap": _qp_gap(grad, lam), "simplex_gap": 0.0},
            info={"iterations": 0, "mode": "linear"},
        )
        return lam, value, out

    step = 1.0 / (2.0 * wmax)
    lam = np.full(n, 1.0 / n)
    status = SolverStatus.ITERATION_LIMIT
    gap = np.inf
    next_polish = 32
    max_iters = 200_000
    it = 0
    while it < max_iters:
        grad = 2.0 * gd @ lam - bv
        gap = _qp_gap(grad, lam)
        if gap <= opts.tol:
            status = SolverStatus.CONVERGED
            break
        if it >= next_polish:
            next_polish *= 2
            cand = _qp_face_polish(gd, bv, lam)
            if cand is not None:
                cgrad = 2.0 * gd @ cand - bv
                cgap = _qp_gap(cgrad, cand)
                if cgap <= opts.tol:
                    lam, gap = cand, cgap
                    status = SolverStatus.CONVERGED
                    break
        lam = simplex_project(lam - step * grad)
        it += 1
    value = float(lam @ gd @ lam - bv @ lam)
    out = SolverOutcome(
        status,
        value,
        residuals={"first_order_gap": float(gap), "simplex_gap": abs(float(lam.sum()) - 1.0)},
        info={"iterations": it},
    )
    return lam, value, out


# --- barrier machinery over ball intersections --------------------------------


def _check_ball_problem(region: Region):
    if len(region) > MAX_ORDER:
        raise ValueError(f"at most {MAX_ORDER} balls supported")
    if region.dim > MAX_DIM:
        raise ValueError(f"at most {MAX_DIM} dimensions supported")


def _margin(region: Region, x: np.ndarray) -> float:
    return float((region.radii - row_norms(x - region.centers)).min())


def find_interior_point(
    region: Region, opts: Optional[SolverOptions] = None
) -> Optional[tuple[np.ndarray, float]]:
    """Find a strictly interior point of the ball intersection.

    Maximizes the common slack s with constraints ||x - a_i|| <= r_i - s via
    a log-barrier on the cone form (r_i - s)^2 - ||x - a_i||^2 > 0, starting
    from the anchor centroid (any start is strictly feasible for s low
    enough).  Returns (point, margin) or None when the interior is certified
    smaller than 1e-9 of the region scale.
    """
    opts = opts or SolverOptions()
    _check_ball_problem(region)
    centers, radii = region.centers, region.radii
    scale = region.max_radius
    if scale <= 0.0:
        x = centers[0]
        return (x, 0.0) if _margin(region, x) >= 0.0 else None
    n = region.dim
    num = len(region)
    x = centers.mean(axis=0)
    m0 = _margin(region, x)
    if m0 >= 0.02 * scale:
        return x, m0
    s = m0 - 0.5 * scale
    nu = 2.0 * num
    t = nu / scale
    accept_margin = 1e-4 * scale
    degenerate_cut = 1e-9 * scale
    y = np.concatenate([x, [s]])
    for _ in range(opts.max_outer + 8):
        y = _phase1_center(y, t, centers, radii, opts.max_newton)
        xc, sc = y[:n], float(y[n])
        gap = nu / t
        mc = _margin(region, xc)
        if mc >= accept_margin:
            return xc, mc
        if sc + gap < degenerate_cut:
            return None
        if sc > 0.0 and gap <= 0.5 * sc:
            return xc, mc
        t *= opts.barrier_growth
    return (xc, mc) if mc > 0.0 else None


def _phase1_center(y: np.ndarray, t: float, centers: np.ndarray, radii: np.ndarray, max_newton: int) -> np.ndarray:
    """Damped Newton on phi(x, s) = t*s + sum log((r_i - s)^2 - ||x - a_i||^2)."""
    n = centers.shape[1]

    def slacks(yv):
        xv, sv = yv[:n], yv[n]
        rs = radii - sv
        if (rs <= 0.0).any():
            return None, None
        diffs = xv - centers
        g = rs * rs - (diffs * diffs).sum(axis=1)
        if (g <= 0.0).any():
            return None, None
        return g, diffs

    def phi(yv):
        g, _ = slacks(yv)
        if g is None:
            return -np.inf
        return t * yv[n] + float(np.log(g).sum())

    for _ in range(max_newton):
        g, diffs = slacks(y)
        rs = radii - y[n]
        inv_g = 1.0 / g
        # dg/dx = -2 diffs, dg/ds = -2 (r - s); d2g = diag(-2 I, 2)
        grad = np.zeros(n + 1)
        grad[:n] = -2.0 * (diffs * inv_g[:, None]).sum(axis=0)
        grad[n] = t - 2.0 * float((rs * inv_g).sum())
        dg = np.concatenate([-2.0 * diffs, (-2.0 * rs)[:, None]], axis=1)
        hess = np.zeros((n + 1, n + 1))
        hess[:n, :n] = -2.0 * inv_g.sum() * np.eye(n)
        hess[n, n] = 2.0 * inv_g.sum()
        hess -= (dg * inv_g[:, None] ** 2).T @ dg
        try:
            d = np.linalg.solve(-hess, grad)
        except np.linalg.LinAlgError:
            d = np.linalg.lstsq(-hess, grad, rcond=None)[0]
        dec2 = float(grad @ d)
        if not np.isfinite(dec2) or dec2 <= _NEWTON_DEC2_POLISH:
            break
        base = phi(y)
        beta = 1.0
        for _ in range(60):
            cand = y + beta * d
            if phi(cand) >= base + 0.25 * beta * dec2:
                y = cand
                break
            beta *= 0.5
        else:
            break
    return y


def _ball_newton(
    x: np.ndarray,
    t: float,
    centers: np.ndarray,
    rad2: np.ndarray,
    obj,
    max_newton: int,
) -> tuple[np.ndarray, bool]:
    """Damped Newton on phi(x) = t*obj(x) + sum log(r_i^2 - ||x - a_i||^2).

    `obj` maps x to (value, gradient, hessian) of a concave objective.
    Returns the iterate and whether it is centered (tiny Newton decrement);
    the barrier duality certificate is only trusted for centered points.
    """
    n = x.size

    def slacks(xv):
        diffs = xv - centers
        s = rad2 - (diffs * diffs).sum(axis=1)
        return (s, diffs) if (s > 0.0).all() else (None, None)

    def phi(xv):
        s, _ = slacks(xv)
        if s is None:
            return -np.inf
        return t * obj(xv)[0] + float(np.log(s).sum())

    dec2 = np.inf
    polish_left = 1
    for _ in range(max_newton):
        s, diffs = slacks(x)
        _, og, oh = obj(x)
        inv_s = 1.0 / s
        grad = t * og - 2.0 * (diffs * inv_s[:, None]).sum(axis=0)
        scaled = diffs * inv_s[:, None]
        hess = t * oh - 2.0 * inv_s.sum() * np.eye(n) - 4.0 * scaled.T @ scaled
        try:
            d = np.linalg.solve(-hess, grad)
        except np.linalg.LinAlgError:
            d = np.linalg.lstsq(-hess, grad, rcond=None)[0]
        dec2 = float(grad @ d)
        if not np.isfinite(dec2) or dec2 <= _NEWTON_DEC2_POLISH:
            break
        if dec2 <= _NEWTON_DEC2_OK:
            # centered; one polish step sharpens the value, then stop
            if polish_left == 0:
                break
            polish_left -= 1
        base = t * obj(x)[0] + float(np.log(s).sum())
        cand = x + d
        if phi(cand) >= base + 0.25 * dec2:
            x = cand
            continue
        # full step rejected: cap beta at the slack boundary, then backtrack
        # s_i(beta) = s_i - 2 beta d.(x - a_i) - beta^2 ||d||^2
        q = float(d @ d)
        beta = 1.0
        if q > 0.0:
            p = diffs @ d
            beta = min(1.0, 0.99 * float(((-p + np.sqrt(p * p + q * s)) / q).min()))
        moved = False
        for _ in range(60):
            cand = x + beta * d
            if phi(cand) >= base + 0.25 * beta * dec2:
                x = cand
                moved = True
                break
            beta *= 0.5
        if not moved:
            break
    return x, bool(np.isfinite(dec2) and dec2 <= _NEWTON_DEC2_OK)


def _resolve_interior(
    region: Region, opts: SolverOptions, interior: Optional[np.ndarray]
) -> tuple[Optional[np.ndarray], Region, bool]:
    """Interior start for a barrier run, inflating radii once if necessary.

    Inflation enlarges the feasible set, so maximization results stay valid
    upper bounds and minimum distances stay valid lower bounds.
    """
    if interior is not None:
        x = as_point(interior)
        if _margin(region, x) > 0.0:
            return x, region, False
    found = find_interior_point(region, opts)
    if found is not None:
        return found[0], region, False
    inflated = region.inflate(INFLATION_FACTOR * max(region.max_radius, 1.0))
    found = find_interior_point(inflated, opts)
    if found is None:
        return None, region, True
    return found[0], inflated, True


def maximize_linear_over_balls(
    c,
    region: Region,
    opts: Optional[SolverOptions] = None,
    interior: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, float, SolverOutcome]:
    """Maximize c^T x over the intersection of balls.

    Log-barrier path following; the returned value sits within tol*scale of
    the optimum (certified by the barrier duality measure) and the returned
    point satisfies every constraint of the region actually solved.  When no
    strictly interior start exists the radii are inflated by 1e-7*scale and
    the outcome is flagged NEEDS_INFLATION (the value is then an upper bound
    for the original region).
    """
    opts = opts or SolverOptions()
    _check_ball_problem(region)
    cv = as_point(c)
    if cv.size != region.dim:
        raise ValueError("dimension mismatch between objective and region")
    x0, reg, inflated = _resolve_interior(region, opts, interior)
    if x0 is None:
        return (
            np.full(region.dim, np.nan),
            float("nan"),
            SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"),
                          info={"error": "no strictly interior point found"}),
        )
    centers, radii = reg.centers, reg.radii
    rad2 = radii * radii
    scale = reg.max_radius
    nu = float(len(reg))
    cnorm = float(np.sqrt(cv @ cv))
    gap_target = opts.tol * scale * max(cnorm, 1.0)
    zero_h = np.zeros((cv.size, cv.size))

    def obj(xv):
        return float(cv @ xv), cv, zero_h

    t = nu / max(scale * max(cnorm, 1.0), 1e-300)
    x = x0
    status = SolverStatus.ITERATION_LIMIT
    for _ in range(opts.max_outer):
        x, centered = _ball_newton(x, t, centers, rad2, obj, opts.max_newton)
        if centered and _GAP_SAFETY * nu / t <= gap_target:
            status = SolverStatus.CONVERGED
            break
        t *= opts.barrier_growth
    if inflated and status == SolverStatus.CONVERGED:
        status = SolverStatus.NEEDS_INFLATION
    value = float(cv @ x)
    violation = float(np.maximum(row_norms(x - reg.centers) - reg.radii, 0.0).max())
    out = SolverOutcome(
        status,
        value,
        residuals={"constraint_violation": violation, "gap": _GAP_SAFETY * nu / t},
        info={"inflated": inflated, "t_final": t},
    )
    return x, value, out


def nearest_point_in_region(
    target,
    region: Region,
    opts: Optional[SolverOptions] = None,
    interior: Optional[np.ndarray] = None,
) -> tuple[np.ndarray, float, SolverOutcome]:
    """Minimize ||target - x|| over the intersection of balls.

    Same barrier machinery as maximize_linear_over_balls with a concave
    quadratic objective.  Stops when the squared-distance duality measure is
    below max((1e-7*scale)^2, tol*scale*distance), i.e. the distance is
    accurate to roughly tol*scale in absolute terms.
    """
    opts = opts or SolverOptions()
    _check_ball_problem(region)
    tv = as_point(target)
    if tv.size != region.dim:
        raise ValueError("dimension mismatch between target and region")
    x0, reg, inflated = _resolve_interior(region, opts, interior)
    if x0 is None:
        return (
            np.full(region.dim, np.nan),
            float("nan"),
            SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"),
                          info={"error": "no strictly interior point found"}),
        )
    centers, radii = reg.centers, reg.radii
    rad2 = radii * radii
    scale = reg.max_radius
    nu = float(len(reg))
    eye2 = -2.0 * np.eye(tv.size)

    def obj(xv):
        d = xv - tv
        return -float(d @ d), -2.0 * d, eye2

    t = nu / max(scale * scale, 1e-300)
    x = x0
    status = SolverStatus.ITERATION_LIMIT
    # squared-distance gap g yields distance error <= g / (2 dist); the floor
    # covers near-zero distances
    floor = (1e-7 * scale) ** 2
    for _ in range(opts.max_outer + 8):
        x, centered = _ball_newton(x, t, centers, rad2, obj, opts.max_newton)
        dist = float(np.sqrt(((x - tv) ** 2).sum()))
        if centered and _GAP_SAFETY * nu / t <= max(floor, 2.0 * dist * opts.tol * scale):
            status = SolverStatus.CONVERGED
            break
        t *= opts.barrier_growth
    if inflated and status == SolverStatus.CONVERGED:
        status = SolverStatus.NEEDS_INFLATION
    dist = float(np.sqrt(((x - tv) ** 2).sum()))
    violation = float(np.maximum(row_norms(x - reg.centers) - reg.radii, 0.0).max())
    out = SolverOutcome(
        status,
        dist,
        residuals={"constraint_violation": violation, "gap": _GAP_SAFETY * nu / t},
        info={"inflated": inflated, "t_final": t},
    )
    return x, dist, out


# --- tiny SDP ------------------------------------------------------------------


def lift_strictly_feasible(
    x0, constraints: Sequence, scale: float
) -> Optional[np.ndarray]:
    """Build a strictly feasible start Z for solve_tiny_sdp from a point x0.

    Z = v v^T + sigma * diag(1,...,1,0) with v = (x0, 1); sigma is halved
    from 1e-2*scale^2 until every tr(B_i Z) < 0.  Returns a dense matrix or
    None when even tiny sigma fails (x0 not strictly inside).
    """
    xv = as_point(x0)
    m = xv.size + 1
    mats = [_as_symmat(c).dense() for c in constraints]
    v = np.concatenate([xv, [1.0]])
    zz = np.outer(v, v)
    bump = np.eye(m)
    bump[-1, -1] = 0.0
    sigma = 1e-2 * max(scale, 1e-30) ** 2
    for _ in range(80):
        cand = zz + sigma * bump
        if all(float((b * cand).sum()) < 0.0 for b in mats):
            return cand
        sigma *= 0.5
    return None


def solve_tiny_sdp(
    b0,
    constraints: Sequence,
    opts: Optional[SolverOptions] = None,
    z0=None,
) -> tuple[SymMat, float, SolverOutcome]:
    """Maximize tr(B0 Z) s.t. tr(B_i Z) <= 0, Z PSD, Z[m-1, m-1] = 1.

    Primal log-barrier: maximize t*tr(B0 Z) + logdet Z + sum log(-tr(B_i Z))
    over the free lower-triangular coordinates (the corner stays pinned at 1),
    with damped Newton steps whose line search keeps Z positive definite and
    all trace slacks positive.  t grows by barrier_growth until the duality
    measure (m + #constraints)/t reaches opts.tol.

    A strictly feasible z0 must be supplied (see lift_strictly_feasible); the
    generic problem shape carries no geometry to construct one from.
    """
    opts = opts or SolverOptions()
    b0m = _as_symmat(b0)
    m = b0m.order
    mats = [_as_symmat(c) for c in constraints]
    for c in mats:
        if c.order != m:
            raise ValueError("constraint order mismatch")
    if z0 is None:
        raise ValueError("solve_tiny_sdp needs a strictly feasible starting Z (z0)")
    z = _as_symmat(z0).dense().copy()
    z[m - 1, m - 1] = 1.0

    num = len(mats)
    nu = float(m + num)
    p_idx, q_idx = np.tril_indices(m)
    keep = ~((p_idx == m - 1) & (q_idx == m - 1))
    p_idx, q_idx = p_idx[keep], q_idx[keep]
    mu = np.where(p_idx == q_idx, 1.0, 2.0)

    def packvec(dense):
        return mu * dense[p_idx, q_idx]

    b0d = b0m.dense()
    b0v = packvec(b0d)
    b0_off = b0d[m - 1, m - 1]
    cmat = np.array([packvec(c.dense()) for c in mats])  # (num, d)
    c_off = np.array([c.dense()[m - 1, m - 1] for c in mats])

    def unpack_delta(dvec):
        dm = np.zeros((m, m))
        dm[p_idx, q_idx] = dvec
        dm[q_idx, p_idx] = dvec
        return dm

    def feas(zd):
        zf = zd[p_idx, q_idx]
        s = -(cmat @ zf + c_off)
        if (s <= 0.0).any():
            return None, None
        try:
            chol = np.linalg.cholesky(zd)
        except np.linalg.LinAlgError:
            return None, None
        return chol, s

    def phi(zd, t):
        chol, s = feas(zd)
        if chol is None:
            return -np.inf
        logdet = 2.0 * float(np.log(np.diag(chol)).sum())
        zf = zd[p_idx, q_idx]
        return t * float(b0v @ zf + b0_off) + logdet + float(np.log(s).sum())

    chol, s = feas(z)
    if chol is None:
        return (
            SymMat.from_dense(z),
            float("nan"),
            SolverOutcome(SolverStatus.NUMERICAL_FAILURE, float("nan"),
                          info={"error": "z0 is not strictly feasible"}),
        )

    val0 = float(b0v @ z[p_idx, q_idx] + b0_off)
    t = nu / max(1.0, abs(val0))
    status = SolverStatus.ITERATION_LIMIT
    value_path = []
    failure = None
    newton_steps = 0
    pp = (p_idx[:, None], p_idx[None, :])
    qq = (q_idx[:, None], q_idx[None, :])
    pq = (p_idx[:, None], q_idx[None, :])
    qp = (q_idx[:, None], p_idx[None, :])
    mumu = -0.5 * np.outer(mu, mu)
    for _ in range(opts.max_outer + 4):
        dec2 = np.inf
        polish_left = 2
        for _ in range(opts.max_newton):
            chol, s = feas(z)
            if chol is None:  # pragma: no cover - line search preserves feasibility
                failure = "iterate left the feasible cone"
                break
            try:
                # invert through the Cholesky factor; near the boundary Z is
                # close to rank one and a plain LU inverse can fail
                li = np.linalg.inv(chol)
            except np.linalg.LinAlgError:
                failure = "barrier matrix numerically singular"
                break
            w = li.T @ li
            w = 0.5 * (w + w.T)
            grad = t * b0v + mu * w[p_idx, q_idx] - cmat.T @ (1.0 / s)
            h_ld = mumu * (w[pp] * w[qq] + w[pq] * w[qp])
            cs = cmat / s[:, None]
            hess = h_ld - cs.T @ cs
            try:
                d = np.linalg.solve(-hess, grad)
            except np.linalg.LinAlgError:
                d = np.linalg.lstsq(-hess, grad, rcond=None)[0]
            dec2 = float(grad @ d)
            if not np.isfinite(dec2):
                failure = "newton system produced non-finite step"
                break
            if dec2 <= _NEWTON_DEC2_POLISH:
                break
            if dec2 <= _NEWTON_DEC2_OK:
                if polish_left == 0:
                    break
                polish_left -= 1
            newton_steps += 1
            dm = unpack_delta(d)
            logdet = 2.0 * float(np.log(np.diag(chol)).sum())
            base = t * float(b0v @ z[p_idx, q_idx] + b0_off) + logdet + float(np.log(s).sum())
            cand = z + dm
            if phi(cand, t) >= base + 0.25 * dec2:
                z = cand
                continue
            # full step rejected: cap at the cone/slack boundary, backtrack
            beta = 1.0
            cd = cmat @ d
            pos = cd > 0.0
            if pos.any():
                beta = min(beta, 0.99 * float((s[pos] / cd[pos]).min()))
            lam_min = float(np.linalg.eigvalsh(li @ dm @ li.T).min())
            if lam_min < 0.0:
                beta = min(beta, 0.99 / (-lam_min))
            moved = False
            for _ in range(60):
                cand = z + beta * dm
                if phi(cand, t) >= base + 0.25 * beta * dec2:
                    z = cand
                    moved = True
                    break
                beta *= 0.5
            if not moved:
                break
        if failure is not None:
            break
        centered = bool(np.isfinite(dec2) and dec2 <= _NEWTON_DEC2_OK)
        value_path.append(float(b0v @ z[p_idx, q_idx] + b0_off))
        if centered and _GAP_SAFETY * nu / t <= opts.tol:
            status = SolverStatus.CONVERGED
            break
        t *= opts.barrier_growth

    value = float(b0v @ z[p_idx, q_idx] + b0_off)
    zf = z[p_idx, q_idx]
    slack_viol = float(np.maximum(cmat @ zf + c_off, 0.0).max()) if num else 0.0
    eigmin = float(sym_eig_small(SymMat.from_dense(z))[0][0])
    out = SolverOutcome(
        SolverStatus.NUMERICAL_FAILURE if failure is not None else status,
        value,
        residuals={
            "gap": _GAP_SAFETY * nu / t,
            "min_eig": eigmin,
            "max_constraint": slack_viol,
            "corner_error": abs(z[m - 1, m - 1] - 1.0),
        },
        info={"value_path": value_path, "t_final": t, "newton_steps": newton_steps,
              **({"error": failure} if failure else {})},
    )
    return SymMat.from_dense(z), value, out


def region_constraint_mats(region: Region) -> list[SymMat]:
    """Ball membership as trace constraints: tr(B_i (x,1)(x,1)^T) <= 0.

    B_i = [[I, -a_i], [-a_i^T, ||a_i||^2 - r_i^2]] encodes ||x - a_i||^2 <= r_i^2.
    """
    n = region.dim
    mats = []
    for a, r in zip(region.centers, region.radii):
        b = np.zeros((n + 1, n + 1))
        b[:n, :n] = np.eye(n)
        b[:n, n] = -a
        b[n, :n] = -a
        b[n, n] = float(a @ a) - float(r) ** 2
        mats.append(SymMat.from_dense(b))
    return mats
