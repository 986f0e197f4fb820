"""Monte-Carlo campaigns: per-trial estimates, bounds, and normalized errors.

One trial = one random network.  The trial seed is mix64(master_seed, trial),
anchors/target/noise use the scenario sub-streams, and initialization k of the
trial draws from mix64(mix64(trial_seed, TAG_INITS), k).  Initialization 0
produces the single-run position error e; the empirical maximum e_max is taken
over initializations 0..R (including the single run, so e <= e_max by
construction).  bound1 is evaluated both at the estimate attaining e_max and
at the single-run estimate; the trial CSV carries the e_max pairing.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .bounds import bound1, bound2, bound3_lp, bound3_socp, distance_to_region
from .geometry import Region
from .pocs import pocs_estimate_batch
from .rng import RngState, mix64
from .scenario import TAG_INITS, Scenario, ScenarioConfig, generate_scenario
from .solvers import SolverOptions, SolverStatus, find_interior_point

ALL_BOUNDS = ("bound1", "bound2", "bound3_socp", "bound3_lp", "ell1")

_STATUS_CODE = {
    SolverStatus.CONVERGED: "C",
    SolverStatus.ITERATION_LIMIT: "L",
    SolverStatus.NEEDS_INFLATION: "I",
    SolverStatus.NUMERICAL_FAILURE: "F",
}


@dataclass(frozen=True)
class SimConfig:
    scenario: ScenarioConfig = ScenarioConfig()
    trials: int = 1000
    pocs_inits: int = 1  # random initializations beyond the single run
    master_seed: int = 0
    bounds: tuple = ALL_BOUNDS
    pocs_max_iters: int = 500
    solver: SolverOptions = field(default_factory=SolverOptions)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.pocs_inits < 1:
            raise ValueError("pocs_inits must be >= 1")
        unknown = set(self.bounds) - set(ALL_BOUNDS)
        if unknown:
            raise ValueError(f"unknown bounds requested: {sorted(unknown)}")


@dataclass
class TrialRecord:
    trial: int
    e: float
    e_max: float
    b1_upper: float  # at the estimate attaining e_max
    b1_lower: float
    b1_upper_single: float  # at the single-run estimate (pairs with e)
    b1_lower_single: float
    b2: float
    b3_socp: float
    b3_lp: float
    ell1: float
    normalized: dict = field(default_factory=dict)  # (v - e)/e per bound
    statuses: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    @property
    def status_flags(self) -> str:
        order = ("b1", "b2", "socp", "lp", "ell1")
        return ",".join(f"{k}:{self.statuses.get(k, '-')}" for k in order)


@dataclass
class CdfSeries:
    """Right-continuous empirical CDF: P(x) = #{values <= x} / count."""

    values: np.ndarray  # sorted ascending
    probs: np.ndarray  # k/T for k = 1..T

    def evaluate(self, x: float) -> float:
        return float(np.searchsorted(self.values, x, side="right")) / self.values.size


def empirical_cdf(values: Sequence[float]) -> CdfSeries:
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValueError("empirical_cdf needs at least one value")
    if not np.all(np.isfinite(v)):
        raise ValueError("empirical_cdf needs finite values")
    s = np.sort(v)
    return CdfSeries(values=s, probs=np.arange(1, s.size + 1) / s.size)


def _init_points(trial_seed: int, count: int, cfg: ScenarioConfig) -> np.ndarray:
    base = mix64(trial_seed, TAG_INITS)
    pts = np.empty((count, cfg.dim))
    for k in range(count):
        pts[k] = cfg.cube_side * RngState(mix64(base, k)).floats_array(cfg.dim)
    return pts


def run_trial(cfg: SimConfig, trial_index: int) -> TrialRecord:
    """One full trial: scenario, POCS runs, configured bounds."""
    tseed = mix64(cfg.master_seed, trial_index)
    scn = generate_scenario(cfg.scenario, tseed)
    region = scn.region()
    target = scn.true_target

    x0s = _init_points(tseed, cfg.pocs_inits + 1, cfg.scenario)
    pts, _, _, _ = pocs_estimate_batch(region, x0s, max_iters=cfg.pocs_max_iters)
    errors = np.sqrt(((pts - target) ** 2).sum(axis=1))
    e = float(errors[0])
    k_max = int(np.argmax(errors))
    e_max = float(errors[k_max])
    est_single = pts[0]
    est_max = pts[k_max]

    nan = float("nan")
    rec = TrialRecord(
        trial=trial_index, e=e, e_max=e_max,
        b1_upper=nan, b1_lower=nan, b1_upper_single=nan, b1_lower_single=nan,
        b2=nan, b3_socp=nan, b3_lp=nan, ell1=nan,
    )

    def note(key, status, inflated=False):
        code = _STATUS_CODE.get(status, "F")
        if inflated and code == "C":
            code = "I"
        rec.statuses[key] = code

    # one interior point serves bound1's lift, the box maximizations, and ell1
    interior = None
    if {"bound1", "bound3_socp", "ell1"} & set(cfg.bounds):
        found = find_interior_point(region, cfg.solver)
        interior = None if found is None else found[0]

    if "bound1" in cfg.bounds:
        t0 = time.perf_counter()
        r_max = bound1(est_max, region, cfg.solver, interior=interior)
        r_single = (
            r_max
            if k_max == 0
            else bound1(est_single, region, cfg.solver, interior=interior)
        )
        rec.timings["bound1"] = time.perf_counter() - t0
        rec.b1_upper, rec.b1_lower = r_max.upper, r_max.lower
        rec.b1_upper_single, rec.b1_lower_single = r_single.upper, r_single.lower
        note("b1", r_max.outcome.status, r_max.inflated)
    if "bound2" in cfg.bounds:
        t0 = time.perf_counter()
        r2 = bound2(region, cfg.solver)
        rec.timings["bound2"] = time.perf_counter() - t0
        rec.b2 = r2.diameter_bound
        note("b2", r2.outcome.status)
    if "bound3_socp" in cfg.bounds:
        t0 = time.perf_counter()
        r3 = bound3_socp(region, cfg.solver, interior=interior)
        rec.timings["bound3_socp"] = time.perf_counter() - t0
        rec.b3_socp = r3.value
        worst = SolverStatus.CONVERGED
        for out in r3.outcomes:
            if out.status != SolverStatus.CONVERGED:
                worst = out.status
        note("socp", worst, r3.inflated)
    if "bound3_lp" in cfg.bounds:
        t0 = time.perf_counter()
        r3l = bound3_lp(region)
        rec.timings["bound3_lp"] = time.perf_counter() - t0
        rec.b3_lp = r3l.value
        rec.statuses["lp"] = "C"
    if "ell1" in cfg.bounds:
        t0 = time.perf_counter()
        try:
            rec.ell1 = distance_to_region(est_single, region, cfg.solver, interior=interior)
            rec.statuses["ell1"] = "C"
        except ArithmeticError:
            rec.statuses["ell1"] = "F"
        rec.timings["ell1"] = time.perf_counter() - t0

    if e > 0.0:
        pairs = {
            "bound1": rec.b1_upper_single,
            "bound2": rec.b2,
            "bound3_socp": rec.b3_socp,
            "bound3_lp": rec.b3_lp,
        }
        rec.normalized = {
            k: (v - e) / e for k, v in pairs.items() if math.isfinite(v)
        }
    return rec


@dataclass
class BatchResult:
    config: SimConfig
    records: list
    summary: dict


def run_batch(cfg: SimConfig) -> BatchResult:
    """Independent trials keyed by trial index; order of execution is irrelevant."""
    records = [run_trial(cfg, i) for i in range(cfg.trials)]
    return BatchResult(config=cfg, records=records, summary=_summarize(cfg, records))


def _quantiles(vals: np.ndarray) -> dict:
    if vals.size == 0:
        return {}
    return {
        "p25": float(np.quantile(vals, 0.25)),
        "p50": float(np.quantile(vals, 0.50)),
        "p75": float(np.quantile(vals, 0.75)),
        "p90": float(np.quantile(vals, 0.90)),
    }


def _summarize(cfg: SimConfig, records: list) -> dict:
    scale = cfg.scenario.cube_side
    tol = 1e-6
    violations = {}
    pairs = {
        "bound1": [("e", "b1_upper_single"), ("e_max", "b1_upper")],
        "bound2": [("e", "b2")],
        "bound3_socp": [("e", "b3_socp")],
        "bound3_lp": [("e", "b3_lp")],
    }
    for name, checks in pairs.items():
        if name not in cfg.bounds:
            continue
        count = 0
        for rec in records:
            for err_key, bound_key in checks:
                err = getattr(rec, err_key)
                val = getattr(rec, bound_key)
                if math.isfinite(val) and err > val + tol * max(val, scale):
                    count += 1
        violations[name] = count
    norm_q = {}
    for name in ("bound1", "bound2", "bound3_socp", "bound3_lp"):
        vals = np.array([r.normalized[name] for r in records if name in r.normalized])
        if vals.size:
            norm_q[name] = _quantiles(vals)
    mean_secs = {}
    for key in ("bound1", "bound2", "bound3_socp", "bound3_lp", "ell1"):
        ts = [r.timings[key] for r in records if key in r.timings]
        if ts:
            mean_secs[key] = float(np.mean(ts))
    status_counts: dict = {}
    for rec in records:
        for k, v in rec.statuses.items():
            status_counts.setdefault(k, {}).setdefault(v, 0)
            status_counts[k][v] += 1
    return {
        "trials": cfg.trials,
        "violations": violations,
        "normalized_quantiles": norm_q,
        "mean_seconds": mean_secs,
        "status_counts": status_counts,
    }


# --- CSV / file output --------------------------------------------------------

TRIAL_CSV_HEADER = "trial,N,n,e,e_max,b1_upper,b1_lower,b2,b3_socp,b3_lp,ell1,status_flags"


def _f12(x: float) -> str:
    return format(float(x), ".12g")


def trials_csv_lines(cfg: SimConfig, records: Iterable[TrialRecord]) -> list[str]:
    lines = [TRIAL_CSV_HEADER]
    n_anchors = cfg.scenario.num_anchors
    dim = cfg.scenario.dim
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.trial),
                    str(n_anchors),
                    str(dim),
                    _f12(r.e),
                    _f12(r.e_max),
                    _f12(r.b1_upper),
                    _f12(r.b1_lower),
                    _f12(r.b2),
                    _f12(r.b3_socp),
                    _f12(r.b3_lp),
                    _f12(r.ell1),
                    r.status_flags,
                ]
            )
        )
    return lines


def cdf_csv_lines(series: CdfSeries) -> list[str]:
    lines = ["x,p"]
    for x, p in zip(series.values, series.probs):
        lines.append(f"{_f12(x)},{_f12(p)}")
    return lines


def normalized_cdfs(records: Sequence[TrialRecord]) -> dict[str, CdfSeries]:
    """Empirical CDFs of the normalized errors (v - e)/e, one per bound."""
    out = {}
    for name in ("bound1", "bound2", "bound3_socp", "bound3_lp"):
        vals = [r.normalized[name] for r in records if name in r.normalized]
        vals = [v for v in vals if math.isfinite(v)]
        if vals:
            out[name] = empirical_cdf(vals)
    return out
