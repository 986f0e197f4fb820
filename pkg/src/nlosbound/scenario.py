"""Random network generation and the positively biased range-measurement model.

A scenario is one experiment: anchors at known positions, a target at an
unknown position, and one measured range per anchor.  Ranges are the true
distances plus a nonnegative error draw, so the region built from a scenario
always contains the true target.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .geometry import Ball, Region, as_point, row_norms
from .rng import RngState, mix64

# sub-seed tags for the per-purpose streams of one scenario/trial
TAG_ANCHORS = 0
TAG_TARGET = 1
TAG_NOISE = 2
TAG_INITS = 3


@dataclass(frozen=True)
class Exponential:
    """Exponential error with rate `rate` (1/m); mean is 1/rate meters."""

    rate: float

    def __post_init__(self):
        if not (self.rate > 0.0) or not math.isfinite(self.rate):
            raise ValueError("exponential rate must be positive and finite")


@dataclass(frozen=True)
class Uniform:
    """Uniform error on [0, upper) meters."""

    upper: float

    def __post_init__(self):
        if not (self.upper > 0.0) or not math.isfinite(self.upper):
            raise ValueError("uniform upper bound must be positive and finite")


@dataclass(frozen=True)
class PositiveGaussian:
    """Gaussian error resampled until nonnegative; use a large positive mean."""

    mean: float
    stddev: float

    def __post_init__(self):
        if not (self.mean > 0.0) or not (self.stddev > 0.0):
            raise ValueError("positive-gaussian mean and stddev must be positive")


NoiseModel = Union[Exponential, Uniform, PositiveGaussian]


def exponential_inverse_cdf(u: float, rate: float) -> float:
    """Inverse CDF of the exponential law: eps = -ln(u)/rate for u in (0, 1]."""
    if not (0.0 < u <= 1.0):
        raise ValueError("u must lie in (0, 1]")
    return -math.log(u) / rate


def sample_noise(model: NoiseModel, rng: RngState) -> float:
    """One nonnegative error draw from the model."""
    if isinstance(model, Exponential):
        return exponential_inverse_cdf(rng.next_unit(), model.rate)
    if isinstance(model, Uniform):
        return model.upper * rng.next_float()
    if isinstance(model, PositiveGaussian):
        while True:
            # Box-Muller; u1 in (0,1] keeps the log finite
            u1 = rng.next_unit()
            u2 = rng.next_float()
            z = math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
            eps = model.mean + model.stddev * z
            if eps >= 0.0:
                return eps
    raise TypeError(f"unknown noise model: {model!r}")


def sample_noise_array(model: NoiseModel, rng: RngState, count: int) -> np.ndarray:
    """Vectorized draws; same streams as sample_noise for exp/uniform models."""
    if isinstance(model, Exponential):
        return -np.log(rng.units_array(count)) / model.rate
    if isinstance(model, Uniform):
        return model.upper * rng.floats_array(count)
    if isinstance(model, PositiveGaussian):
        out = np.empty(count)
        filled = 0
        while filled < count:
            m = count - filled
            u1 = rng.units_array(m)
            u2 = rng.floats_array(m)
            z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
            eps = model.mean + model.stddev * z
            keep = eps[eps >= 0.0]
            out[filled : filled + keep.size] = keep
            filled += keep.size
        return out
    raise TypeError(f"unknown noise model: {model!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    """Deployment parameters: dimension, anchor count, cube side (m), noise law."""

    dim: int = 3
    num_anchors: int = 10
    cube_side: float = 10.0
    noise: NoiseModel = Exponential(rate=1.0)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.num_anchors < 1:
            raise ValueError("num_anchors must be >= 1")
        if not (self.cube_side > 0.0):
            raise ValueError("cube_side must be positive")


@dataclass(frozen=True)
class Scenario:
    """Anchors, measured ranges, and (when known) the true target position."""

    anchors: np.ndarray  # (N, n)
    ranges: np.ndarray  # (N,)
    true_target: Optional[np.ndarray] = None

    def __post_init__(self):
        a = np.asarray(self.anchors, dtype=float)
        r = np.asarray(self.ranges, dtype=float)
        if a.ndim != 2 or a.shape[0] != r.size:
            raise ValueError("anchors must be (N, n) with one range per anchor")
        if np.any(r < 0.0) or not np.all(np.isfinite(r)) or not np.all(np.isfinite(a)):
            raise ValueError("ranges must be finite and nonnegative, anchors finite")
        object.__setattr__(self, "anchors", a)
        object.__setattr__(self, "ranges", r)
        if self.true_target is not None:
            object.__setattr__(self, "true_target", as_point(self.true_target))

    @property
    def dim(self) -> int:
        return self.anchors.shape[1]

    @property
    def num_anchors(self) -> int:
        return self.anchors.shape[0]

    def region(self) -> Region:
        return Region(Ball(a, d) for a, d in zip(self.anchors, self.ranges))


def generate_scenario(cfg: ScenarioConfig, seed: int) -> Scenario:
    """Draw one scenario: anchors and target i.i.d. uniform in [0, L)^n,
    ranges = true distance + noise.

    Sub-seeds for anchors / target / noise are derived from `seed` with mix64,
    so any one stream can be replayed in isolation.
    """
    n, num = cfg.dim, cfg.num_anchors
    anchors = (
        cfg.cube_side
        * RngState(mix64(seed, TAG_ANCHORS)).floats_array(num * n).reshape(num, n)
    )
    target = cfg.cube_side * RngState(mix64(seed, TAG_TARGET)).floats_array(n)
    eps = sample_noise_array(cfg.noise, RngState(mix64(seed, TAG_NOISE)), num)
    ranges = row_norms(anchors - target) + eps
    return Scenario(anchors=anchors, ranges=ranges, true_target=target)


# --- JSON serialization -----------------------------------------------------
# Schema: {"dim": int, "anchors": [[f,...],...], "ranges": [f,...],
#          "target": [f,...] | null}; floats carry 17 significant digits.


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def scenario_to_json(s: Scenario) -> str:
    anchors = ", ".join("[" + ", ".join(_f17(v) for v in row) + "]" for row in s.anchors)
    ranges = ", ".join(_f17(v) for v in s.ranges)
    if s.true_target is None:
        target = "null"
    else:
        target = "[" + ", ".join(_f17(v) for v in s.true_target) + "]"
    return (
        '{"dim": %d, "anchors": [%s], "ranges": [%s], "target": %s}\n'
        % (s.dim, anchors, ranges, target)
    )


def scenario_from_json(text: str) -> Scenario:
    doc = json.loads(text)
    try:
        dim = int(doc["dim"])
        anchors = np.asarray(doc["anchors"], dtype=float)
        ranges = np.asarray(doc["ranges"], dtype=float)
        target = doc.get("target")
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed scenario document: {exc}") from exc
    if anchors.ndim != 2 or anchors.shape[1] != dim:
        raise ValueError("malformed scenario document: anchors do not match dim")
    tt = None if target is None else np.asarray(target, dtype=float)
    return Scenario(anchors=anchors, ranges=ranges, true_target=tt)


def save_scenario(s: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_to_json(s))


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return scenario_from_json(fh.read())
