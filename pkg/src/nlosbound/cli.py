"""Command-line front end.

Two commands:

* `simulate` runs a seeded Monte-Carlo campaign and writes a trial CSV,
  per-bound CDF CSVs of the normalized errors, and a summary JSON.
* `bound` computes the bound report for a single scenario file, using a
  supplied estimate or a fresh feasible-point run.

Exit codes: 0 success, 2 invalid configuration, 3 I/O failure, 4 infeasible
region.  stderr carries diagnostics; stdout only carries data when no output
path is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from .bounds import bound1, bound2, bound3_lp, bound3_socp, distance_to_region
from .pocs import PocsOptions, pocs_estimate
from .scenario import (
    Exponential,
    PositiveGaussian,
    ScenarioConfig,
    Uniform,
    load_scenario,
)
from .sim import ALL_BOUNDS, SimConfig, cdf_csv_lines, normalized_cdfs, run_batch, trials_csv_lines
from .solvers import SolverOptions

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4


def parse_noise(spec: str):
    """Parse exp:RATE | uni:UPPER | posgauss:MEAN,STD."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "exp":
            return Exponential(rate=float(rest))
        if kind == "uni":
            return Uniform(upper=float(rest))
        if kind == "posgauss":
            mean_s, _, std_s = rest.partition(",")
            return PositiveGaussian(mean=float(mean_s), stddev=float(std_s))
    except ValueError as exc:
        raise ValueError(f"bad noise parameters in {spec!r}: {exc}") from exc
    raise ValueError(f"unknown noise kind {kind!r}; use exp:, uni:, or posgauss:")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlosbound")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo campaign")
    sim.add_argument("--anchors", type=int, default=None)
    sim.add_argument("--dim", type=int, default=None, choices=(2, 3))
    sim.add_argument("--trials", type=int, default=None)
    sim.add_argument("--inits", type=int, default=None,
                     help="random initializations for the empirical max error")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--noise", type=str, default=None,
                     help="exp:RATE | uni:UPPER | posgauss:MEAN,STD")
    sim.add_argument("--cube", type=float, default=None, help="cube side length (m)")
    sim.add_argument("--bounds", type=str, default=None,
                     help="comma list from bound1,bound2,bound3_socp,bound3_lp,ell1")
    sim.add_argument("--out", type=str, default=None, help="output directory")
    sim.add_argument("--config", type=str, default=None,
                     help="JSON config; overrides flags when both given")

    bnd = sub.add_parser("bound", help="bound a single scenario")
    bnd.add_argument("--scenario", type=str, required=True)
    bnd.add_argument("--estimate", type=str, default=None, help='e.g. "2,0" or "1,2,3"')
    bnd.add_argument("--report", type=str, default=None, help="report JSON path")
    return parser


_SIM_DEFAULTS = {
    "anchors": 10,
    "dim": 3,
    "trials": 100,
    "inits": 1,
    "seed": 0,
    "noise": "exp:1.0",
    "cube": 10.0,
    "bounds": ",".join(ALL_BOUNDS),
}


def _merge_config(args: argparse.Namespace) -> dict:
    """Resolve flag/config precedence: config file wins, warning on conflict."""
    merged = {k: getattr(args, k) for k in _SIM_DEFAULTS}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        unknown = set(doc) - set(_SIM_DEFAULTS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key, val in doc.items():
            if merged[key] is not None and merged[key] != val:
                print(
                    f"warning: --config overrides --{key}={merged[key]} with {val}",
                    file=sys.stderr,
                )
            merged[key] = val
    for key, default in _SIM_DEFAULTS.items():
        if merged[key] is None:
            merged[key] = default
    return merged


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o)}")


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        cfgmap = _merge_config(args)
        if cfgmap["anchors"] < 1:
            raise ValueError("--anchors must be >= 1")
        if cfgmap["trials"] < 1:
            raise ValueError("--trials must be >= 1")
        if cfgmap["inits"] < 1:
            raise ValueError("--inits must be >= 1")
        noise = parse_noise(cfgmap["noise"])
        scn_cfg = ScenarioConfig(
            dim=cfgmap["dim"],
            num_anchors=cfgmap["anchors"],
            cube_side=cfgmap["cube"],
            noise=noise,
        )
        bounds = tuple(b.strip() for b in cfgmap["bounds"].split(",") if b.strip())
        cfg = SimConfig(
            scenario=scn_cfg,
            trials=cfgmap["trials"],
            pocs_inits=cfgmap["inits"],
            master_seed=cfgmap["seed"],
            bounds=bounds,
        )
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    result = run_batch(cfg)
    trial_lines = trials_csv_lines(cfg, result.records)
    cdfs = normalized_cdfs(result.records)

    if args.out is None:
        sys.stdout.write("\n".join(trial_lines) + "\n")
        return EXIT_OK
    try:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "trials.csv").write_text("\n".join(trial_lines) + "\n", encoding="utf-8")
        for name, series in cdfs.items():
            (outdir / f"cdf_{name}.csv").write_text(
                "\n".join(cdf_csv_lines(series)) + "\n", encoding="utf-8"
            )
        summary = {
            "config": {
                "anchors": scn_cfg.num_anchors,
                "dim": scn_cfg.dim,
                "cube": scn_cfg.cube_side,
                "noise": cfgmap["noise"],
                "trials": cfg.trials,
                "inits": cfg.pocs_inits,
                "seed": cfg.master_seed,
                "bounds": list(cfg.bounds),
            },
            **result.summary,
        }
        # wall-clock means would break byte-for-byte reproducibility of outputs
        summary.pop("mean_seconds", None)
        (outdir / "summary.json").write_text(
            json.dumps(summary, indent=2, default=_json_default) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _parse_estimate(text: str, dim: int) -> np.ndarray:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    vals = np.array([float(p) for p in parts])
    if vals.size != dim:
        raise ValueError(f"estimate has {vals.size} coordinates, scenario has {dim}")
    return vals


def cmd_bound(args: argparse.Namespace) -> int:
    try:
        scn = load_scenario(args.scenario)
    except (OSError, ValueError) as exc:
        print(f"error: cannot load scenario: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    region = scn.region()
    opts = SolverOptions()

    b2 = bound2(region, opts)
    if b2.probably_empty:
        print(
            f"error: region looks infeasible (enclosing-ball value {b2.value:.6g} < 0)",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE

    try:
        if args.estimate is not None:
            estimate = _parse_estimate(args.estimate, region.dim)
        else:
            est = pocs_estimate(region, PocsOptions(x0=region.centers.mean(axis=0)))
            estimate = est.point
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    b1 = bound1(estimate, region, opts)
    b3s = bound3_socp(region, opts)
    b3l = bound3_lp(region)
    ell1 = distance_to_region(estimate, region, opts)

    report = {
        "bound1": {"upper": b1.upper, "lower": b1.lower, "inflated": b1.inflated},
        "bound2": b2.diameter_bound,
        "bound3_socp": b3s.value,
        "bound3_lp": b3l.value,
        "ell1": ell1,
    }
    text = json.dumps(report, indent=2, default=_json_default) + "\n"
    if args.report is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.report).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    if args.command == "bound":
        return cmd_bound(args)
    parser.error("unknown command")  # pragma: no cover
    return EXIT_CONFIG  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
