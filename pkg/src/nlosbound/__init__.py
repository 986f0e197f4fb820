"""Position estimates with certified worst-case error bounds for range-based
localization under positively biased (NLOS) measurements."""

from .geometry import (
    Ball,
    Region,
    ball_distances,
    bounding_box,
    farthest_index,
    project_onto_ball,
    residual,
)
from .scenario import (
    Exponential,
    PositiveGaussian,
    Scenario,
    ScenarioConfig,
    Uniform,
    generate_scenario,
    load_scenario,
    sample_noise,
    save_scenario,
)
from .pocs import Estimate, PocsOptions, pocs_estimate, subgradient_estimate
from .solvers import (
    SolverOptions,
    SolverOutcome,
    SolverStatus,
    SymMat,
    maximize_linear_over_balls,
    simplex_project,
    solve_simplex_qp,
    solve_tiny_sdp,
    sym_eig_small,
)
from .bounds import (
    Bound1Result,
    Bound2Result,
    Bound3Result,
    BoundReport,
    bound1,
    bound2,
    bound3_lp,
    bound3_socp,
    compute_report,
    distance_to_region,
)
from .oracle import DegenerateRegionError, OracleOptions, oracle_max_mc, oracle_vmax1_2d
from .sim import CdfSeries, SimConfig, TrialRecord, empirical_cdf, run_batch, run_trial
from .rng import RngState, mix64

__version__ = "0.1.0"
