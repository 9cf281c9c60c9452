//! Simulation and verification toolkit for the randomized Littlewood
//! problem: for independent uniform shifts (γ_n, δ_n), how small does
//! n·ln n·‖nα − γ_n‖·‖nβ − δ_n‖ get, and when do the shifted hyperbolic
//! regions A_n cover the torus?
//!
//! Modules, bottom up:
//!
//! * [`number`], [`psi`], [`stream`], [`precise`]: norms, approximation
//!   functions, counter-addressed shift streams, fixed-point oracles.
//! * [`region`]: membership, exact and Monte Carlo areas, separation radius
//!   and the boundary-gap probe.
//! * [`coverage`]: grid sweeps and cover certificates.
//! * [`condition`]: the divergence condition in log domain.
//! * [`experiment`]: liminf trajectories, batches and run records.

pub mod condition;
pub mod coverage;
pub mod error;
pub mod experiment;
pub mod number;
pub mod precise;
pub mod psi;
pub mod region;
pub mod stream;

pub use condition::{
    condition_trace, epsilon_feasible, eqfast_check, failure_bound, ConditionTrace, EqfastReport,
    FailureBound, FeasibleInterval, TraceRow,
};
pub use coverage::{
    certify_cover, certify_cover_with, coverage_sweep, coverage_sweep_with, proof_grid_experiment,
    proof_grid_resolution, smallest_certified, Certificate, CertifyOptions, CoverageReport,
    GridSpec, SweepOptions, Target, Verdict, Witness, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use experiment::{
    batch_liminf, compare_deterministic, liminf_trajectory, summarize_trajectory, BatchReport,
    ComparisonTable, PointSpec, Precision, ResolvedPoint, RunConfig, RunRecord, Trajectory,
    TrajectorySummary,
};
pub use number::{
    deterministic_statistics, dist_to_nearest_int, littlewood_statistic, shifted_norm,
    StatisticPoint,
};
pub use precise::{ExactReal, FixedFrac};
pub use psi::PsiSpec;
pub use region::{
    min_boundary_gap, region_area_exact, region_area_mc, separation_radius, AreaEstimate,
    BoundaryGap, Region, RegionKind,
};
pub use stream::ShiftStream;
