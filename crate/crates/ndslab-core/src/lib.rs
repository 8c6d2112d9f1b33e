//! Exact-arithmetic laboratory for nonautonomous dynamical systems on the
//! unit interval.
//!
//! Everything is computed over arbitrary-precision rationals: continuous
//! piecewise-linear self-maps of `[0,1]`, sequences of such maps, exact
//! trajectories, periodicity classifiers with machine-checkable certificates,
//! finite-evidence probes for transitivity/sensitivity, and a gallery of
//! reference systems with attached expectations.

pub mod classify;
pub mod enumeration;
pub mod error;
pub mod families;
pub mod gallery;
pub mod matrix;
pub mod plmap;
pub mod probes;
pub mod rational;
pub mod sequence;
pub mod sharkovsky;

pub use classify::{
    check_def1, check_def2, check_def3, check_def4, check_def5, limit_cycle_crosscheck,
    CycleCertificate, Evidence, Verdict, VerdictStatus,
};
pub use error::Error;
pub use families::{theorem4_f_map, theorem4_g_map};
pub use gallery::{build_scenario, convergence_table, scenario_expectations, Scenario};
pub use matrix::{implication_expectations, ImplicationMatrix, MatrixMode};
pub use plmap::{FixedPointSet, IntervalQ, PLMap};
pub use probes::{
    dense_orbit_probe, devaney_report, sensitivity_probe, transitivity_probe, ProbeOutcome,
    ProbeReport,
};
pub use rational::Rational;
pub use sequence::{
    omega_limit_estimate, MapSequence, OmegaEstimate, OmegaVerdict, SequenceRule, Trajectory,
};
pub use sharkovsky::sharkovsky_precedes;
