//! Exhaustive ground truth on small explicit graphs.

mod estimate;
mod graph;
mod hardcore;
mod isoperimetry;
mod measures;
mod polymer;
mod report;

pub use estimate::{estimate_vs_exact, kss_parameters, EstimateReport, EstimateRow};
pub use graph::{ExplicitGraph, Mask, Side, DEFAULT_LIMIT};
pub use hardcore::{independent_sets, size_counts, z_exact, z_transfer};
pub use isoperimetry::{large_set_bound_holds, verify_isoperimetry, IsoViolation, IsoperimetryReport, ISOPERIMETRY_LIMIT};
pub use measures::{measure_table, nu, sample_muhat, sampler_report, MeasureTable, Sampler, SamplerReport};
pub use polymer::{
    capture_report, captured_by, closure, closure_bound, cluster_sum_small, incompatible, is_polymer,
    minority_side, polymer_weight, polymers, two_linked_components, xi_by_defect_sets, xi_exact, zhat_exact,
    CaptureReport, DefectConfig,
};
pub use report::{
    estimate_check, identity_checks, identity_lambdas, isoperimetry_check, run_suite, sampler_check, Check, Suite,
    SuiteConfig, SuiteReport, IDENTITY_GRAPHS, ROSTER, SAMPLER_SAMPLES, SCHEMA, TV_TOLERANCE,
};
