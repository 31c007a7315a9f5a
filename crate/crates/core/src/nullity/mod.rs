//! Deciding (s,p)-nullity from the available criteria.

pub mod basic;
pub mod certificates;
pub mod classify;
pub mod curve;
pub mod products;
pub mod series;
pub mod verdict;

pub use basic::{basic_verdict, boundary_verdict, RegClass, SetFlags};
pub use certificates::{
    cheese_certificate, cheese_report, fat_beta_range, fat_cheese_partial_sum, fat_cheese_sum, superfat_params, CheeseConstants,
    CheeseReport, SuperFatParams,
};
pub use classify::{
    cantor_term, cantor_term_log2, classify_by_dimension, classify_cantor, classify_cantor_with, dimension_of, fat_threshold,
    hausdorff_threshold, THRESHOLD_TOL,
};
pub use curve::{check_curve, threshold_curve, CurveCheck, CurveSource};
pub use products::{product_bounds, subset_sum_extremes, tensor_lower, tensor_upper};
pub use series::{probe_logs, series_probe, Convergence, ConvergenceVerdict, SeriesConfig, SeriesTest};
pub use verdict::{Justification, NullityVerdict, Verdict, VerdictRecord};
