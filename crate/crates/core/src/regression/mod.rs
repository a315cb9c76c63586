//! Geographically weighted regression: local weighted least squares,
//! bandwidth objectives, bandwidth search and coefficient-surface fitting.

pub mod fit;
pub mod formula;
pub mod objective;
pub mod search;
pub mod wls;

pub use fit::{gwr_fit, GwrResult};
pub use formula::{parse_formula, Design, FormulaSpec, INTERCEPT};
pub use objective::{
    aicc_from_parts, aicc_score, continuous_bandwidth, cv_score, make_objective,
    BandwidthEvaluator, BandwidthObjective, Criterion, FitSummary,
};
pub use search::{
    adaptive_range, default_tolerance, golden_section, golden_search, linear_search,
    SearchResult, TracePoint,
};
pub use wls::{local_wls, LocalFit, RCOND_TOLERANCE};
