//! Monte-Carlo estimators over oracle backends.
//!
//! [`fidelity`] and [`expectation`] feed variates computed from AR queries into a
//! median-of-means reduction; [`pcond_compare`] estimates a probability ratio from
//! pair-conditional samples alone.

mod compare;
mod fidelity;
mod mom;
mod observable;

use serde::Serialize;

use crate::oracle::StatsSnapshot;

pub use compare::{hoeffding_queries, pcond_compare, CompareOutcome};
pub use fidelity::{
    draw_g, fidelity, fidelity_enumerated, fidelity_exhaustive, fidelity_with_config, GVariate,
    EXHAUSTIVE_FIDELITY_CAP,
};
pub use mom::{median_of_means, mom_estimate, MomConfig};
pub use observable::{expectation, expectation_with_config, SparseObservable};

/// Fraction of discarded draws above which a report carries a warning.
pub const DISCARD_WARNING_FRACTION: f64 = 0.01;

/// Outcome of a median-of-means estimation run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    /// The reported estimate (clamped for fidelity).
    pub estimate: f64,
    /// Real and imaginary parts of the median before clamping.
    pub raw: [f64; 2],
    pub k: usize,
    pub l: usize,
    pub derivation: Option<String>,
    /// Queries issued during the run, summed over distinct backends.
    pub queries: StatsSnapshot,
    /// Draws thrown away because a ratio came back as `DIV`.
    pub discards: u64,
    pub warnings: Vec<String>,
}

pub(crate) fn discard_warnings(discards: u64, accepted: usize) -> Vec<String> {
    let total = discards + accepted as u64;
    if total > 0 && discards as f64 > DISCARD_WARNING_FRACTION * total as f64 {
        vec![format!(
            "{discards} of {total} draws were discarded on DIV ratios; amplitude zero detection may be misfiring"
        )]
    } else {
        Vec::new()
    }
}
