use rand::RngCore;
use serde::Serialize;

use crate::error::{NqsError, Result};
use crate::model::SpinConfig;
use crate::oracle::{PcondInput, PcondOracle};

/// Result of [`pcond_compare`]. `r_hat` is the fraction of pair queries that returned `i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompareOutcome {
    /// `r̂/(1 - r̂)`, an estimate of `p(i)/p(j)`.
    Estimate { ratio: f64, r_hat: f64, queries: u64 },
    /// `r̂` fell outside `[η, 1 - η]`.
    OutOfRange { r_hat: f64, queries: u64 },
}

impl CompareOutcome {
    pub fn ratio(&self) -> Option<f64> {
        match self {
            CompareOutcome::Estimate { ratio, .. } => Some(*ratio),
            CompareOutcome::OutOfRange { .. } => None,
        }
    }

    pub fn r_hat(&self) -> f64 {
        match self {
            CompareOutcome::Estimate { r_hat, .. } | CompareOutcome::OutOfRange { r_hat, .. } => {
                *r_hat
            }
        }
    }
}

/// `K = ⌈2 ln(2/δ) / η²⌉`: the Hoeffding count for an `η`-accurate bias with confidence `1 - δ`.
pub fn hoeffding_queries(eta: f64, delta: f64) -> Result<u64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(NqsError::InvalidParameter(format!(
            "eta must lie in (0, 1), got {eta}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(NqsError::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok((2.0 * (2.0 / delta).ln() / (eta * eta)).ceil() as u64)
}

/// Estimates `p(i)/p(j)` from `K` PCOND pair queries on `{i, j}`. A degenerate pair `i = j`
/// has ratio exactly 1 and costs no queries.
pub fn pcond_compare<B: PcondOracle + ?Sized>(
    backend: &B,
    i: &SpinConfig,
    j: &SpinConfig,
    eta: f64,
    delta: f64,
    rng: &mut dyn RngCore,
) -> Result<CompareOutcome> {
    let queries = hoeffding_queries(eta, delta)?;
    if i == j {
        return Ok(CompareOutcome::Estimate {
            ratio: 1.0,
            r_hat: 0.5,
            queries: 0,
        });
    }
    let input = PcondInput::Pair(i.clone(), j.clone());
    let mut hits = 0u64;
    for _ in 0..queries {
        if &backend.pcond_query(&input, rng)? == i {
            hits += 1;
        }
    }
    let r_hat = hits as f64 / queries as f64;
    Ok(if r_hat >= eta && r_hat <= 1.0 - eta {
        CompareOutcome::Estimate {
            ratio: r_hat / (1.0 - r_hat),
            r_hat,
            queries,
        }
    } else {
        CompareOutcome::OutOfRange { r_hat, queries }
    })
}
