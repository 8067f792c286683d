//! Uniformity testing of Born distributions from pair-conditional samples.
//!
//! The tester draws `t = ⌈C ln(1/δ)/ε²⌉` pairs `(x, y)` with `x` a Born sample and `y` uniform
//! over the configurations other than `x`, and estimates each ratio `p(x)/p(y)`. It rejects as soon as one estimate leaves
//! `[1 - ε/2, 1 + ε/2]`. This is a ratio-concentration test calibrated against exact
//! distances at small `n`, not a worst-case `ε`-far guarantee.

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{NqsError, Result};
use crate::estimator::{hoeffding_queries, pcond_compare, CompareOutcome};
use crate::model::{RatioResult, SpinConfig};
use crate::oracle::{ArOracle, PcondOracle, StatsSnapshot};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UniformityConfig {
    pub eps: f64,
    pub delta: f64,
    /// The constant `C` in the pair count.
    pub c: f64,
}

impl UniformityConfig {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        let cfg = UniformityConfig { eps, delta, c: 8.0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(NqsError::InvalidParameter(format!(
                "eps must lie in (0, 1), got {}",
                self.eps
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(NqsError::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(NqsError::InvalidParameter(format!(
                "C must be positive, got {}",
                self.c
            )));
        }
        Ok(())
    }

    /// Number of pairs `t`.
    pub fn pairs(&self) -> u64 {
        (self.c * (1.0 / self.delta).ln() / (self.eps * self.eps)).ceil() as u64
    }

    /// Additive accuracy `η = ε/8` of each pair comparison.
    pub fn eta(&self) -> f64 {
        self.eps / 8.0
    }

    /// PCOND queries per pair, `K = ⌈2 ln(2/δ)/η²⌉`.
    pub fn queries_per_pair(&self) -> Result<u64> {
        hoeffding_queries(self.eta(), self.delta)
    }

    fn accepts(&self, ratio: f64) -> bool {
        (ratio - 1.0).abs() <= self.eps / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairDiagnostic {
    pub x: String,
    pub y: String,
    /// `None` when the comparison was out of range or the ratio diverged.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestVerdict {
    pub verdict: Verdict,
    pub queries_used: StatsSnapshot,
    pub pairs_planned: u64,
    pub pairs_evaluated: u64,
    pub queries_per_pair: u64,
    pub diagnostics: Vec<PairDiagnostic>,
}

impl TestVerdict {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

/// Uniform over the configurations other than `x`; `x` itself when `n = 0`.
fn uniform_other(x: &SpinConfig, rng: &mut dyn RngCore) -> SpinConfig {
    let n = x.len();
    if n == 0 {
        return x.clone();
    }
    let others = (1u64 << n) - 1;
    let r = rng.random_range(0..others);
    let idx = if r >= x.index() { r + 1 } else { r };
    SpinConfig::from_index(idx, n)
}

fn run<B, F>(backend: &B, cfg: &UniformityConfig, per_pair: u64, rng: &mut dyn RngCore, mut compare: F) -> Result<TestVerdict>
where
    B: PcondOracle + ?Sized,
    F: FnMut(&SpinConfig, &SpinConfig, &mut dyn RngCore) -> Result<Option<f64>>,
{
    cfg.validate()?;
    let before = backend.stats().snapshot();
    let t = cfg.pairs();
    let mut diagnostics = Vec::new();
    let mut verdict = Verdict::Accept;
    for _ in 0..t {
        let x = backend.samp_query(rng)?;
        let y = uniform_other(&x, rng);
        let ratio = compare(&x, &y, rng)?;
        diagnostics.push(PairDiagnostic {
            x: x.to_string(),
            y: y.to_string(),
            ratio,
        });
        if !ratio.is_some_and(|r| cfg.accepts(r)) {
            verdict = Verdict::Reject;
            break;
        }
    }
    Ok(TestVerdict {
        verdict,
        queries_used: backend.stats().snapshot() - before,
        pairs_planned: t,
        pairs_evaluated: diagnostics.len() as u64,
        queries_per_pair: per_pair,
        diagnostics,
    })
}

/// PCOND-only tester: each pair is compared with `K` pair-conditional queries.
pub fn test_uniformity<B: PcondOracle + ?Sized>(
    backend: &B,
    cfg: &UniformityConfig,
    rng: &mut dyn RngCore,
) -> Result<TestVerdict> {
    cfg.validate()?;
    let per_pair = cfg.queries_per_pair()?;
    let (eta, delta) = (cfg.eta(), cfg.delta);
    run(backend, cfg, per_pair, rng, |x, y, rng| {
        Ok(match pcond_compare(backend, x, y, eta, delta, rng)? {
            CompareOutcome::Estimate { ratio, .. } => Some(ratio),
            CompareOutcome::OutOfRange { .. } => None,
        })
    })
}

/// AR tester: each ratio `|f(x)/f(y)|²` costs one AR query.
pub fn test_uniformity_fast<B: ArOracle + ?Sized>(
    backend: &B,
    cfg: &UniformityConfig,
    rng: &mut dyn RngCore,
) -> Result<TestVerdict> {
    run(backend, cfg, 1, rng, |x, y, _| {
        Ok(match backend.ar_query(x, y)? {
            RatioResult::Value(r) => Some((2.0 * r.log_mag()).exp()),
            RatioResult::Div => None,
        })
    })
}
