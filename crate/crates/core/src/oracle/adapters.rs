use rand::RngCore;

use super::{ArOracle, OracleStats, SampOracle, SqOracle};
use crate::error::{NqsError, Result};
use crate::model::{LogComplex, RatioResult, SpinConfig};

/// Answers AR queries with two SQ queries on the wrapped backend.
///
/// Stats are shared with the wrapped backend, so one AR query shows up as one AR count
/// plus two SQ counts.
pub struct ArFromSq<B> {
    inner: B,
}

impl<B: SqOracle> ArFromSq<B> {
    pub fn new(inner: B) -> Self {
        ArFromSq { inner }
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }
}

impl<B: SqOracle> SampOracle for ArFromSq<B> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn stats(&self) -> &OracleStats {
        self.inner.stats()
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        self.inner.draw(rng)
    }
}

impl<B: SqOracle> ArOracle for ArFromSq<B> {
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        let num = self.inner.sq_query(i)?;
        let den = self.inner.sq_query(j)?;
        Ok(RatioResult::from_pair(num, den))
    }
}

/// Deterministic pseudo-random value in `[-1, 1]` keyed by a seed and configurations.
fn keyed_unit(seed: u64, configs: &[&SpinConfig]) -> f64 {
    let mut h = seed;
    for v in configs {
        h = splitmix(h ^ v.len() as u64);
        for chunk in v.spins().chunks(64) {
            let bits = chunk
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, &s)| acc | (u64::from(s < 0) << k));
            h = splitmix(h ^ bits);
        }
    }
    (h >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_eps(eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(NqsError::InvalidParameter(format!(
            "relative error must be a finite non-negative number, got {eps}"
        )));
    }
    Ok((1.0 + eps).ln())
}

/// Perturbs SQ answers to `ε`-relative approximations: the log-magnitude moves by at most
/// `ln(1 + ε)` and the phase is kept. Answers are a fixed function of the seed and the query.
pub struct NoisySq<B> {
    inner: B,
    eps: f64,
    max_shift: f64,
    seed: u64,
}

impl<B: SqOracle> NoisySq<B> {
    pub fn new(inner: B, eps: f64, seed: u64) -> Result<Self> {
        let max_shift = check_eps(eps)?;
        Ok(NoisySq {
            inner,
            eps,
            max_shift,
            seed,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl<B: SqOracle> SampOracle for NoisySq<B> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn stats(&self) -> &OracleStats {
        self.inner.stats()
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        self.inner.draw(rng)
    }
}

impl<B: SqOracle> SqOracle for NoisySq<B> {
    fn amplitude(&self, i: &SpinConfig) -> Result<LogComplex> {
        let exact = self.inner.amplitude(i)?;
        Ok(exact.scale_log(self.max_shift * keyed_unit(self.seed, &[i])))
    }
}

/// Perturbs AR answers to `ε`-relative approximations. `DIV` and exact zeros pass through.
pub struct NoisyAr<B> {
    inner: B,
    eps: f64,
    max_shift: f64,
    seed: u64,
}

impl<B: ArOracle> NoisyAr<B> {
    pub fn new(inner: B, eps: f64, seed: u64) -> Result<Self> {
        let max_shift = check_eps(eps)?;
        Ok(NoisyAr {
            inner,
            eps,
            max_shift,
            seed,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl<B: ArOracle> SampOracle for NoisyAr<B> {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn stats(&self) -> &OracleStats {
        self.inner.stats()
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        self.inner.draw(rng)
    }
}

impl<B: ArOracle> ArOracle for NoisyAr<B> {
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        Ok(match self.inner.ratio(i, j)? {
            RatioResult::Value(r) => {
                RatioResult::Value(r.scale_log(self.max_shift * keyed_unit(self.seed, &[i, j])))
            }
            RatioResult::Div => RatioResult::Div,
        })
    }
}
