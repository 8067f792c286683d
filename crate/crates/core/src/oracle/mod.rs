//! Wavefunction access models and their backends.
//!
//! The hierarchy runs `SAMP ⊂ PCOND ⊂ AR ⊂ SQ`:
//!
//! - [`SampOracle`]: draw from the Born distribution `|ψ(v)|²`;
//! - [`PcondOracle`]: additionally draw from the Born distribution conditioned on a pair `{i, j}`;
//! - [`ArOracle`]: additionally return amplitude ratios `ψ(i)/ψ(j)`, with `DIV` for a
//!   vanishing denominator;
//! - [`SqOracle`]: additionally return normalized amplitudes `ψ(i)`.
//!
//! Every backend owns an [`OracleStats`] cell. The `*_query` methods record a query and
//! then delegate to the unrecorded primitive, so estimators can be audited against their
//! query budgets.

mod adapters;
mod dense_backend;
mod dnf;
mod nqs_backend;

use std::ops::{Add, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::Result;
use crate::model::{LogComplex, RatioResult, SpinConfig};

pub use adapters::{ArFromSq, NoisyAr, NoisySq};
pub use dense_backend::DenseBackend;
pub use dnf::{dnf_satisfies, DnfFormula, DnfState, DnfTerm, Literal, DNF_COUNT_CAP};
pub use nqs_backend::{NqsBackend, DEFAULT_NORMALIZATION_CAP};

/// Query counters. Monotone; reset only through [`OracleStats::reset`].
#[derive(Debug, Default)]
pub struct OracleStats {
    samp: AtomicU64,
    pcond_pair: AtomicU64,
    ar_ratio: AtomicU64,
    sq_amplitude: AtomicU64,
}

/// A point-in-time copy of [`OracleStats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatsSnapshot {
    pub samp_queries: u64,
    pub pcond_pair_queries: u64,
    pub ar_ratio_queries: u64,
    pub sq_amplitude_queries: u64,
}

impl OracleStats {
    pub fn record_samp(&self) {
        self.samp.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_pcond_pair(&self) {
        self.pcond_pair.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_ar(&self) {
        self.ar_ratio.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_sq(&self) {
        self.sq_amplitude.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> StatsSnapshot {
        StatsSnapshot {
            samp_queries: self.samp.load(Ordering::Relaxed),
            pcond_pair_queries: self.pcond_pair.load(Ordering::Relaxed),
            ar_ratio_queries: self.ar_ratio.load(Ordering::Relaxed),
            sq_amplitude_queries: self.sq_amplitude.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.samp.store(0, Ordering::Relaxed);
        self.pcond_pair.store(0, Ordering::Relaxed);
        self.ar_ratio.store(0, Ordering::Relaxed);
        self.sq_amplitude.store(0, Ordering::Relaxed);
    }
}

impl StatsSnapshot {
    pub fn total(&self) -> u64 {
        self.samp_queries + self.pcond_pair_queries + self.ar_ratio_queries + self.sq_amplitude_queries
    }
}

impl Sub for StatsSnapshot {
    type Output = StatsSnapshot;

    fn sub(self, rhs: StatsSnapshot) -> StatsSnapshot {
        StatsSnapshot {
            samp_queries: self.samp_queries - rhs.samp_queries,
            pcond_pair_queries: self.pcond_pair_queries - rhs.pcond_pair_queries,
            ar_ratio_queries: self.ar_ratio_queries - rhs.ar_ratio_queries,
            sq_amplitude_queries: self.sq_amplitude_queries - rhs.sq_amplitude_queries,
        }
    }
}

impl Add for StatsSnapshot {
    type Output = StatsSnapshot;

    fn add(self, rhs: StatsSnapshot) -> StatsSnapshot {
        StatsSnapshot {
            samp_queries: self.samp_queries + rhs.samp_queries,
            pcond_pair_queries: self.pcond_pair_queries + rhs.pcond_pair_queries,
            ar_ratio_queries: self.ar_ratio_queries + rhs.ar_ratio_queries,
            sq_amplitude_queries: self.sq_amplitude_queries + rhs.sq_amplitude_queries,
        }
    }
}

/// Input of a PCOND query: the whole domain or a pair of configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcondInput {
    Whole,
    Pair(SpinConfig, SpinConfig),
}

/// Sampling access to a Born distribution.
pub trait SampOracle: Send + Sync {
    fn n(&self) -> usize;

    fn stats(&self) -> &OracleStats;

    /// One Born sample, not recorded in the stats.
    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig>;

    fn samp_query(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        self.stats().record_samp();
        self.draw(rng)
    }
}

/// Pair-conditional sampling access.
pub trait PcondOracle: SampOracle {
    /// Returns `i` with probability `p(i) / (p(i) + p(j))`, else `j`; unrecorded.
    fn pair_draw(&self, i: &SpinConfig, j: &SpinConfig, rng: &mut dyn RngCore)
        -> Result<SpinConfig>;

    fn pcond_query(&self, input: &PcondInput, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        match input {
            PcondInput::Whole => self.samp_query(rng),
            PcondInput::Pair(i, j) => {
                i.expect_len(self.n())?;
                j.expect_len(self.n())?;
                self.stats().record_pcond_pair();
                self.pair_draw(i, j, rng)
            }
        }
    }
}

/// Amplitude-ratio access.
pub trait ArOracle: SampOracle {
    /// `ψ(i)/ψ(j)`, not recorded in the stats.
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult>;

    fn ar_query(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        i.expect_len(self.n())?;
        j.expect_len(self.n())?;
        self.stats().record_ar();
        self.ratio(i, j)
    }

    /// The PCOND coin bias `r = |ψ(i)|² / (|ψ(i)|² + |ψ(j)|²)`; 1/2 when both vanish.
    fn pair_bias(&self, i: &SpinConfig, j: &SpinConfig) -> Result<f64> {
        Ok(self.ratio(i, j)?.pcond_bias())
    }
}

/// Normalized amplitude access.
pub trait SqOracle: SampOracle {
    /// `ψ(i)`, not recorded in the stats.
    fn amplitude(&self, i: &SpinConfig) -> Result<LogComplex>;

    fn sq_query(&self, i: &SpinConfig) -> Result<LogComplex> {
        i.expect_len(self.n())?;
        self.stats().record_sq();
        self.amplitude(i)
    }
}

impl<T: ArOracle + ?Sized> PcondOracle for T {
    fn pair_draw(
        &self,
        i: &SpinConfig,
        j: &SpinConfig,
        rng: &mut dyn RngCore,
    ) -> Result<SpinConfig> {
        let r = self.pair_bias(i, j)?;
        Ok(if rng.random::<f64>() < r {
            i.clone()
        } else {
            j.clone()
        })
    }
}

/// Restricts a backend to sampling and pair-conditional queries.
pub struct PcondOnly<'a, B: ?Sized>(pub &'a B);

impl<B: PcondOracle + ?Sized> SampOracle for PcondOnly<'_, B> {
    fn n(&self) -> usize {
        self.0.n()
    }

    fn stats(&self) -> &OracleStats {
        self.0.stats()
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        self.0.draw(rng)
    }
}

impl<B: PcondOracle + ?Sized> PcondOracle for PcondOnly<'_, B> {
    fn pair_draw(
        &self,
        i: &SpinConfig,
        j: &SpinConfig,
        rng: &mut dyn RngCore,
    ) -> Result<SpinConfig> {
        self.0.pair_draw(i, j, rng)
    }
}
