use std::sync::{Mutex, OnceLock};

use rand::RngCore;

use super::{ArOracle, OracleStats, SampOracle, SqOracle};
use crate::error::{NqsError, Result};
use crate::model::{Caps, DenseState, LogComplex, NqsModel, RatioResult, SpinConfig};
use crate::sampler::{ChainConfig, ChainState};

/// Largest `n` for which the NQS backend enumerates `Z` to answer SQ queries.
pub const DEFAULT_NORMALIZATION_CAP: usize = 16;

/// Oracle backend over an NQS model.
///
/// AR queries are exact amplitude ratios. SAMP queries advance one persistent Metropolis chain,
/// burned in on first use and advanced `thinning` sweeps per sample with the caller's RNG.
/// SQ queries enumerate the normalization once and are refused above the normalization cap.
pub struct NqsBackend {
    model: NqsModel,
    chain_config: ChainConfig,
    chain: Mutex<Option<ChainState>>,
    normalization_cap: usize,
    caps: Caps,
    dense: OnceLock<Result<DenseState>>,
    stats: OracleStats,
}

impl NqsBackend {
    pub fn new(model: NqsModel) -> Self {
        NqsBackend {
            model,
            chain_config: ChainConfig::default(),
            chain: Mutex::new(None),
            normalization_cap: DEFAULT_NORMALIZATION_CAP,
            caps: Caps::default(),
            dense: OnceLock::new(),
            stats: OracleStats::default(),
        }
    }

    /// Only `burn_in` and `thinning` are used; randomness comes from the caller.
    pub fn with_chain_config(mut self, config: ChainConfig) -> Result<Self> {
        config.validate()?;
        self.chain_config = config;
        Ok(self)
    }

    pub fn with_normalization_cap(mut self, cap: usize) -> Self {
        self.normalization_cap = cap;
        self
    }

    pub fn model(&self) -> &NqsModel {
        &self.model
    }

    pub fn chain_config(&self) -> &ChainConfig {
        &self.chain_config
    }

    /// The normalized state, enumerated on first use.
    pub fn dense_state(&self) -> Result<&DenseState> {
        if self.model.n() > self.normalization_cap {
            return Err(NqsError::NormalizationUnavailable(format!(
                "normalizing a {}-qubit network needs 2^{} amplitudes; the cap is n = {}",
                self.model.n(),
                self.model.n(),
                self.normalization_cap
            )));
        }
        self.dense
            .get_or_init(|| self.model.state_vector(&self.caps))
            .as_ref()
            .map_err(Clone::clone)
    }
}

impl SampOracle for NqsBackend {
    fn n(&self) -> usize {
        self.model.n()
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        let mut guard = self.chain.lock().unwrap_or_else(|e| e.into_inner());
        if guard.is_none() {
            let mut state = ChainState::start(&self.model, rng)?;
            for _ in 0..self.chain_config.burn_in {
                state.sweep(&self.model, rng);
            }
            *guard = Some(state);
        }
        let state = guard.as_mut().expect("initialized above");
        for _ in 0..self.chain_config.thinning {
            state.sweep(&self.model, rng);
        }
        Ok(state.config().clone())
    }
}

impl ArOracle for NqsBackend {
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        self.model.amplitude_ratio(i, j)
    }
}

impl SqOracle for NqsBackend {
    fn amplitude(&self, i: &SpinConfig) -> Result<LogComplex> {
        let log_z = self.dense_state()?.log_z();
        Ok(self.model.log_amplitude(i)?.scale_log(-log_z))
    }
}
