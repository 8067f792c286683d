use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NqsError, Result};
use crate::model::{all_configs, log_2cosh, NqsModel, SpinConfig};

/// Accepted flips between full recomputations of the hidden-node inputs.
pub const ACCUMULATOR_REFRESH: u64 = 100_000;

/// Start-configuration draws per visible node before giving up.
const START_ATTEMPTS_PER_SPIN: usize = 64;

/// Schedule of a single-spin-flip Metropolis chain. Sweep counts are in units of `n` proposals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub burn_in: u64,
    pub thinning: u64,
    /// Total sweeps after which the chain stops emitting.
    pub max_steps: u64,
    pub seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            burn_in: 1000,
            thinning: 1,
            max_steps: u64::MAX,
            seed: 0,
        }
    }
}

impl ChainConfig {
    pub fn with_seed(seed: u64) -> Self {
        ChainConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thinning == 0 {
            return Err(NqsError::InvalidParameter("thinning must be at least 1".into()));
        }
        if self.max_steps < self.burn_in {
            return Err(NqsError::InvalidParameter(format!(
                "max_steps {} is below burn_in {}",
                self.max_steps, self.burn_in
            )));
        }
        Ok(())
    }
}

/// Probability of accepting a move whose amplitude ratio has log-magnitude `log_ratio_mag`:
/// `min(1, |f(v')/f(v)|²)`.
pub fn acceptance_probability(log_ratio_mag: f64) -> f64 {
    (2.0 * log_ratio_mag).min(0.0).exp()
}

/// Position and cached hidden-node inputs of a Metropolis chain.
///
/// Flipping `v_k` updates every input `b_i + Σ_j v_j W_ji` by `-2 v_k W_ki`, so a proposal
/// costs `O(m)`.
#[derive(Clone, Debug)]
pub struct ChainState {
    v: SpinConfig,
    fields: Vec<Complex64>,
    log_cosh: Vec<Complex64>,
    proposed_fields: Vec<Complex64>,
    proposed_log_cosh: Vec<Complex64>,
    accepted_since_refresh: u64,
    proposals: u64,
    accepted: u64,
}

impl ChainState {
    /// Starts from a uniformly random configuration, redrawing while the amplitude is zero.
    pub fn start<R: Rng + ?Sized>(model: &NqsModel, rng: &mut R) -> Result<Self> {
        if model.n() == 0 {
            return Err(NqsError::InvalidParameter(
                "a chain needs at least one visible node".into(),
            ));
        }
        let attempts = model.n() * START_ATTEMPTS_PER_SPIN;
        for _ in 0..attempts {
            if let Some(state) = Self::at(model, SpinConfig::uniform(model.n(), rng))? {
                return Ok(state);
            }
        }
        Err(NqsError::ZeroSupportStart { attempts })
    }

    /// A chain positioned at `v`; `None` if `f(v) = 0`.
    pub fn at(model: &NqsModel, v: SpinConfig) -> Result<Option<Self>> {
        v.expect_len(model.n())?;
        let fields = model.hidden_fields(&v);
        let Some(log_cosh) = fields.iter().map(|&z| log_2cosh(z)).collect::<Option<Vec<_>>>()
        else {
            return Ok(None);
        };
        let m = model.m();
        Ok(Some(ChainState {
            v,
            fields,
            log_cosh,
            proposed_fields: vec![Complex64::new(0.0, 0.0); m],
            proposed_log_cosh: vec![Complex64::new(0.0, 0.0); m],
            accepted_since_refresh: 0,
            proposals: 0,
            accepted: 0,
        }))
    }

    pub fn config(&self) -> &SpinConfig {
        &self.v
    }

    pub fn fields(&self) -> &[Complex64] {
        &self.fields
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposals as f64
        }
    }

    /// One proposal: a single-spin flip at a uniformly chosen site, or with probability
    /// `1/(n+1)` no move at all. The null move keeps the chain aperiodic when every flip would
    /// be accepted. Returns whether a flip was accepted.
    pub fn step<R: Rng + ?Sized>(&mut self, model: &NqsModel, rng: &mut R) -> bool {
        self.proposals += 1;
        let k = rng.random_range(0..=model.n());
        if k == model.n() {
            return false;
        }
        let s = f64::from(self.v.get(k));
        let row = model.weight_row(k);
        let mut log_ratio = -2.0 * s * model.visible_bias()[k];
        for i in 0..model.m() {
            let z = self.fields[i] - 2.0 * s * row[i];
            let Some(lc) = log_2cosh(z) else {
                // proposed amplitude is exactly zero
                return false;
            };
            log_ratio += lc - self.log_cosh[i];
            self.proposed_fields[i] = z;
            self.proposed_log_cosh[i] = lc;
        }
        let p = acceptance_probability(log_ratio.re);
        if p < 1.0 && rng.random::<f64>() >= p {
            return false;
        }
        self.v.flip(k);
        std::mem::swap(&mut self.fields, &mut self.proposed_fields);
        std::mem::swap(&mut self.log_cosh, &mut self.proposed_log_cosh);
        self.accepted += 1;
        self.accepted_since_refresh += 1;
        if self.accepted_since_refresh >= ACCUMULATOR_REFRESH {
            self.refresh(model);
        }
        true
    }

    /// `n` proposals.
    pub fn sweep<R: Rng + ?Sized>(&mut self, model: &NqsModel, rng: &mut R) {
        for _ in 0..model.n() {
            self.step(model, rng);
        }
    }

    /// Recomputes the hidden-node inputs from scratch.
    pub fn refresh(&mut self, model: &NqsModel) {
        self.fields = model.hidden_fields(&self.v);
        for (lc, &z) in self.log_cosh.iter_mut().zip(&self.fields) {
            *lc = log_2cosh(z).expect("current configuration has nonzero amplitude");
        }
        self.accepted_since_refresh = 0;
    }

    /// Largest deviation between the cached inputs and a from-scratch recomputation.
    pub fn accumulator_drift(&self, model: &NqsModel) -> f64 {
        model
            .hidden_fields(&self.v)
            .iter()
            .zip(&self.fields)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A seeded Metropolis chain emitting one configuration every `thinning` sweeps after `burn_in`.
pub struct MetropolisChain<'a> {
    model: &'a NqsModel,
    config: ChainConfig,
    state: ChainState,
    rng: ChaCha8Rng,
    sweeps: u64,
    burned_in: bool,
}

/// Starts a chain on `model`. Fails with `ZeroSupportStart` when no start configuration with
/// nonzero amplitude is found.
pub fn metropolis_chain(model: &NqsModel, config: ChainConfig) -> Result<MetropolisChain<'_>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let state = ChainState::start(model, &mut rng)?;
    Ok(MetropolisChain {
        model,
        config,
        state,
        rng,
        sweeps: 0,
        burned_in: false,
    })
}

impl MetropolisChain<'_> {
    pub fn state(&self) -> &ChainState {
        &self.state
    }

    pub fn sweeps(&self) -> u64 {
        self.sweeps
    }
}

impl Iterator for MetropolisChain<'_> {
    type Item = SpinConfig;

    fn next(&mut self) -> Option<SpinConfig> {
        if !self.burned_in {
            for _ in 0..self.config.burn_in {
                self.state.sweep(self.model, &mut self.rng);
            }
            self.sweeps = self.config.burn_in;
            self.burned_in = true;
        }
        if self.config.max_steps - self.sweeps < self.config.thinning {
            return None;
        }
        for _ in 0..self.config.thinning {
            self.state.sweep(self.model, &mut self.rng);
        }
        self.sweeps += self.config.thinning;
        Some(self.state.config().clone())
    }
}

/// The chain's one-proposal transition matrix `T[v][v']` in canonical index order, built from
/// the proposal rule (uniform over the `n` flips and the null move) and
/// [`acceptance_probability`] on amplitude ratios.
pub fn transition_matrix(model: &NqsModel) -> Result<Vec<Vec<f64>>> {
    let n = model.n();
    if n == 0 || n > 12 {
        return Err(NqsError::ResourceLimit(format!(
            "transition matrix for n = {n} (supported 1..=12)"
        )));
    }
    let dim = 1usize << n;
    let mut t = vec![vec![0.0; dim]; dim];
    for v in all_configs(n) {
        let from = v.index() as usize;
        let mut stay = 1.0;
        for k in 0..n {
            let w = v.flipped(k);
            let p = match model.amplitude_ratio(&w, &v)?.value() {
                Some(r) if !r.is_zero() => acceptance_probability(r.log_mag()),
                Some(_) => 0.0,
                // v has zero amplitude; moves out of it are always accepted
                None => 1.0,
            } / (n + 1) as f64;
            t[from][w.index() as usize] = p;
            stay -= p;
        }
        t[from][from] = stay;
    }
    Ok(t)
}
