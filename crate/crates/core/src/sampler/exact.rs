use rand::Rng;

use crate::model::{DenseState, SpinConfig};

/// Inverse-CDF sampler over the canonical index order.
#[derive(Clone, Debug)]
pub struct BornTable {
    n: usize,
    cdf: Vec<f64>,
}

impl BornTable {
    pub fn new(state: &DenseState) -> Self {
        Self::from_probabilities(state.n(), &state.probabilities())
    }

    /// `probs` need not be normalized.
    pub fn from_probabilities(n: usize, probs: &[f64]) -> Self {
        let cdf = probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        BornTable { n, cdf }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> SpinConfig {
        let total = *self.cdf.last().expect("non-empty table");
        let u = rng.random::<f64>() * total;
        let idx = self
            .cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1);
        SpinConfig::from_index(idx as u64, self.n)
    }
}

/// One exact draw from the Born distribution of `state`.
pub fn exact_sample<R: Rng + ?Sized>(state: &DenseState, rng: &mut R) -> SpinConfig {
    BornTable::new(state).sample(rng)
}
