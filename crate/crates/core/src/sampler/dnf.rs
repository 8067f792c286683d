use rand::Rng;

use crate::model::SpinConfig;
use crate::oracle::DnfFormula;

/// Per-term satisfying-set sizes `|S_j| = 2^(n - fixed_j)` and their prefix sums.
#[derive(Clone, Debug)]
pub struct DnfTermTable {
    counts: Vec<u128>,
    cumulative: Vec<u128>,
}

/// Diagnostics of one uniform DNF draw.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DnfDrawStats {
    /// Proposals made, one per inner-loop iteration.
    pub attempts: u64,
    /// Started passes of the m-iteration loop.
    pub rounds: u64,
}

impl DnfTermTable {
    pub fn new(formula: &DnfFormula) -> Self {
        let n = formula.n();
        let counts: Vec<u128> = formula
            .terms()
            .iter()
            .map(|t| 1u128 << (n - t.fixed_count()))
            .collect();
        let cumulative = counts
            .iter()
            .scan(0u128, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        DnfTermTable { counts, cumulative }
    }

    pub fn counts(&self) -> &[u128] {
        &self.counts
    }

    pub fn cumulative(&self) -> &[u128] {
        &self.cumulative
    }

    /// `Σ_j |S_j|`, an upper bound on the satisfying count.
    pub fn total(&self) -> u128 {
        *self.cumulative.last().expect("formula has terms")
    }

    /// Term index drawn with probability `|S_j| / Σ_k |S_k|`.
    pub fn select_term<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random_range(0..self.total());
        self.cumulative.partition_point(|&c| c <= u)
    }

    /// Uniform satisfying assignment of `formula`.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        formula: &DnfFormula,
        rng: &mut R,
    ) -> (SpinConfig, DnfDrawStats) {
        let m = formula.terms().len();
        let mut stats = DnfDrawStats::default();
        loop {
            stats.rounds += 1;
            for _ in 0..m {
                stats.attempts += 1;
                let j = self.select_term(rng);
                let a = formula.terms()[j].sample_member(formula.n(), rng);
                let multiplicity = formula.multiplicity(&a);
                if rng.random_range(0..multiplicity) == 0 {
                    return (a, stats);
                }
            }
        }
    }
}

/// One draw from the uniform distribution over satisfying assignments of `formula`.
pub fn dnf_uniform_sample<R: Rng + ?Sized>(
    formula: &DnfFormula,
    table: &DnfTermTable,
    rng: &mut R,
) -> SpinConfig {
    table.sample(formula, rng).0
}
