//! Born-distribution samplers: exact inverse-CDF over dense states, single-spin-flip
//! Metropolis over NQS models, and the uniform sampler over DNF satisfying assignments.

mod dnf;
mod exact;
mod metropolis;
mod tv;

pub use dnf::{dnf_uniform_sample, DnfDrawStats, DnfTermTable};
pub use exact::{exact_sample, BornTable};
pub use metropolis::{
    acceptance_probability, metropolis_chain, transition_matrix, ChainConfig, ChainState,
    MetropolisChain, ACCUMULATOR_REFRESH,
};
pub use tv::{empirical_tv, histogram, tv_from_counts};
