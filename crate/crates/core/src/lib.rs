//! Neural network quantum states and their wavefunction-access models.
//!
//! A network `θ = (a, b, W)` defines an unnormalized amplitude
//! `f_θ(v) = exp(aᵀv) ∏_i 2cosh(b_i + Σ_j v_j W_ji)` over `v ∈ {-1, +1}^n`.
//! The crate provides
//!
//! - [`model`]: numerically stable amplitude evaluation, amplitude ratios and exact dense states;
//! - [`oracle`]: the sampling, pair-conditional (PCOND), amplitude-ratio (AR) and
//!   sample-and-query (SQ) access models with query accounting;
//! - [`sampler`]: exact, Metropolis and DNF-uniform samplers;
//! - [`estimator`]: median-of-means fidelity and sparse-observable estimators and the
//!   PCOND `compare` procedure;
//! - [`gadget`]: network transformations for postselection, parity and Hamming-weight
//!   projection and Pauli operators;
//! - [`disttest`]: a PCOND uniformity tester.

pub mod disttest;
pub mod error;
pub mod estimator;
pub mod gadget;
pub mod model;
pub mod oracle;
pub mod sampler;

pub use error::{NqsError, Result};
pub use model::{Caps, DenseState, LogComplex, NqsModel, RatioResult, SpinConfig};
