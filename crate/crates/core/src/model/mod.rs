//! Network data model, log-domain amplitude evaluation and exact dense states.

mod dense;
mod io;
mod logcomplex;
mod nqs;
mod ratio;
mod spin;

pub use dense::DenseState;
pub use logcomplex::{wrap_phase, LogComplex};
pub use nqs::{Caps, NqsModel, COSH_ZERO_TOLERANCE, DEFAULT_PARAM_BOUND};
pub use ratio::RatioResult;
pub use spin::{all_configs, SpinConfig};

pub(crate) use nqs::log_2cosh;
