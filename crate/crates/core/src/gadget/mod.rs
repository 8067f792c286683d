//! Network surgery: transformations `θ ↦ θ̃` that append hidden nodes with imaginary
//! parameters (or negate existing ones) to condition, project or rotate the encoded state.
//!
//! Every appended parameter has magnitude at most `π`.

mod pauli;
mod postselect;
mod sectors;

pub use pauli::{pauli_apply, pauli_x, pauli_y, pauli_z_string, Pauli, PauliString};
pub use postselect::{postselect, zero_state_example, PostselectionMask};
pub use sectors::{
    hamming_diagnostic, hamming_gadget, parity_gadget, reachable_sums, spin_sum_to_weight,
    weight_to_spin_sum, HammingDiagnostic,
};

use std::f64::consts::{PI, TAU};

/// Maps an angle into `(-π, π]`.
pub(crate) fn wrap_signed(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t > PI {
        t - TAU
    } else {
        t
    }
}
