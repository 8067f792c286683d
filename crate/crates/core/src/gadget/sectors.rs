use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::wrap_signed;
use crate::error::{NqsError, Result};
use crate::model::NqsModel;

/// Values `-n, -n + 2, …, n` taken by `Σ_j v_j` over `{-1, +1}^n`.
pub fn reachable_sums(n: usize) -> Vec<i64> {
    let n = n as i64;
    (0..=n).map(|w| n - 2 * w).rev().collect()
}

/// `Σ v_j = n - 2w` for a configuration with `w` spins equal to `-1`.
pub fn weight_to_spin_sum(n: usize, weight: usize) -> Result<i64> {
    if weight > n {
        return Err(NqsError::InvalidParameter(format!(
            "Hamming weight {weight} exceeds n = {n}"
        )));
    }
    Ok(n as i64 - 2 * weight as i64)
}

pub fn spin_sum_to_weight(n: usize, sum: i64) -> Result<usize> {
    check_reachable(n, sum)?;
    Ok(((n as i64 - sum) / 2) as usize)
}

fn check_reachable(n: usize, k: i64) -> Result<()> {
    let n_i = n as i64;
    if k.abs() > n_i || (n_i - k).rem_euclid(2) != 0 {
        return Err(NqsError::InvalidParameter(format!(
            "spin sum {k} is not reachable with n = {n}"
        )));
    }
    Ok(())
}

/// Which spin-sum sectors survive the Hamming gadget for `(n, k)`.
///
/// A node excluding sector `j` vanishes whenever `Σv - j` is a multiple of `n`, so for even `n`
/// or `|k| = n` the target sector itself is removed along with the others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HammingDiagnostic {
    pub n: usize,
    pub k: i64,
    pub surviving_sums: Vec<i64>,
    /// True when the surviving sectors are exactly `{k}`.
    pub exact: bool,
}

pub fn hamming_diagnostic(n: usize, k: i64) -> Result<HammingDiagnostic> {
    check_reachable(n, k)?;
    let n_i = n as i64;
    let surviving_sums: Vec<i64> = reachable_sums(n)
        .into_iter()
        .filter(|&s| {
            reachable_sums(n)
                .into_iter()
                .filter(|&j| j != k)
                .all(|j| (s - j).rem_euclid(n_i) != 0)
        })
        .collect();
    let exact = surviving_sums == [k];
    Ok(HammingDiagnostic {
        n,
        k,
        surviving_sums,
        exact,
    })
}

/// Appends one fully connected node per reachable sector `j ≠ k`, with weight `iπ/n` and
/// bias `iπ/2 - ijπ/n` (wrapped into `(-π, π]`). Node `j` contributes
/// `2cos[π/2 + π(Σv - j)/n] = -2 sin[π(Σv - j)/n]`.
pub fn hamming_gadget(model: &NqsModel, k: i64) -> Result<(NqsModel, HammingDiagnostic)> {
    let n = model.n();
    if n == 0 {
        return Err(NqsError::InvalidParameter(
            "the Hamming gadget needs at least one visible node".into(),
        ));
    }
    let diagnostic = hamming_diagnostic(n, k)?;
    let step = PI / n as f64;
    let couplings = vec![Complex64::new(0.0, step); n];
    let mut out = model.clone();
    for j in reachable_sums(n).into_iter().filter(|&j| j != k) {
        let bias = wrap_signed(FRAC_PI_2 - j as f64 * step);
        out.push_hidden(Complex64::new(0.0, bias), &couplings);
    }
    Ok((out, diagnostic))
}

/// Projects onto configurations with an odd number of `-1` spins.
///
/// Two identical nodes with coupling `-iπ/4` to every visible node and bias
/// `i(πn/4 + π/2)` (wrapped) see the input `i(π/2 + πw/2)` for `w` down spins, so each contributes
/// `-2 sin(πw/2)` and together `4 sin²(πw/2)`: 0 for even `w`, 4 for odd `w`.
pub fn parity_gadget(model: &NqsModel) -> NqsModel {
    let n = model.n();
    let couplings = vec![Complex64::new(0.0, -FRAC_PI_4); n];
    let bias = Complex64::new(0.0, wrap_signed(FRAC_PI_4 * n as f64 + FRAC_PI_2));
    let mut out = model.clone();
    out.push_hidden(bias, &couplings);
    out.push_hidden(bias, &couplings);
    out
}
