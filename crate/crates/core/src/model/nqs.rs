use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::dense::DenseState;
use super::logcomplex::LogComplex;
use super::ratio::RatioResult;
use super::spin::{all_configs, SpinConfig};
use crate::error::{NqsError, Result};

/// Default bound on `‖θ‖∞` enforced by [`NqsModel::new`].
pub const DEFAULT_PARAM_BOUND: f64 = 50.0;

/// Tolerance used to recognise `cosh(z) = 0`, i.e. `Re z = 0` and `Im z ≡ π/2 (mod π)`.
pub const COSH_ZERO_TOLERANCE: f64 = 1e-12;

/// Enumeration limits for the brute-force routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_visible: usize,
    pub max_hidden: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_visible: 24,
            max_hidden: 24,
        }
    }
}

/// A neural network quantum state `θ = (a, b, W)` with `n` visible and `m` hidden nodes.
///
/// The unnormalized amplitude is
/// `f(v) = exp(aᵀv) ∏_i 2cosh(b_i + Σ_j v_j W_ji)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NqsModel {
    n: usize,
    m: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    /// Row-major `n × m`; `w[j * m + i]` couples visible `j` to hidden `i`.
    w: Vec<Complex64>,
}

fn check_finite(label: &str, values: &[Complex64]) -> Result<()> {
    if values.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(())
    } else {
        Err(NqsError::InvalidParameter(format!(
            "{label} contains a non-finite entry"
        )))
    }
}

impl NqsModel {
    /// Builds a model and checks `‖θ‖∞ ≤ DEFAULT_PARAM_BOUND`.
    pub fn new(a: Vec<Complex64>, b: Vec<Complex64>, w: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::with_bound(a, b, w, DEFAULT_PARAM_BOUND)
    }

    pub fn with_bound(
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        w: Vec<Vec<Complex64>>,
        bound: f64,
    ) -> Result<Self> {
        let n = a.len();
        let m = b.len();
        if w.len() != n {
            return Err(NqsError::DimensionMismatch(format!(
                "W has {} rows but a has {n} entries",
                w.len()
            )));
        }
        if let Some((j, row)) = w.iter().enumerate().find(|(_, row)| row.len() != m) {
            return Err(NqsError::DimensionMismatch(format!(
                "row {j} of W has {} entries but b has {m}",
                row.len()
            )));
        }
        let model = Self::from_flat(n, m, a, b, w.concat())?;
        let norm = model.norm_inf();
        if norm > bound {
            return Err(NqsError::InvalidParameter(format!(
                "‖θ‖∞ = {norm} exceeds the bound {bound}"
            )));
        }
        Ok(model)
    }

    /// Finite-entries check only; used for gadget outputs, which are exempt from user bounds.
    pub(crate) fn from_flat(
        n: usize,
        m: usize,
        a: Vec<Complex64>,
        b: Vec<Complex64>,
        w: Vec<Complex64>,
    ) -> Result<Self> {
        if a.len() != n || b.len() != m || w.len() != n * m {
            return Err(NqsError::DimensionMismatch(format!(
                "expected a: {n}, b: {m}, W: {n}×{m}"
            )));
        }
        check_finite("a", &a)?;
        check_finite("b", &b)?;
        check_finite("W", &w)?;
        Ok(NqsModel { n, m, a, b, w })
    }

    /// All parameters zero: `f(v) = 2^m` for every `v`.
    pub fn zeros(n: usize, m: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        NqsModel {
            n,
            m,
            a: vec![zero; n],
            b: vec![zero; m],
            w: vec![zero; n * m],
        }
    }

    /// Random complex parameters with every entry of modulus at most `scale`.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, scale: f64, rng: &mut R) -> Self {
        let half = scale * FRAC_1_SQRT_2;
        let mut draw = |count: usize| -> Vec<Complex64> {
            (0..count)
                .map(|_| {
                    Complex64::new(
                        rng.random_range(-half..=half),
                        rng.random_range(-half..=half),
                    )
                })
                .collect()
        };
        let a = draw(n);
        let b = draw(m);
        let w = draw(n * m);
        NqsModel { n, m, a, b, w }
    }

    /// Random real parameters in `[-scale, scale]`: an ordinary RBM.
    pub fn random_real<R: Rng + ?Sized>(n: usize, m: usize, scale: f64, rng: &mut R) -> Self {
        let mut draw = |count: usize| -> Vec<Complex64> {
            (0..count)
                .map(|_| Complex64::new(rng.random_range(-scale..=scale), 0.0))
                .collect()
        };
        let a = draw(n);
        let b = draw(m);
        let w = draw(n * m);
        NqsModel { n, m, a, b, w }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn visible_bias(&self) -> &[Complex64] {
        &self.a
    }

    pub fn hidden_bias(&self) -> &[Complex64] {
        &self.b
    }

    /// `W_ji`, the coupling between visible `j` and hidden `i`.
    pub fn weight(&self, j: usize, i: usize) -> Complex64 {
        self.w[j * self.m + i]
    }

    /// Couplings of visible node `j` to every hidden node.
    pub fn weight_row(&self, j: usize) -> &[Complex64] {
        &self.w[j * self.m..(j + 1) * self.m]
    }

    pub fn weight_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|j| self.weight_row(j).to_vec()).collect()
    }

    /// `‖θ‖∞ = max(‖a‖∞, ‖b‖∞, ‖W‖∞)` with complex moduli.
    pub fn norm_inf(&self) -> f64 {
        self.a
            .iter()
            .chain(&self.b)
            .chain(&self.w)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// True when every parameter has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.a.iter().chain(&self.b).chain(&self.w).all(|c| c.im == 0.0)
    }

    /// Appends a hidden node with the given bias and one coupling per visible node.
    pub(crate) fn push_hidden(&mut self, bias: Complex64, couplings: &[Complex64]) {
        debug_assert_eq!(couplings.len(), self.n);
        let m = self.m;
        let mut w = Vec::with_capacity(self.n * (m + 1));
        for (j, &c) in couplings.iter().enumerate() {
            w.extend_from_slice(&self.w[j * m..(j + 1) * m]);
            w.push(c);
        }
        self.w = w;
        self.b.push(bias);
        self.m += 1;
    }

    /// `a_j ↦ -a_j` and `W_ji ↦ -W_ji` for all `i`, which realises `f(v) ↦ f(v with v_j flipped)`.
    pub(crate) fn negate_visible(&mut self, j: usize) {
        self.a[j] = -self.a[j];
        let m = self.m;
        for c in &mut self.w[j * m..(j + 1) * m] {
            *c = -*c;
        }
    }

    /// `aᵀv`.
    pub(crate) fn visible_term(&self, v: &SpinConfig) -> Complex64 {
        self.a
            .iter()
            .zip(v.spins())
            .map(|(a, &s)| a * f64::from(s))
            .sum()
    }

    /// The hidden-node inputs `θ_i = b_i + Σ_j v_j W_ji`.
    pub fn hidden_fields(&self, v: &SpinConfig) -> Vec<Complex64> {
        let mut z = self.b.clone();
        for (j, &s) in v.spins().iter().enumerate() {
            let row = self.weight_row(j);
            if s == 1 {
                z.iter_mut().zip(row).for_each(|(zi, w)| *zi += w);
            } else {
                z.iter_mut().zip(row).for_each(|(zi, w)| *zi -= w);
            }
        }
        z
    }

    /// `f_θ(v)` from the product form, evaluated in the log domain.
    pub fn log_amplitude(&self, v: &SpinConfig) -> Result<LogComplex> {
        v.expect_len(self.n)?;
        let mut acc = self.visible_term(v);
        for z in self.hidden_fields(v) {
            match log_2cosh(z) {
                Some(l) => acc += l,
                None => return Ok(LogComplex::ZERO),
            }
        }
        Ok(LogComplex::from_log(acc))
    }

    /// `f_θ(v)` by summing `exp(aᵀv + bᵀh + vᵀWh)` over all `2^m` hidden configurations.
    ///
    /// Kept independent of the product form so it can serve as a test oracle.
    pub fn log_amplitude_brute_force(&self, v: &SpinConfig, caps: &Caps) -> Result<LogComplex> {
        v.expect_len(self.n)?;
        if self.m > caps.max_hidden {
            return Err(NqsError::ResourceLimit(format!(
                "brute-force evaluation over 2^{} hidden configurations exceeds cap 2^{}",
                self.m, caps.max_hidden
            )));
        }
        let av: Complex64 = (0..self.n).map(|j| self.a[j] * f64::from(v.get(j))).sum();
        let exponents: Vec<Complex64> = all_configs(self.m)
            .map(|h| {
                let mut e = av;
                for i in 0..self.m {
                    let hi = f64::from(h.get(i));
                    e += self.b[i] * hi;
                    for j in 0..self.n {
                        e += self.weight(j, i) * f64::from(v.get(j)) * hi;
                    }
                }
                e
            })
            .collect();
        let max_re = exponents
            .iter()
            .map(|e| e.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: Complex64 = exponents
            .iter()
            .map(|e| (e - Complex64::new(max_re, 0.0)).exp())
            .sum();
        Ok(LogComplex::from_complex(sum).scale_log(max_re))
    }

    /// `f_θ(i) / f_θ(j)` with the divergence conventions of [`RatioResult`].
    pub fn amplitude_ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        i.expect_len(self.n)?;
        j.expect_len(self.n)?;
        if i == j {
            return Ok(RatioResult::Value(LogComplex::ONE));
        }
        Ok(RatioResult::from_pair(
            self.log_amplitude(i)?,
            self.log_amplitude(j)?,
        ))
    }

    /// Enumerates all `2^n` amplitudes and normalizes them by `Z_θ = sqrt(Σ_v |f_θ(v)|²)`.
    pub fn state_vector(&self, caps: &Caps) -> Result<DenseState> {
        if self.n > caps.max_visible {
            return Err(NqsError::ResourceLimit(format!(
                "state vector over 2^{} configurations exceeds cap 2^{}",
                self.n, caps.max_visible
            )));
        }
        let logs = all_configs(self.n)
            .map(|v| self.log_amplitude(&v))
            .collect::<Result<Vec<_>>>()?;
        DenseState::from_log_amplitudes(self.n, &logs)
    }
}

/// `ln(2cosh z)`, or `None` when `cosh z` is an exact zero within [`COSH_ZERO_TOLERANCE`].
///
/// Uses `2cosh z = e^z (1 + e^{-2z})` on the branch with `Re z ≥ 0`, so the exponential never overflows.
pub(crate) fn log_2cosh(z: Complex64) -> Option<Complex64> {
    if is_cosh_zero(z) {
        return None;
    }
    let z = if z.re < 0.0 { -z } else { z };
    let w = (-2.0 * z).exp();
    Some(z + ln_1p(w))
}

fn is_cosh_zero(z: Complex64) -> bool {
    if z.re.abs() > COSH_ZERO_TOLERANCE {
        return false;
    }
    let d = (z.im - FRAC_PI_2).rem_euclid(PI);
    d.min(PI - d) <= COSH_ZERO_TOLERANCE
}

fn ln_1p(w: Complex64) -> Complex64 {
    let re = if w.norm_sqr() < 0.25 {
        0.5 * (w.re * (2.0 + w.re) + w.im * w.im).ln_1p()
    } else {
        (1.0 + w).norm().ln()
    };
    Complex64::new(re, w.im.atan2(1.0 + w.re))
}
