use num_complex::Complex64;

use super::logcomplex::LogComplex;
use super::spin::SpinConfig;
use crate::error::{NqsError, Result};

/// An exhaustively enumerated, normalized wavefunction over `2^n` configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<Complex64>,
    log_z: f64,
}

impl DenseState {
    /// Normalizes unnormalized log-amplitudes given in canonical index order.
    pub fn from_log_amplitudes(n: usize, logs: &[LogComplex]) -> Result<Self> {
        check_len(n, logs.len())?;
        let max = logs
            .iter()
            .map(|l| l.log_mag())
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(NqsError::InvalidState(
                "every amplitude is exactly zero; the network does not encode a valid quantum state"
                    .into(),
            ));
        }
        let scaled: Vec<Complex64> = logs.iter().map(|l| l.scale_log(-max).to_complex()).collect();
        let norm_sqr: f64 = scaled.iter().map(|c| c.norm_sqr()).sum();
        let norm = norm_sqr.sqrt();
        Ok(DenseState {
            n,
            amplitudes: scaled.into_iter().map(|c| c / norm).collect(),
            log_z: max + norm.ln(),
        })
    }

    /// Normalizes a rectangular amplitude vector given in canonical index order.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let logs: Vec<LogComplex> = amplitudes
            .iter()
            .map(|&c| LogComplex::from_complex(c))
            .collect();
        Self::from_log_amplitudes(n, &logs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, v: &SpinConfig) -> Complex64 {
        self.amplitudes[v.index() as usize]
    }

    /// `Z`, the norm of the unnormalized amplitudes. May overflow to infinity; see [`Self::log_z`].
    pub fn z(&self) -> f64 {
        self.log_z.exp()
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// Born probabilities `|ψ(v)|²` in canonical order.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `⟨self|other⟩ = Σ conj(self) · other`.
    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(NqsError::DimensionMismatch(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.n, other.n
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Support of the state as canonical indices.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    /// Total variation distance between the Born distributions of two states.
    pub fn born_tv(&self, other: &DenseState) -> Result<f64> {
        if self.n != other.n {
            return Err(NqsError::DimensionMismatch(
                "TV distance between states of different size".into(),
            ));
        }
        Ok(0.5
            * self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| (a.norm_sqr() - b.norm_sqr()).abs())
                .sum::<f64>())
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n >= usize::BITS as usize || len != 1usize << n {
        return Err(NqsError::DimensionMismatch(format!(
            "{len} amplitudes do not describe a {n}-qubit state"
        )));
    }
    Ok(())
}
