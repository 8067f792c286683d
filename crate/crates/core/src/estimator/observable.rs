use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::RngCore;

use super::{discard_warnings, mom::median_of_means, EstimateReport, MomConfig};
use crate::error::{NqsError, Result};
use crate::gadget::{Pauli, PauliString};
use crate::model::{DenseState, RatioResult, SpinConfig};
use crate::oracle::ArOracle;

const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// A Hermitian `2^n × 2^n` matrix stored by rows, with a declared operator-norm bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseObservable {
    n: usize,
    rows: BTreeMap<u64, Vec<(u64, Complex64)>>,
    norm_bound: f64,
}

impl SparseObservable {
    /// Entries are `(row, column, value)` in canonical index order. Repeated positions are summed
    /// and exact zeros dropped.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (u64, u64, Complex64)>,
        norm_bound: f64,
    ) -> Result<Self> {
        if n > 63 {
            return Err(NqsError::ResourceLimit(format!("{n} qubits exceeds 63")));
        }
        if !(norm_bound.is_finite() && norm_bound >= 0.0) {
            return Err(NqsError::InvalidParameter(format!(
                "norm bound must be finite and non-negative, got {norm_bound}"
            )));
        }
        let dim = 1u64 << n;
        let mut map: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for (j, k, c) in entries {
            if j >= dim || k >= dim {
                return Err(NqsError::DimensionMismatch(format!(
                    "entry ({j}, {k}) outside a {dim}-dimensional space"
                )));
            }
            *map.entry((j, k)).or_default() += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        for (&(j, k), &c) in &map {
            let mirror = map.get(&(k, j)).copied().unwrap_or_default();
            if (mirror - c.conj()).norm() > HERMITICITY_TOLERANCE {
                return Err(NqsError::InvalidParameter(format!(
                    "observable is not Hermitian at ({j}, {k})"
                )));
            }
        }
        let mut rows: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for ((j, k), c) in map {
            rows.entry(j).or_default().push((k, c));
        }
        Ok(SparseObservable { n, rows, norm_bound })
    }

    /// The Pauli string as a matrix; one entry per row, norm 1.
    pub fn from_pauli(p: &PauliString) -> Result<Self> {
        let n = p.len();
        if n > 20 {
            return Err(NqsError::ResourceLimit(format!(
                "materializing a {n}-qubit Pauli string row by row"
            )));
        }
        let entries = (0..1u64 << n).map(|j| {
            let mut k = j;
            let mut c = Complex64::new(1.0, 0.0);
            for (q, letter) in p.letters().iter().enumerate() {
                let bit = n - 1 - q;
                let down = (j >> bit) & 1 == 1;
                match letter {
                    Pauli::I => {}
                    Pauli::X => k ^= 1 << bit,
                    Pauli::Y => {
                        k ^= 1 << bit;
                        c *= if down {
                            Complex64::new(0.0, 1.0)
                        } else {
                            Complex64::new(0.0, -1.0)
                        };
                    }
                    Pauli::Z => {
                        if down {
                            c = -c;
                        }
                    }
                }
            }
            (j, k, c)
        });
        Self::from_entries(n, entries, 1.0)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_pauli(&PauliString::identity(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Nonzero entries `(column, value)` of row `j`.
    pub fn row(&self, j: u64) -> &[(u64, Complex64)] {
        self.rows.get(&j).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest number of nonzero entries in any row.
    pub fn row_sparsity(&self) -> usize {
        self.rows.values().map(Vec::len).max().unwrap_or(0)
    }

    /// `⟨ψ|O|ψ⟩` by dense summation.
    pub fn expectation_exact(&self, state: &DenseState) -> Result<Complex64> {
        if state.n() != self.n {
            return Err(NqsError::DimensionMismatch(format!(
                "{}-qubit observable on a {}-qubit state",
                self.n,
                state.n()
            )));
        }
        let a = state.amplitudes();
        Ok(self
            .rows
            .iter()
            .map(|(&j, row)| {
                a[j as usize].conj()
                    * row
                        .iter()
                        .map(|&(k, c)| c * a[k as usize])
                        .sum::<Complex64>()
            })
            .sum())
    }
}

/// `⟨ψ|O|ψ⟩` from AR and SAMP access with `k = ⌈4/ε²⌉`, `l = 8n`.
pub fn expectation<P: ArOracle + ?Sized>(
    psi: &P,
    obs: &SparseObservable,
    eps: f64,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<EstimateReport> {
    let cfg = MomConfig::for_observable(eps, n, obs.row_sparsity())?;
    expectation_with_config(psi, obs, &cfg, rng)
}

/// Each draw samples `j ~ |ψ|²` and forms `X = Σ_k O_jk f(k)/f(j)` with one AR query per
/// nonzero entry of row `j`. A `DIV` answer discards the draw.
pub fn expectation_with_config<P: ArOracle + ?Sized>(
    psi: &P,
    obs: &SparseObservable,
    cfg: &MomConfig,
    rng: &mut dyn RngCore,
) -> Result<EstimateReport> {
    if psi.n() != obs.n {
        return Err(NqsError::DimensionMismatch(format!(
            "{}-qubit observable on a {}-qubit backend",
            obs.n,
            psi.n()
        )));
    }
    if obs.norm_bound > 1.0 {
        return Err(NqsError::InvalidParameter(format!(
            "budgeted estimation needs a norm bound ≤ 1, got {}",
            obs.norm_bound
        )));
    }
    let before = psi.stats().snapshot();
    let draws = cfg.draws();
    let limit = draws as u64;
    let mut values = Vec::with_capacity(draws);
    let mut discards = 0u64;
    'draw: while values.len() < draws {
        let j = psi.samp_query(rng)?;
        let mut x = Complex64::new(0.0, 0.0);
        for &(k, c) in obs.row(j.index()) {
            let k = SpinConfig::from_index(k, obs.n);
            match psi.ar_query(&k, &j)? {
                RatioResult::Value(r) => x += c * r.to_complex(),
                RatioResult::Div => {
                    discards += 1;
                    if discards > limit {
                        return Err(NqsError::TooManyDiscards { discards, limit });
                    }
                    continue 'draw;
                }
            }
        }
        values.push(x);
    }
    let raw = median_of_means(&values, cfg.k, cfg.l);
    Ok(EstimateReport {
        estimate: raw.re,
        raw: [raw.re, raw.im],
        k: cfg.k,
        l: cfg.l,
        derivation: cfg.derivation.clone(),
        queries: psi.stats().snapshot() - before,
        discards,
        warnings: discard_warnings(discards, draws),
    })
}
