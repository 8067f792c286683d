use rand::RngCore;

use super::{ArOracle, OracleStats, SampOracle, SqOracle};
use crate::error::Result;
use crate::model::{DenseState, LogComplex, RatioResult, SpinConfig};
use crate::sampler::BornTable;

/// Oracle backend over an enumerated state; every query is answered exactly.
pub struct DenseBackend {
    state: DenseState,
    table: BornTable,
    stats: OracleStats,
}

impl DenseBackend {
    pub fn new(state: DenseState) -> Self {
        let table = BornTable::new(&state);
        DenseBackend {
            state,
            table,
            stats: OracleStats::default(),
        }
    }

    pub fn state(&self) -> &DenseState {
        &self.state
    }
}

impl SampOracle for DenseBackend {
    fn n(&self) -> usize {
        self.state.n()
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        Ok(self.table.sample(rng))
    }
}

impl ArOracle for DenseBackend {
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        if i == j {
            return Ok(RatioResult::Value(LogComplex::ONE));
        }
        Ok(RatioResult::from_pair(
            LogComplex::from_complex(self.state.amplitude(i)),
            LogComplex::from_complex(self.state.amplitude(j)),
        ))
    }
}

impl SqOracle for DenseBackend {
    fn amplitude(&self, i: &SpinConfig) -> Result<LogComplex> {
        Ok(LogComplex::from_complex(self.state.amplitude(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{all_configs, Caps, NqsModel};
    use num_complex::Complex64;

    #[test]
    fn uniform_amplitudes() {
        let backend = DenseBackend::new(NqsModel::zeros(3, 1).state_vector(&Caps::default()).unwrap());
        for v in all_configs(3) {
            let a = backend.sq_query(&v).unwrap();
            assert!((a.abs() - 8f64.sqrt().recip()).abs() < 1e-15);
        }
    }

    #[test]
    fn ratio_conventions() {
        let amps = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        let backend = DenseBackend::new(DenseState::from_amplitudes(2, amps).unwrap());
        let v = |k| SpinConfig::from_index(k, 2);
        assert_eq!(backend.ar_query(&v(0), &v(1)).unwrap(), RatioResult::Div);
        assert_eq!(
            backend.ar_query(&v(1), &v(2)).unwrap(),
            RatioResult::Value(LogComplex::ONE)
        );
        assert!(backend.ar_query(&v(1), &v(0)).unwrap().value().unwrap().is_zero());
        let r = backend.ar_query(&v(3), &v(0)).unwrap().value().unwrap();
        assert!((r.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
