use num_complex::Complex64;
use rand::RngCore;

use super::{discard_warnings, mom::median_of_means, EstimateReport, MomConfig};
use crate::error::{NqsError, Result};
use crate::model::{all_configs, DenseState, RatioResult, SpinConfig};
use crate::oracle::{ArOracle, StatsSnapshot};

/// Largest `n` accepted by [`fidelity_exhaustive`].
pub const EXHAUSTIVE_FIDELITY_CAP: usize = 12;

/// One draw `G(x, y) = [f_ψ(x)/f_ψ(y)]·[f_φ(y)/f_φ(x)]` with `x ~ |φ|²`, `y ~ |ψ|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct GVariate {
    pub x: SpinConfig,
    pub y: SpinConfig,
    pub value: Complex64,
}

fn same_backend<P: ArOracle + ?Sized, Q: ArOracle + ?Sized>(psi: &P, phi: &Q) -> bool {
    std::ptr::eq(psi.stats(), phi.stats())
}

fn snapshot<P: ArOracle + ?Sized, Q: ArOracle + ?Sized>(psi: &P, phi: &Q) -> StatsSnapshot {
    if same_backend(psi, phi) {
        psi.stats().snapshot()
    } else {
        psi.stats().snapshot() + phi.stats().snapshot()
    }
}

/// Draws one `G` variate: two SAMP and two AR queries. `None` if a ratio came back `DIV`,
/// in which case the second AR query is skipped.
pub fn draw_g<P, Q>(psi: &P, phi: &Q, rng: &mut dyn RngCore) -> Result<Option<GVariate>>
where
    P: ArOracle + ?Sized,
    Q: ArOracle + ?Sized,
{
    let x = phi.samp_query(rng)?;
    let y = psi.samp_query(rng)?;
    let RatioResult::Value(a) = psi.ar_query(&x, &y)? else {
        return Ok(None);
    };
    let RatioResult::Value(b) = phi.ar_query(&y, &x)? else {
        return Ok(None);
    };
    Ok(Some(GVariate {
        x,
        y,
        value: (a * b).to_complex(),
    }))
}

/// `|⟨φ|ψ⟩|²` from AR and SAMP access with the auto-derived `k = ⌈4/ε²⌉`, `l = 8n`.
pub fn fidelity<P, Q>(
    psi: &P,
    phi: &Q,
    eps: f64,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<EstimateReport>
where
    P: ArOracle + ?Sized,
    Q: ArOracle + ?Sized,
{
    let cfg = MomConfig::for_fidelity(eps, n)?;
    fidelity_with_config(psi, phi, &cfg, eps, rng)
}

/// As [`fidelity`] with an explicit configuration; the estimate is clamped to `[0, 1 + eps]`.
pub fn fidelity_with_config<P, Q>(
    psi: &P,
    phi: &Q,
    cfg: &MomConfig,
    eps: f64,
    rng: &mut dyn RngCore,
) -> Result<EstimateReport>
where
    P: ArOracle + ?Sized,
    Q: ArOracle + ?Sized,
{
    if psi.n() != phi.n() {
        return Err(NqsError::DimensionMismatch(format!(
            "fidelity between {}-qubit and {}-qubit states",
            psi.n(),
            phi.n()
        )));
    }
    let before = snapshot(psi, phi);
    let draws = cfg.draws();
    let limit = draws as u64;
    let mut values = Vec::with_capacity(draws);
    let mut discards = 0u64;
    while values.len() < draws {
        match draw_g(psi, phi, rng)? {
            Some(g) => values.push(g.value),
            None => {
                discards += 1;
                if discards > limit {
                    return Err(NqsError::TooManyDiscards { discards, limit });
                }
            }
        }
    }
    let raw = median_of_means(&values, cfg.k, cfg.l);
    Ok(EstimateReport {
        estimate: raw.re.clamp(0.0, 1.0 + eps),
        raw: [raw.re, raw.im],
        k: cfg.k,
        l: cfg.l,
        derivation: cfg.derivation.clone(),
        queries: snapshot(psi, phi) - before,
        discards,
        warnings: discard_warnings(discards, draws),
    })
}

/// `Σ_{x,y} φ*(x) ψ(x) ψ*(y) φ(y)` by direct double summation.
pub fn fidelity_exhaustive(psi: &DenseState, phi: &DenseState) -> Result<f64> {
    if psi.n() != phi.n() {
        return Err(NqsError::DimensionMismatch(format!(
            "fidelity between {}-qubit and {}-qubit states",
            psi.n(),
            phi.n()
        )));
    }
    if psi.n() > EXHAUSTIVE_FIDELITY_CAP {
        return Err(NqsError::ResourceLimit(format!(
            "exhaustive fidelity over 4^{} pairs exceeds the n = {EXHAUSTIVE_FIDELITY_CAP} cap",
            psi.n()
        )));
    }
    let (p, f) = (psi.amplitudes(), phi.amplitudes());
    let mut total = Complex64::new(0.0, 0.0);
    for x in 0..p.len() {
        let left = f[x].conj() * p[x];
        for y in 0..p.len() {
            total += left * p[y].conj() * f[y];
        }
    }
    Ok(total.re)
}

/// `Σ_{x,y} |φ(x)|² |ψ(y)|² G(x, y)` over every pair with positive weight, two AR queries
/// per pair. The Born tables are supplied by the caller in canonical index order.
pub fn fidelity_enumerated<P, Q>(
    psi: &P,
    phi: &Q,
    psi_born: &[f64],
    phi_born: &[f64],
) -> Result<f64>
where
    P: ArOracle + ?Sized,
    Q: ArOracle + ?Sized,
{
    let n = psi.n();
    if phi.n() != n || psi_born.len() != 1 << n || phi_born.len() != 1 << n {
        return Err(NqsError::DimensionMismatch(
            "backends and Born tables must share n".into(),
        ));
    }
    let configs: Vec<SpinConfig> = all_configs(n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (x, &px) in configs.iter().zip(phi_born) {
        for (y, &py) in configs.iter().zip(psi_born) {
            let w = px * py;
            if w == 0.0 {
                continue;
            }
            let (RatioResult::Value(a), RatioResult::Value(b)) =
                (psi.ar_query(x, y)?, phi.ar_query(y, x)?)
            else {
                return Err(NqsError::InvalidState(format!(
                    "DIV ratio at a pair ({x}, {y}) of positive Born weight"
                )));
            };
            total += w * (a * b).to_complex();
        }
    }
    Ok(total.re)
}
