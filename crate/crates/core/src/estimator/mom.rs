use num_complex::Complex64;
use serde::Serialize;

use crate::error::{NqsError, Result};

/// Shape of a median-of-means estimate: `l` empirical means of `k` draws each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MomConfig {
    pub k: usize,
    pub l: usize,
    pub derivation: Option<String>,
}

impl MomConfig {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(NqsError::InvalidParameter(format!(
                "median of means needs k ≥ 1 and l ≥ 1, got k = {k}, l = {l}"
            )));
        }
        Ok(MomConfig {
            k,
            l,
            derivation: None,
        })
    }

    /// `k = ⌈4/ε²⌉`, `l = 8n`; two AR queries per draw give `2kl = 64n/ε²`.
    pub fn for_fidelity(eps: f64, n: usize) -> Result<Self> {
        let mut cfg = Self::auto(eps, n)?;
        cfg.derivation = Some(format!(
            "k = ceil(4/eps^2) = {}, l = 8n = {}, eps = {eps}, n = {n}; 2 AR queries per draw, budget 2kl = {}",
            cfg.k,
            cfg.l,
            2 * cfg.k * cfg.l
        ));
        Ok(cfg)
    }

    /// `k = ⌈4/ε²⌉`, `l = 8n`; at most `s` AR queries per draw give `s·kl = 32sn/ε²`.
    pub fn for_observable(eps: f64, n: usize, s: usize) -> Result<Self> {
        let mut cfg = Self::auto(eps, n)?;
        cfg.derivation = Some(format!(
            "k = ceil(4/eps^2) = {}, l = 8n = {}, eps = {eps}, n = {n}; at most s = {s} AR queries per draw, budget s*k*l = {}",
            cfg.k,
            cfg.l,
            s * cfg.k * cfg.l
        ));
        Ok(cfg)
    }

    fn auto(eps: f64, n: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(NqsError::InvalidParameter(format!(
                "eps must lie in (0, 1), got {eps}"
            )));
        }
        if n == 0 {
            return Err(NqsError::InvalidParameter("n must be at least 1".into()));
        }
        // the offset absorbs rounding in 4/eps² for decimal eps such as 0.1
        let k = (4.0 / (eps * eps) - 1e-9).ceil() as usize;
        Self::new(k.max(1), 8 * n)
    }

    pub fn draws(&self) -> usize {
        self.k * self.l
    }
}

fn lower_median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

/// Coordinate-wise median of the `l` means of consecutive blocks of `k` values.
///
/// For even `l` the lower median is returned.
pub fn median_of_means(values: &[Complex64], k: usize, l: usize) -> Complex64 {
    assert_eq!(values.len(), k * l, "expected k·l values");
    let means: Vec<Complex64> = values
        .chunks(k)
        .map(|block| {
            // shifted by the first value so that a constant block averages to itself exactly
            let shift = block[0];
            shift + block.iter().map(|x| x - shift).sum::<Complex64>() / k as f64
        })
        .collect();
    let mut re: Vec<f64> = means.iter().map(|c| c.re).collect();
    let mut im: Vec<f64> = means.iter().map(|c| c.im).collect();
    Complex64::new(lower_median(&mut re), lower_median(&mut im))
}

/// Median of means over `cfg.k · cfg.l` draws from `draw`.
pub fn mom_estimate<F>(mut draw: F, cfg: &MomConfig) -> Result<Complex64>
where
    F: FnMut() -> Result<Complex64>,
{
    let values = (0..cfg.draws())
        .map(|_| draw())
        .collect::<Result<Vec<_>>>()?;
    Ok(median_of_means(&values, cfg.k, cfg.l))
}
