use serde::{Serialize, Serializer};

use super::logcomplex::LogComplex;

/// Answer to an amplitude-ratio query `ψ(i) / ψ(j)`.
///
/// `Div` is returned only for a nonzero numerator over a zero denominator.
/// Zero over zero is the value 1, and zero over nonzero is an exact zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RatioResult {
    Value(LogComplex),
    Div,
}

impl RatioResult {
    pub fn from_pair(numerator: LogComplex, denominator: LogComplex) -> Self {
        match (numerator.is_zero(), denominator.is_zero()) {
            (true, true) => RatioResult::Value(LogComplex::ONE),
            (false, true) => RatioResult::Div,
            _ => RatioResult::Value(
                numerator
                    .checked_div(denominator)
                    .expect("denominator checked nonzero"),
            ),
        }
    }

    pub fn value(&self) -> Option<LogComplex> {
        match self {
            RatioResult::Value(v) => Some(*v),
            RatioResult::Div => None,
        }
    }

    pub fn is_div(&self) -> bool {
        matches!(self, RatioResult::Div)
    }

    /// The pair-conditional bias `r = (1 + |1/ratio|²)^-1` that `i` is returned
    /// when this is the ratio `ψ(i)/ψ(j)`; `Div` gives 1, an exact zero gives 0.
    pub fn pcond_bias(&self) -> f64 {
        match self {
            RatioResult::Div => 1.0,
            RatioResult::Value(v) if v.is_zero() => 0.0,
            // 1 / (1 + e^{-2 ln|ρ|}), evaluated without overflow
            RatioResult::Value(v) => {
                let t = v.log_norm_sqr();
                if t >= 0.0 {
                    1.0 / (1.0 + (-t).exp())
                } else {
                    let e = t.exp();
                    e / (1.0 + e)
                }
            }
        }
    }
}

impl Serialize for RatioResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            div: bool,
            log_mag: Option<f64>,
            phase: Option<f64>,
            re: Option<f64>,
            im: Option<f64>,
        }
        let repr = match self {
            RatioResult::Div => Repr {
                div: true,
                log_mag: None,
                phase: None,
                re: None,
                im: None,
            },
            RatioResult::Value(v) => {
                let c = v.to_complex();
                Repr {
                    div: false,
                    log_mag: v.log_mag().is_finite().then(|| v.log_mag()),
                    phase: Some(v.phase()),
                    re: Some(c.re),
                    im: Some(c.im),
                }
            }
        };
        repr.serialize(serializer)
    }
}
