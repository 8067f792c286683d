//! Polar log-domain complex numbers.
//!
//! Amplitudes of a network state can be far below the smallest normal `f64`
//! (they are only guaranteed to be bounded below by `2^-poly(n)`), so they are
//! carried as `(ln |c|, arg c)` with an explicit exact-zero encoding.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if p >= TAU {
        0.0
    } else {
        p
    }
}

/// A complex value stored as log-magnitude and phase.
///
/// `log_mag == f64::NEG_INFINITY` encodes an exact zero; its phase is always 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    log_mag: f64,
    phase: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mag: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub const ONE: LogComplex = LogComplex {
        log_mag: 0.0,
        phase: 0.0,
    };

    pub fn new(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogComplex {
                log_mag,
                phase: wrap_phase(phase),
            }
        }
    }

    /// Interprets a complex number `w` as the logarithm of the value, i.e. the result is `exp(w)`.
    pub fn from_log(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c.re == 0.0 && c.im == 0.0 {
            Self::ZERO
        } else {
            Self::new(c.norm().ln(), c.arg())
        }
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn is_zero(&self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn abs(&self) -> f64 {
        self.log_mag.exp()
    }

    /// `ln |c|²`.
    pub fn log_norm_sqr(&self) -> f64 {
        2.0 * self.log_mag
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_mag, -self.phase)
    }

    /// Reciprocal; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::new(-self.log_mag, -self.phase))
        }
    }

    /// Quotient; `None` when the divisor is zero.
    pub fn checked_div(&self, rhs: LogComplex) -> Option<Self> {
        rhs.recip().map(|r| *self * r)
    }

    /// Multiplies the magnitude by `e^delta`.
    pub fn scale_log(&self, delta: f64) -> Self {
        if self.is_zero() {
            Self::ZERO
        } else {
            Self::new(self.log_mag + delta, self.phase)
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_mag.exp(), self.phase)
        }
    }

    /// `|self / other - 1|`, the relative deviation of `self` from `other`.
    ///
    /// Two exact zeros have deviation 0; a zero against a nonzero has deviation 1
    /// (or infinity when only `other` is zero).
    pub fn relative_deviation(&self, other: &LogComplex) -> f64 {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => 0.0,
            (false, true) => f64::INFINITY,
            (true, false) => 1.0,
            (false, false) => {
                let dl = self.log_mag - other.log_mag;
                let mut dp = wrap_phase(self.phase - other.phase);
                if dp > PI {
                    dp -= TAU;
                }
                (Complex64::new(dl, dp).exp() - 1.0).norm()
            }
        }
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            LogComplex::ZERO
        } else {
            LogComplex::new(self.log_mag + rhs.log_mag, self.phase + rhs.phase)
        }
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "exp({} + {}i)", self.log_mag, self.phase)
        }
    }
}
