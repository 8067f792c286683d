use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{NqsError, Result};
use crate::model::{NqsModel, SpinConfig};

/// A subcube `r ∈ {+1, -1, ⋆}^n`; `None` marks a free coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostselectionMask(Vec<Option<i8>>);

impl PostselectionMask {
    pub fn new(entries: Vec<Option<i8>>) -> Result<Self> {
        if entries.iter().flatten().any(|&r| r != 1 && r != -1) {
            return Err(NqsError::InvalidParameter(
                "fixed mask entries must be +1 or -1".into(),
            ));
        }
        Ok(PostselectionMask(entries))
    }

    pub fn free(n: usize) -> Self {
        PostselectionMask(vec![None; n])
    }

    pub fn entries(&self) -> &[Option<i8>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fixed_count(&self) -> usize {
        self.0.iter().flatten().count()
    }

    pub fn contains(&self, v: &SpinConfig) -> bool {
        self.0
            .iter()
            .zip(v.spins())
            .all(|(r, &s)| r.is_none_or(|r| r == s))
    }

    /// Intersection of two subcubes; `None` if they fix some coordinate to opposite values.
    pub fn merge(&self, other: &Self) -> Option<Self> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| match (a, b) {
                (Some(x), Some(y)) if x != y => None,
                (Some(x), _) | (None, Some(x)) => Some(Some(*x)),
                (None, None) => Some(None),
            })
            .collect::<Option<Vec<_>>>()
            .map(PostselectionMask)
    }
}

impl FromStr for PostselectionMask {
    type Err = NqsError;

    /// Accepts `+`/`1`, `-`/`0` and `*`/`⋆` per coordinate.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' | '1' => Ok(Some(1)),
                '-' | '0' => Ok(Some(-1)),
                '*' | '⋆' => Ok(None),
                _ => Err(NqsError::Parse(format!("invalid mask character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PostselectionMask)
    }
}

impl fmt::Display for PostselectionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.0 {
            f.write_str(match r {
                Some(1) => "+",
                Some(_) => "-",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// Conditions the Born distribution on the subcube `mask`.
///
/// Each fixed coordinate `r_i` gets a hidden node with bias `iπ/4` and coupling `-iπ/4·r_i`
/// to `v_i` only, contributing `2cosh[iπ/4 (1 - r_i v_i)]`: 2 if `v_i = r_i`, exactly 0 otherwise.
pub fn postselect(model: &NqsModel, mask: &PostselectionMask) -> Result<NqsModel> {
    if mask.len() != model.n() {
        return Err(NqsError::DimensionMismatch(format!(
            "mask of length {} for a model with n = {}",
            mask.len(),
            model.n()
        )));
    }
    let mut out = model.clone();
    for (i, r) in mask.entries().iter().enumerate() {
        if let Some(r) = r {
            let mut couplings = vec![Complex64::new(0.0, 0.0); model.n()];
            couplings[i] = Complex64::new(0.0, -FRAC_PI_4 * f64::from(*r));
            out.push_hidden(Complex64::new(0.0, FRAC_PI_4), &couplings);
        }
    }
    Ok(out)
}

/// A network with `n` visible and two hidden nodes whose amplitude vanishes identically:
/// the hidden nodes postselect `v_1 = +1` and `v_1 = -1` at once.
pub fn zero_state_example(n: usize) -> Result<NqsModel> {
    if n == 0 {
        return Err(NqsError::InvalidParameter(
            "the example needs at least one visible node".into(),
        ));
    }
    let base = NqsModel::zeros(n, 0);
    let mut up = PostselectionMask::free(n);
    up.0[0] = Some(1);
    let mut down = PostselectionMask::free(n);
    down.0[0] = Some(-1);
    postselect(&postselect(&base, &up)?, &down)
}
