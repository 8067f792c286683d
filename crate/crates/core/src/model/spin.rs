use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::RngCore;

use crate::error::{NqsError, Result};

/// A configuration `v ∈ {-1, +1}^n` of the visible layer.
///
/// The canonical index maps `v` to `Σ_k bit_k 2^(n-1-k)` with `bit_k = (1 - v_k) / 2`,
/// so the all-`+1` configuration has index 0 and `v_1` is the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(bad) = spins.iter().find(|&&s| s != 1 && s != -1) {
            return Err(NqsError::InvalidParameter(format!(
                "spin entries must be ±1, found {bad}"
            )));
        }
        Ok(SpinConfig(spins))
    }

    pub fn all_up(n: usize) -> Self {
        SpinConfig(vec![1; n])
    }

    /// Decodes a canonical index. Requires `n < 64` and `index < 2^n`.
    pub fn from_index(index: u64, n: usize) -> Self {
        debug_assert!(n < 64 && index < (1u64 << n));
        let spins = (0..n)
            .map(|k| {
                if (index >> (n - 1 - k)) & 1 == 1 {
                    -1
                } else {
                    1
                }
            })
            .collect();
        SpinConfig(spins)
    }

    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &s| (acc << 1) | u64::from(s == -1))
    }

    pub fn uniform<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Self {
        SpinConfig(
            (0..n)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, k: usize) -> i8 {
        self.0[k]
    }

    pub fn flip(&mut self, k: usize) {
        self.0[k] = -self.0[k];
    }

    pub fn flipped(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.flip(k);
        out
    }

    /// `Σ_k v_k`.
    pub fn spin_sum(&self) -> i64 {
        self.0.iter().map(|&s| i64::from(s)).sum()
    }

    /// Number of `-1` entries, i.e. the Hamming weight of the canonical bit string.
    pub fn down_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    pub(crate) fn expect_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            Err(NqsError::DimensionMismatch(format!(
                "configuration has length {}, expected {n}",
                self.len()
            )))
        } else {
            Ok(())
        }
    }
}

/// Iterates all `2^n` configurations in canonical index order.
pub fn all_configs(n: usize) -> impl Iterator<Item = SpinConfig> {
    (0..(1u64 << n)).map(move |i| SpinConfig::from_index(i, n))
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl FromStr for SpinConfig {
    type Err = NqsError;

    /// Parses strings such as `"+-++"`; `1`/`0` are accepted for `+`/`-`.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '+' | '1' => Ok(1),
                '-' | '0' => Ok(-1),
                other => Err(NqsError::Parse(format!(
                    "unexpected character {other:?} in spin string"
                ))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SpinConfig)
    }
}
