//! JSON model files.
//!
//! ```json
//! {"n": 1, "m": 1, "a": [[0.0, 0.0]], "b": [[0.0, 0.785]], "W": [[[0.0, -0.785]]]}
//! ```
//! Complex numbers are `[re, im]` pairs; `W` has `n` rows of `m` entries.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::nqs::{NqsModel, DEFAULT_PARAM_BOUND};
use crate::error::{NqsError, Result};

#[derive(Serialize, Deserialize)]
struct ModelFile {
    n: usize,
    m: usize,
    a: Vec<[f64; 2]>,
    b: Vec<[f64; 2]>,
    #[serde(rename = "W")]
    w: Vec<Vec<[f64; 2]>>,
}

fn to_complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

impl NqsModel {
    /// Parses a model file, rejecting dimension mismatches, non-finite entries and
    /// parameters beyond [`DEFAULT_PARAM_BOUND`].
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with_bound(text, DEFAULT_PARAM_BOUND)
    }

    pub fn from_json_with_bound(text: &str, bound: f64) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| NqsError::Parse(e.to_string()))?;
        if file.a.len() != file.n || file.b.len() != file.m || file.w.len() != file.n {
            return Err(NqsError::DimensionMismatch(format!(
                "declared n = {}, m = {} but a has {}, b has {}, W has {} rows",
                file.n,
                file.m,
                file.a.len(),
                file.b.len(),
                file.w.len()
            )));
        }
        let w = file.w.iter().map(|row| to_complex(row)).collect();
        NqsModel::with_bound(to_complex(&file.a), to_complex(&file.b), w, bound)
    }

    pub fn to_json(&self) -> String {
        let file = ModelFile {
            n: self.n(),
            m: self.m(),
            a: to_pairs(self.visible_bias()),
            b: to_pairs(self.hidden_bias()),
            w: (0..self.n()).map(|j| to_pairs(self.weight_row(j))).collect(),
        };
        serde_json::to_string_pretty(&file).expect("model serialization cannot fail")
    }
}
