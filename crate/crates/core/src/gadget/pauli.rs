use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{NqsError, Result};
use crate::model::NqsModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// A tensor product of single-qubit Paulis; letter `q` acts on `v_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString(letters)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for PauliString {
    type Err = NqsError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(NqsError::Parse(format!("invalid Pauli letter {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

fn check_qubit(model: &NqsModel, q: usize) -> Result<()> {
    if q >= model.n() {
        return Err(NqsError::InvalidParameter(format!(
            "qubit {q} out of range for n = {}",
            model.n()
        )));
    }
    Ok(())
}

/// `X` on qubit `q`: negates `a_q` and row `q` of `W`.
pub fn pauli_x(model: &NqsModel, q: usize) -> Result<NqsModel> {
    check_qubit(model, q)?;
    let mut out = model.clone();
    out.negate_visible(q);
    Ok(out)
}

fn push_z_node(model: &mut NqsModel, q: usize) {
    let mut couplings = vec![Complex64::new(0.0, 0.0); model.n()];
    couplings[q] = Complex64::new(0.0, -FRAC_PI_2);
    model.push_hidden(Complex64::new(0.0, FRAC_PI_2), &couplings);
}

/// `Y` on qubit `q` as the `X` map followed by a `Z` node; the result is `2i·Y` applied.
pub fn pauli_y(model: &NqsModel, q: usize) -> Result<NqsModel> {
    let mut out = pauli_x(model, q)?;
    push_z_node(&mut out, q);
    Ok(out)
}

/// `Z` on each qubit of `qubits`, one node per qubit with bias `iπ/2` and coupling `-iπ/2`.
/// Each node contributes `2cosh[iπ/2 (1 - v_q)]`, i.e. `2` or `-2`.
pub fn pauli_z_string(model: &NqsModel, qubits: &[usize]) -> Result<NqsModel> {
    let mut out = model.clone();
    for &q in qubits {
        check_qubit(model, q)?;
        push_z_node(&mut out, q);
    }
    Ok(out)
}

/// Applies every letter of `p`; adds one node per `Y` or `Z`.
pub fn pauli_apply(model: &NqsModel, p: &PauliString) -> Result<NqsModel> {
    if p.len() != model.n() {
        return Err(NqsError::DimensionMismatch(format!(
            "Pauli string of length {} for a model with n = {}",
            p.len(),
            model.n()
        )));
    }
    let mut out = model.clone();
    for (q, letter) in p.letters().iter().enumerate() {
        out = match letter {
            Pauli::I => out,
            Pauli::X => pauli_x(&out, q)?,
            Pauli::Y => pauli_y(&out, q)?,
            Pauli::Z => pauli_z_string(&out, &[q])?,
        };
    }
    Ok(out)
}
