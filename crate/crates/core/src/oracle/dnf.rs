//! DNF formulas and the uniform superposition over their satisfying assignments.
//!
//! Text format:
//!
//! ```text
//! # (x1 ∧ x2) ∨ (¬x1 ∧ x3)
//! dnf 3
//! 1 2
//! -1 3
//! ```
//!
//! The header gives the variable count; each further non-empty line is one conjunctive term
//! of signed 1-based variable indices. Assignment `v_k = +1` makes variable `k` true.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, RngCore};

use super::{ArOracle, OracleStats, SampOracle, SqOracle};
use crate::error::{NqsError, Result};
use crate::model::{all_configs, LogComplex, RatioResult, SpinConfig};
use crate::sampler::DnfTermTable;

/// Largest variable count for which the satisfying count is materialized by enumeration.
pub const DNF_COUNT_CAP: usize = 24;

/// Term counts `2^(n - fixed)` are held in `u128`.
pub const MAX_DNF_VARIABLES: usize = 120;

/// A possibly negated variable; `var` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    /// From a signed 1-based index as written in formula files.
    pub fn from_signed(k: i64) -> Result<Self> {
        if k == 0 {
            return Err(NqsError::Parse("literal 0 is not a variable".into()));
        }
        Ok(Literal {
            var: (k.unsigned_abs() - 1) as usize,
            positive: k > 0,
        })
    }

    pub fn to_signed(self) -> i64 {
        let k = self.var as i64 + 1;
        if self.positive {
            k
        } else {
            -k
        }
    }

    pub fn satisfied_by(&self, v: &SpinConfig) -> bool {
        (v.get(self.var) == 1) == self.positive
    }
}

/// A conjunction of literals over distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfTerm {
    literals: Vec<Literal>,
}

impl DnfTerm {
    /// Deduplicates repeated literals and rejects empty terms and a literal together with its
    /// negation. An empty term has no line in the text format, so it is not representable.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let set: BTreeSet<Literal> = literals.into_iter().collect();
        let literals: Vec<Literal> = set.into_iter().collect();
        if literals.is_empty() {
            return Err(NqsError::Parse("a term needs at least one literal".into()));
        }
        if let Some(w) = literals.windows(2).find(|w| w[0].var == w[1].var) {
            return Err(NqsError::Parse(format!(
                "term contains both x{} and its negation",
                w[0].var + 1
            )));
        }
        Ok(DnfTerm { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn fixed_count(&self) -> usize {
        self.literals.len()
    }

    pub fn satisfied_by(&self, v: &SpinConfig) -> bool {
        self.literals.iter().all(|l| l.satisfied_by(v))
    }

    /// A uniform element of the term's satisfying set: fixed variables set, free ones uniform.
    pub fn sample_member<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> SpinConfig {
        let mut spins: Vec<i8> = (0..n)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        for l in &self.literals {
            spins[l.var] = if l.positive { 1 } else { -1 };
        }
        SpinConfig::new(spins).expect("entries are ±1")
    }
}

/// `F = F_1 ∨ … ∨ F_m` over `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DnfFormula {
    n: usize,
    terms: Vec<DnfTerm>,
}

impl DnfFormula {
    pub fn new(n: usize, terms: Vec<DnfTerm>) -> Result<Self> {
        if n > MAX_DNF_VARIABLES {
            return Err(NqsError::ResourceLimit(format!(
                "{n} variables exceeds the supported {MAX_DNF_VARIABLES}"
            )));
        }
        if terms.is_empty() {
            return Err(NqsError::Parse("a formula needs at least one term".into()));
        }
        for t in &terms {
            if let Some(l) = t.literals.iter().find(|l| l.var >= n) {
                return Err(NqsError::Parse(format!(
                    "variable x{} outside 1..={n}",
                    l.var + 1
                )));
            }
        }
        Ok(DnfFormula { n, terms })
    }

    /// Builds a formula from signed 1-based literals, one inner vector per term.
    pub fn from_signed(n: usize, terms: &[Vec<i64>]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|t| {
                t.iter()
                    .map(|&k| Literal::from_signed(k))
                    .collect::<Result<Vec<_>>>()
                    .and_then(DnfTerm::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, terms)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[DnfTerm] {
        &self.terms
    }

    pub fn satisfies(&self, v: &SpinConfig) -> bool {
        self.terms.iter().any(|t| t.satisfied_by(v))
    }

    /// Number of terms satisfied by `v`.
    pub fn multiplicity(&self, v: &SpinConfig) -> usize {
        self.terms.iter().filter(|t| t.satisfied_by(v)).count()
    }

    /// Exhaustive satisfying count; `None` above `cap` variables.
    pub fn count_satisfying(&self, cap: usize) -> Option<u64> {
        if self.n > cap {
            return None;
        }
        Some(all_configs(self.n).filter(|v| self.satisfies(v)).count() as u64)
    }
}

/// `true` iff some term of `formula` has all its literals satisfied by `v`.
pub fn dnf_satisfies(formula: &DnfFormula, v: &SpinConfig) -> Result<bool> {
    v.expect_len(formula.n)?;
    Ok(formula.satisfies(v))
}

impl FromStr for DnfFormula {
    type Err = NqsError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| NqsError::Parse("missing \"dnf <n>\" header".into()))?;
        let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["dnf", n] => n
                .parse::<usize>()
                .map_err(|e| NqsError::Parse(format!("bad variable count {n:?}: {e}")))?,
            _ => {
                return Err(NqsError::Parse(format!(
                    "expected \"dnf <n>\" header, found {header:?}"
                )))
            }
        };
        let terms = lines
            .map(|line| {
                line.split_whitespace()
                    .map(|tok| {
                        tok.parse::<i64>()
                            .map_err(|e| NqsError::Parse(format!("bad literal {tok:?}: {e}")))
                            .and_then(Literal::from_signed)
                    })
                    .collect::<Result<Vec<_>>>()
                    .and_then(DnfTerm::new)
            })
            .collect::<Result<Vec<_>>>()?;
        DnfFormula::new(n, terms)
    }
}

impl fmt::Display for DnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dnf {}", self.n)?;
        for t in &self.terms {
            let line: Vec<String> = t.literals.iter().map(|l| l.to_signed().to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `ψ_DNF(v) = 1/√Z` on satisfying assignments and 0 elsewhere, as an oracle backend.
///
/// Sampling uses the uniform DNF sampler. `Z` is counted by enumeration on first use and only
/// up to [`DNF_COUNT_CAP`] variables; above it SQ queries fail with `NormalizationUnavailable`.
pub struct DnfState {
    formula: DnfFormula,
    table: DnfTermTable,
    count_cap: usize,
    z: OnceLock<Option<u64>>,
    stats: OracleStats,
}

impl DnfState {
    pub fn new(formula: DnfFormula) -> Self {
        let table = DnfTermTable::new(&formula);
        DnfState {
            formula,
            table,
            count_cap: DNF_COUNT_CAP,
            z: OnceLock::new(),
            stats: OracleStats::default(),
        }
    }

    pub fn with_count_cap(mut self, cap: usize) -> Self {
        self.count_cap = cap;
        self
    }

    pub fn formula(&self) -> &DnfFormula {
        &self.formula
    }

    pub fn table(&self) -> &DnfTermTable {
        &self.table
    }

    /// The satisfying count, if materializable within the cap.
    pub fn z(&self) -> Option<u64> {
        *self
            .z
            .get_or_init(|| self.formula.count_satisfying(self.count_cap))
    }
}

impl SampOracle for DnfState {
    fn n(&self) -> usize {
        self.formula.n
    }

    fn stats(&self) -> &OracleStats {
        &self.stats
    }

    fn draw(&self, rng: &mut dyn RngCore) -> Result<SpinConfig> {
        Ok(self.table.sample(&self.formula, rng).0)
    }
}

impl ArOracle for DnfState {
    fn ratio(&self, i: &SpinConfig, j: &SpinConfig) -> Result<RatioResult> {
        Ok(match (self.formula.satisfies(i), self.formula.satisfies(j)) {
            (true, true) | (false, false) => RatioResult::Value(LogComplex::ONE),
            (false, true) => RatioResult::Value(LogComplex::ZERO),
            (true, false) => RatioResult::Div,
        })
    }
}

impl SqOracle for DnfState {
    fn amplitude(&self, i: &SpinConfig) -> Result<LogComplex> {
        let z = self.z().ok_or_else(|| {
            NqsError::NormalizationUnavailable(format!(
                "satisfying count of a {}-variable formula is not enumerated above {} variables",
                self.formula.n, self.count_cap
            ))
        })?;
        Ok(if self.formula.satisfies(i) {
            LogComplex::new(-0.5 * (z as f64).ln(), 0.0)
        } else {
            LogComplex::ZERO
        })
    }
}
