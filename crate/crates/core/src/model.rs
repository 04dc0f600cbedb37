//! In-memory LP/MILP instances in the standard form `min/max cᵀx s.t. Ax ∘ b`.
//!
//! Variable bounds have no separate representation: the LP reader turns each
//! finite bound into an ordinary single-variable [`ConstraintRow`], so bounds
//! are permuted and colored exactly like any other constraint.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Relation between a row's activity and its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

impl Sense {
    pub const ALL: [Sense; 5] = [Sense::Eq, Sense::Lt, Sense::Gt, Sense::Le, Sense::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Eq => "=",
            Sense::Lt => "<",
            Sense::Gt => ">",
            Sense::Le => "<=",
            Sense::Ge => ">=",
        }
    }

    /// The relation obtained by swapping the two sides (`a <= b` iff `b >= a`).
    pub fn mirrored(self) -> Sense {
        match self {
            Sense::Eq => Sense::Eq,
            Sense::Lt => Sense::Gt,
            Sense::Gt => Sense::Lt,
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Sense::Eq => lhs == rhs,
            Sense::Lt => lhs < rhs,
            Sense::Gt => lhs > rhs,
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    Continuous,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// One row `Σ coeffs[j]·x_j ∘ rhs`. Absent entries are zero; stored zeros
/// are a validation error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub coeffs: BTreeMap<usize, Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

impl ConstraintRow {
    pub fn new(coeffs: impl IntoIterator<Item = (usize, Rational)>, sense: Sense, rhs: Rational) -> Self {
        ConstraintRow { coeffs: coeffs.into_iter().collect(), sense, rhs }
    }

    pub fn activity(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(&j, a)| a * &point[j]).sum()
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub objective_sense: ObjectiveSense,
    /// Dense objective vector; its length defines the number of variables.
    pub objective: Vec<Rational>,
    pub var_kinds: Vec<VarKind>,
    pub rows: Vec<ConstraintRow>,
    pub var_names: Option<Vec<String>>,
    pub row_names: Option<Vec<String>>,
}

impl Instance {
    pub fn new(
        objective_sense: ObjectiveSense,
        objective: Vec<Rational>,
        var_kinds: Vec<VarKind>,
        rows: Vec<ConstraintRow>,
    ) -> Self {
        Instance { objective_sense, objective, var_kinds, rows, var_names: None, row_names: None }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.coeffs.len()).sum()
    }

    pub fn var_name(&self, j: usize) -> String {
        self.var_names.as_ref().and_then(|n| n.get(j).cloned()).unwrap_or_else(|| format!("x{}", j + 1))
    }

    pub fn row_name(&self, i: usize) -> String {
        self.row_names.as_ref().and_then(|n| n.get(i).cloned()).unwrap_or_else(|| format!("c{}", i + 1))
    }

    /// Drops display names; structural operations never look at them anyway.
    pub fn without_names(mut self) -> Self {
        self.var_names = None;
        self.row_names = None;
        self
    }
}

/// One broken [`Instance`] invariant, with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    KindCountMismatch { expected: usize, found: usize },
    VarNameCountMismatch { expected: usize, found: usize },
    RowNameCountMismatch { expected: usize, found: usize },
    OutOfRange { row: usize, var: usize },
    ZeroCoefficient { row: usize, var: usize },
    EmptyRow { row: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::KindCountMismatch { expected, found } => {
                write!(f, "{found} variable kinds for {expected} variables")
            }
            Violation::VarNameCountMismatch { expected, found } => {
                write!(f, "{found} variable names for {expected} variables")
            }
            Violation::RowNameCountMismatch { expected, found } => {
                write!(f, "{found} row names for {expected} rows")
            }
            Violation::OutOfRange { row, var } => {
                write!(f, "out-of-range reference to variable {var} at row {row}")
            }
            Violation::ZeroCoefficient { row, var } => {
                write!(f, "stored zero coefficient for variable {var} at row {row}")
            }
            Violation::EmptyRow { row } => write!(f, "empty row {row}"),
        }
    }
}

pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let n = inst.num_vars();
    let mut out = Vec::new();
    if inst.var_kinds.len() != n {
        out.push(Violation::KindCountMismatch { expected: n, found: inst.var_kinds.len() });
    }
    if let Some(names) = &inst.var_names {
        if names.len() != n {
            out.push(Violation::VarNameCountMismatch { expected: n, found: names.len() });
        }
    }
    if let Some(names) = &inst.row_names {
        if names.len() != inst.rows.len() {
            out.push(Violation::RowNameCountMismatch { expected: inst.rows.len(), found: names.len() });
        }
    }
    for (i, row) in inst.rows.iter().enumerate() {
        for &j in row.coeffs.keys().filter(|&&j| j >= n) {
            out.push(Violation::OutOfRange { row: i, var: j });
        }
        if row.coeffs.values().all(|a| a.is_zero()) {
            out.push(Violation::EmptyRow { row: i });
            continue;
        }
        for (&j, a) in &row.coeffs {
            if a.is_zero() {
                out.push(Violation::ZeroCoefficient { row: i, var: j });
            }
        }
    }
    out
}

pub(crate) fn ensure_valid(inst: &Instance) -> Result<()> {
    let violations = validate_instance(inst);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(violations))
    }
}

/// A bijection on `0..k`; `mapping[i]` is the new position of old index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &t in &mapping {
            if t >= mapping.len() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPermutation(format!("{mapping:?} is not a bijection")));
            }
        }
        Ok(Permutation { mapping })
    }

    pub fn identity(k: usize) -> Self {
        Permutation { mapping: (0..k).collect() }
    }

    /// Transposition of `a` and `b` on `0..k`.
    pub fn swap(k: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(k);
        p.mapping.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (i, &t) in self.mapping.iter().enumerate() {
            inv[t] = i;
        }
        Permutation { mapping: inv }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Permutation) -> Self {
        Permutation { mapping: self.mapping.iter().map(|&t| next.mapping[t]).collect() }
    }
}

/// Uniformly random bijection on `0..k`, reproducible from `seed`.
pub fn random_permutation(k: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mapping: Vec<usize> = (0..k).collect();
    mapping.shuffle(&mut rng);
    Permutation { mapping }
}

/// Moves variable `j` to position `p_vars(j)` and row `i` to `p_rows(i)`.
pub fn apply_permutation(inst: &Instance, p_vars: &Permutation, p_rows: &Permutation) -> Result<Instance> {
    let (n, m) = (inst.num_vars(), inst.num_constraints());
    if p_vars.len() != n || p_rows.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "permutations of size ({}, {}) for an instance with {n} variables and {m} rows",
            p_vars.len(),
            p_rows.len()
        )));
    }
    if inst.var_kinds.len() != n {
        return Err(Error::InvalidInstance(validate_instance(inst)));
    }

    // source index for every target slot
    let var_src = p_vars.inverse().mapping;
    let row_src = p_rows.inverse().mapping;

    let rows = row_src
        .iter()
        .map(|&i| {
            let row = &inst.rows[i];
            ConstraintRow {
                coeffs: row.coeffs.iter().map(|(&j, a)| (p_vars.apply(j), a.clone())).collect(),
                sense: row.sense,
                rhs: row.rhs.clone(),
            }
        })
        .collect();
    Ok(Instance {
        objective_sense: inst.objective_sense,
        objective: var_src.iter().map(|&j| inst.objective[j].clone()).collect(),
        var_kinds: var_src.iter().map(|&j| inst.var_kinds[j]).collect(),
        rows,
        var_names: inst.var_names.as_ref().map(|names| var_src.iter().map(|&j| names[j].clone()).collect()),
        row_names: inst.row_names.as_ref().map(|names| row_src.iter().map(|&i| names[i].clone()).collect()),
    })
}

/// Exact structural equality, ignoring names.
pub fn instances_identical(a: &Instance, b: &Instance) -> bool {
    a.objective_sense == b.objective_sense
        && a.objective == b.objective
        && a.var_kinds == b.var_kinds
        && a.rows == b.rows
}
