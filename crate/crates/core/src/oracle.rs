//! Exhaustive isomorphism search for small instances, used as ground truth.
//!
//! Only feature-preserving variable maps are enumerated: a variable can only
//! map to a variable with the same objective coefficient, kind, and column
//! profile. Rows are matched by content once the variable map is fixed.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{apply_permutation, ensure_valid, instances_identical, Instance, Permutation, Sense, VarKind};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest n and m searched.
    pub size_limit: usize,
    /// Maximum number of search nodes before giving up.
    pub budget: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { size_limit: 8, budget: 2_000_000 }
    }
}

/// Permutations with `apply_permutation(a, p_vars, p_rows)` identical to `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub p_vars: Permutation,
    pub p_rows: Permutation,
}

type RowKey = (Sense, Rational, Vec<(usize, Rational)>);
type ColumnKey = (Rational, VarKind, Vec<(Rational, Sense, Rational)>);

fn column_keys(inst: &Instance) -> Vec<ColumnKey> {
    let mut cols: Vec<Vec<(Rational, Sense, Rational)>> = vec![Vec::new(); inst.num_vars()];
    for row in &inst.rows {
        for (&j, a) in &row.coeffs {
            cols[j].push((a.clone(), row.sense, row.rhs.clone()));
        }
    }
    cols.into_iter()
        .enumerate()
        .map(|(j, mut c)| {
            c.sort();
            (inst.objective[j].clone(), inst.var_kinds[j], c)
        })
        .collect()
}

fn sorted<T: Ord + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = items.collect();
    v.sort();
    v
}

/// Necessary conditions checked before any enumeration.
fn prechecks_pass(a: &Instance, b: &Instance) -> bool {
    a.num_vars() == b.num_vars()
        && a.num_constraints() == b.num_constraints()
        && a.objective_sense == b.objective_sense
        && sorted(a.objective.iter().zip(&a.var_kinds)) == sorted(b.objective.iter().zip(&b.var_kinds))
        && sorted(a.rows.iter().map(|r| (r.sense, &r.rhs))) == sorted(b.rows.iter().map(|r| (r.sense, &r.rhs)))
        && sorted(a.rows.iter().flat_map(|r| r.coeffs.values())) == sorted(b.rows.iter().flat_map(|r| r.coeffs.values()))
}

struct Search<'a> {
    a: &'a Instance,
    candidates: Vec<Vec<usize>>,
    /// Rows of `a` whose largest variable index is `j`.
    completes_at: Vec<Vec<usize>>,
    available: BTreeMap<RowKey, usize>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    visited: u64,
    budget: u64,
}

impl Search<'_> {
    fn image(&self, row: usize) -> RowKey {
        let r = &self.a.rows[row];
        let mut coeffs: Vec<(usize, Rational)> = r.coeffs.iter().map(|(&j, v)| (self.sigma[j], v.clone())).collect();
        coeffs.sort();
        (r.sense, r.rhs.clone(), coeffs)
    }

    fn run(&mut self, j: usize) -> Result<bool> {
        if j == self.sigma.len() {
            return Ok(true);
        }
        for k in 0..self.candidates[j].len() {
            let target = self.candidates[j][k];
            if self.used[target] {
                continue;
            }
            self.visited += 1;
            if self.visited > self.budget {
                return Err(Error::OracleBudgetExceeded(format!("more than {} search nodes", self.budget)));
            }
            self.used[target] = true;
            self.sigma[j] = target;
            let mut taken: Vec<RowKey> = Vec::new();
            let mut consistent = true;
            for &row in &self.completes_at[j] {
                let key = self.image(row);
                match self.available.get_mut(&key) {
                    Some(count) if *count > 0 => {
                        *count -= 1;
                        taken.push(key);
                    }
                    _ => {
                        consistent = false;
                        break;
                    }
                }
            }
            if consistent && self.run(j + 1)? {
                return Ok(true);
            }
            for key in taken {
                *self.available.get_mut(&key).expect("taken key") += 1;
            }
            self.used[target] = false;
        }
        Ok(false)
    }
}

/// Finds permutations mapping `a` onto `b`, or `None` when the instances are
/// not isomorphic. Fails with [`Error::OracleBudgetExceeded`] when the
/// instances exceed the size limit or the search exceeds its budget.
pub fn find_isomorphism(a: &Instance, b: &Instance, options: &OracleOptions) -> Result<Option<Isomorphism>> {
    ensure_valid(a)?;
    ensure_valid(b)?;
    if !prechecks_pass(a, b) {
        return Ok(None);
    }
    let (n, m) = (a.num_vars(), a.num_constraints());
    if n > options.size_limit || m > options.size_limit {
        return Err(Error::OracleBudgetExceeded(format!(
            "n={n}, m={m} exceeds the oracle size limit {}",
            options.size_limit
        )));
    }
    let (ka, kb) = (column_keys(a), column_keys(b));
    if sorted(ka.iter()) != sorted(kb.iter()) {
        return Ok(None);
    }
    let candidates = ka.iter().map(|key| (0..n).filter(|&t| &kb[t] == key).collect()).collect();
    let mut completes_at = vec![Vec::new(); n];
    for (i, row) in a.rows.iter().enumerate() {
        let last = *row.coeffs.keys().next_back().expect("valid rows are nonempty");
        completes_at[last].push(i);
    }
    let mut available: BTreeMap<RowKey, usize> = BTreeMap::new();
    for row in &b.rows {
        let key = (row.sense, row.rhs.clone(), row.coeffs.iter().map(|(&j, v)| (j, v.clone())).collect());
        *available.entry(key).or_default() += 1;
    }
    let mut search = Search {
        a,
        candidates,
        completes_at,
        available,
        sigma: vec![0; n],
        used: vec![false; n],
        visited: 0,
        budget: options.budget,
    };
    if !search.run(0)? {
        return Ok(None);
    }

    // match rows by content, equal rows in index order
    let mut slots: BTreeMap<RowKey, Vec<usize>> = BTreeMap::new();
    for (i, row) in b.rows.iter().enumerate().rev() {
        let key = (row.sense, row.rhs.clone(), row.coeffs.iter().map(|(&j, v)| (j, v.clone())).collect());
        slots.entry(key).or_default().push(i);
    }
    let mut row_map = Vec::with_capacity(m);
    for i in 0..m {
        let target = slots.get_mut(&search.image(i)).and_then(Vec::pop).expect("row matched during search");
        row_map.push(target);
    }
    let iso = Isomorphism { p_vars: Permutation::new(search.sigma)?, p_rows: Permutation::new(row_map)? };
    let image = apply_permutation(a, &iso.p_vars, &iso.p_rows)?;
    if !instances_identical(&image, b) {
        return Err(Error::InternalAssertion("oracle produced a non-isomorphism".into()));
    }
    Ok(Some(iso))
}

/// Whether some variable and row permutation turns `a` into `b`.
pub fn brute_force_isomorphic(a: &Instance, b: &Instance, size_limit: usize) -> Result<bool> {
    let options = OracleOptions { size_limit, ..OracleOptions::default() };
    Ok(find_isomorphism(a, b, &options)?.is_some())
}
