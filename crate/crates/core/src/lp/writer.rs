use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::model::{ensure_valid, Instance, ObjectiveSense, VarKind};
use crate::rational::{format_rational, is_one, Rational};

const RESERVED: &[&str] = &[
    "minimize", "minimise", "minimum", "min", "maximize", "maximise", "maximum", "max", "subject", "such", "st",
    "s.t.", "bounds", "bound", "general", "generals", "gen", "integer", "integers", "binary", "binaries", "bin",
    "end", "free", "inf", "infinity",
];

fn valid_name(name: &str) -> bool {
    let bytes = name.as_bytes();
    let Some(&first) = bytes.first() else { return false };
    (first.is_ascii_alphabetic() || first == b'_')
        && bytes[1..]
            .iter()
            .all(|&c| c.is_ascii_alphanumeric() || matches!(c, b'_' | b'.' | b'[' | b']' | b'(' | b')' | b'#' | b'\''))
        && !RESERVED.iter().any(|k| k.eq_ignore_ascii_case(name))
}

/// Keeps usable names and replaces invalid or repeated ones with generated
/// `{prefix}{k}` names that collide with nothing.
fn unique_names(count: usize, name_of: impl Fn(usize) -> String, prefix: &str) -> Vec<String> {
    let given: Vec<String> = (0..count).map(name_of).collect();
    let mut taken: HashSet<String> = HashSet::new();
    let mut keep = vec![false; count];
    for (k, name) in given.iter().enumerate() {
        if valid_name(name) && taken.insert(name.clone()) {
            keep[k] = true;
        }
    }
    let mut counter = 0usize;
    given
        .into_iter()
        .zip(keep)
        .map(|(name, kept)| {
            if kept {
                return name;
            }
            loop {
                counter += 1;
                let candidate = format!("{prefix}{counter}");
                if taken.insert(candidate.clone()) {
                    return candidate;
                }
            }
        })
        .collect()
}

fn push_term(out: &mut String, first: bool, coef: &Rational, var: &str) {
    let negative = coef.is_negative();
    match (first, negative) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    let abs = coef.abs();
    if !is_one(&abs) {
        out.push_str(&format_rational(&abs));
        out.push(' ');
    }
    out.push_str(var);
}

/// Renders an instance as LP text that parses back to an identical instance.
///
/// Every row, including rows that came from bounds, is written under
/// `Subject To`, and every variable is declared `free` so that no implicit
/// bound row is added on re-reading.
pub fn write_lp(inst: &Instance) -> Result<String> {
    ensure_valid(inst)?;
    let n = inst.num_vars();
    let vars = unique_names(n, |j| inst.var_name(j), "x");
    let rows = unique_names(inst.num_constraints(), |i| inst.row_name(i), "c");

    // Variables are numbered by first appearance when read back. List every
    // variable in the objective when the nonzero terms alone would not
    // reproduce the index order.
    let nonzero: Vec<usize> = (0..n).filter(|&j| !inst.objective[j].is_zero()).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut visit = |j: usize| {
        if !seen[j] {
            seen[j] = true;
            order.push(j);
        }
    };
    nonzero.iter().for_each(|&j| visit(j));
    inst.rows.iter().flat_map(|r| r.coeffs.keys()).for_each(|&j| visit(j));
    (0..n).for_each(visit);
    let in_objective: Vec<usize> = if order.iter().copied().eq(0..n) { nonzero } else { (0..n).collect() };

    let mut out = String::new();
    out.push_str(match inst.objective_sense {
        ObjectiveSense::Minimize => "Minimize\n",
        ObjectiveSense::Maximize => "Maximize\n",
    });
    out.push_str(" obj:");
    for (k, &j) in in_objective.iter().enumerate() {
        out.push(' ');
        let coef = &inst.objective[j];
        if coef.is_zero() {
            if k > 0 {
                out.push_str("+ ");
            }
            let _ = write!(out, "0 {}", vars[j]);
        } else {
            let mut term = String::new();
            push_term(&mut term, k == 0, coef, &vars[j]);
            out.push_str(term.trim_start());
        }
    }
    out.push_str("\nSubject To\n");
    for (row, name) in inst.rows.iter().zip(&rows) {
        let _ = write!(out, " {name}: ");
        for (k, (&j, coef)) in row.coeffs.iter().enumerate() {
            push_term(&mut out, k == 0, coef, &vars[j]);
        }
        let _ = writeln!(out, " {} {}", row.sense.symbol(), format_rational(&row.rhs));
    }
    if n > 0 {
        out.push_str("Bounds\n");
        for var in &vars {
            let _ = writeln!(out, " {var} free");
        }
    }
    let integers: Vec<&str> =
        (0..n).filter(|&j| inst.var_kinds[j] == VarKind::Integer).map(|j| vars[j].as_str()).collect();
    if !integers.is_empty() {
        out.push_str("General\n");
        for chunk in integers.chunks(10) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    Ok(out)
}
