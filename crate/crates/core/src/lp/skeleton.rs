use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{ConstraintRow, Instance, ObjectiveSense, Sense, VarKind};
use crate::rational::{format_rational, Rational};

/// A coefficient slot: `constant + Σ weight·param`.
///
/// Plain LP documents only ever produce constant slots; model templates may
/// reference named parameters, and duplicate terms or terms moved across a
/// relation combine by exact affine arithmetic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Affine {
    pub constant: Rational,
    pub params: BTreeMap<String, Rational>,
}

impl Affine {
    pub fn constant(value: Rational) -> Self {
        Affine { constant: value, params: BTreeMap::new() }
    }

    pub fn param(name: impl Into<String>) -> Self {
        let mut params = BTreeMap::new();
        params.insert(name.into(), Rational::from_integer(1.into()));
        Affine { constant: Rational::zero(), params }
    }

    pub fn is_literal(&self) -> bool {
        self.params.is_empty()
    }

    /// Zero for every possible parameter assignment.
    pub fn is_identically_zero(&self) -> bool {
        self.params.is_empty() && self.constant.is_zero()
    }

    pub fn add_assign(&mut self, other: &Affine) {
        self.constant += &other.constant;
        for (name, w) in &other.params {
            let slot = self.params.entry(name.clone()).or_insert_with(Rational::zero);
            *slot += w;
            if slot.is_zero() {
                self.params.remove(name);
            }
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Affine {
        if factor.is_zero() {
            return Affine::default();
        }
        Affine {
            constant: &self.constant * factor,
            params: self.params.iter().map(|(k, w)| (k.clone(), w * factor)).collect(),
        }
    }

    pub fn negated(&self) -> Affine {
        self.scaled(&Rational::from_integer((-1).into()))
    }

    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Result<Rational> {
        let mut total = self.constant.clone();
        for (name, w) in &self.params {
            let v = values.get(name).ok_or_else(|| Error::MissingParameter(name.clone()))?;
            total += w * v;
        }
        Ok(total)
    }

    pub fn param_names(&self) -> impl Iterator<Item = &str> {
        self.params.keys().map(String::as_str)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return f.write_str(&format_rational(&self.constant));
        }
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(format_rational(&self.constant));
        }
        for (name, w) in &self.params {
            parts.push(format!("{}*${{{name}}}", format_rational(w)));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonRow {
    pub name: String,
    /// Sorted by variable index, one entry per variable.
    pub coeffs: Vec<(usize, Affine)>,
    pub sense: Sense,
    pub rhs: Affine,
}

/// A normalized LP whose coefficient slots may still reference parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub objective_sense: ObjectiveSense,
    pub var_names: Vec<String>,
    pub var_kinds: Vec<VarKind>,
    pub objective: Vec<Affine>,
    pub rows: Vec<SkeletonRow>,
}

impl Skeleton {
    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    /// Every parameter name referenced anywhere, sorted.
    pub fn referenced_params(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .objective
            .iter()
            .chain(self.rows.iter().flat_map(|r| r.coeffs.iter().map(|(_, a)| a).chain(std::iter::once(&r.rhs))))
            .flat_map(|a| a.param_names().map(str::to_string))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    /// Substitutes parameter values. Coefficients that evaluate to zero are
    /// dropped (absence means zero) and reported as warnings; a row left
    /// without any coefficient is an error.
    pub fn instantiate(&self, values: &BTreeMap<String, Rational>) -> Result<(Instance, Vec<String>)> {
        let mut warnings = Vec::new();
        let objective = self.objective.iter().map(|a| a.eval(values)).collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut coeffs = Vec::with_capacity(row.coeffs.len());
            for (j, slot) in &row.coeffs {
                let value = slot.eval(values)?;
                if value.is_zero() {
                    warnings.push(format!(
                        "row `{}`: coefficient of `{}` is zero and was dropped",
                        row.name, self.var_names[*j]
                    ));
                } else {
                    coeffs.push((*j, value));
                }
            }
            if coeffs.is_empty() {
                return Err(Error::InvalidAfterSubstitution(format!("row `{}` has no nonzero coefficient", row.name)));
            }
            rows.push(ConstraintRow::new(coeffs, row.sense, row.rhs.eval(values)?));
        }
        let inst = Instance {
            objective_sense: self.objective_sense,
            objective,
            var_kinds: self.var_kinds.clone(),
            rows,
            var_names: Some(self.var_names.clone()),
            row_names: Some(self.rows.iter().map(|r| r.name.clone()).collect()),
        };
        Ok((inst, warnings))
    }
}
