//! Weighted bipartite encoding of an instance: one node per constraint,
//! one node per variable, one edge per nonzero matrix entry.

use std::fmt::{self, Write as _};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ensure_valid, ConstraintRow, Instance, ObjectiveSense, Sense, VarKind};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Constraint,
    Variable,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::Constraint => "con",
            Side::Variable => "var",
        }
    }
}

/// Orders constraints before variables, then by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId {
    pub side: Side,
    pub index: usize,
}

impl NodeId {
    pub fn con(index: usize) -> Self {
        NodeId { side: Side::Constraint, index }
    }

    pub fn var(index: usize) -> Self {
        NodeId { side: Side::Variable, index }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.side.label(), self.index)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintFeature {
    pub rhs: Rational,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableFeature {
    pub obj_coeff: Rational,
    pub kind: VarKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub con: usize,
    pub var: usize,
    pub weight: Rational,
}

#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    objective_sense: ObjectiveSense,
    constraint_features: Vec<ConstraintFeature>,
    variable_features: Vec<VariableFeature>,
    edges: Vec<Edge>,
    /// Per constraint: (variable, edge index).
    con_adj: Vec<Vec<(usize, usize)>>,
    /// Per variable: (constraint, edge index).
    var_adj: Vec<Vec<(usize, usize)>>,
}

impl BipartiteGraph {
    /// Builds a graph, rejecting zero weights, out-of-range endpoints and
    /// repeated (constraint, variable) pairs.
    pub fn new(
        objective_sense: ObjectiveSense,
        constraint_features: Vec<ConstraintFeature>,
        variable_features: Vec<VariableFeature>,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        let (m, n) = (constraint_features.len(), variable_features.len());
        let mut con_adj = vec![Vec::new(); m];
        let mut var_adj = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.con >= m || edge.var >= n {
                return Err(Error::MalformedGraph(format!(
                    "edge ({}, {}) out of range for m={m}, n={n}",
                    edge.con, edge.var
                )));
            }
            if edge.weight.is_zero() {
                return Err(Error::MalformedGraph(format!("edge ({}, {}) has zero weight", edge.con, edge.var)));
            }
            con_adj[edge.con].push((edge.var, e));
            var_adj[edge.var].push((edge.con, e));
        }
        for (i, adj) in con_adj.iter_mut().enumerate() {
            adj.sort_unstable();
            if let Some(w) = adj.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::MalformedGraph(format!("duplicate edge ({i}, {})", w[0].0)));
            }
        }
        for adj in &mut var_adj {
            adj.sort_unstable();
        }
        Ok(BipartiteGraph { objective_sense, constraint_features, variable_features, edges, con_adj, var_adj })
    }

    pub fn objective_sense(&self) -> ObjectiveSense {
        self.objective_sense
    }

    pub fn num_constraints(&self) -> usize {
        self.constraint_features.len()
    }

    pub fn num_vars(&self) -> usize {
        self.variable_features.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.num_constraints() + self.num_vars()
    }

    pub fn constraint_features(&self) -> &[ConstraintFeature] {
        &self.constraint_features
    }

    pub fn variable_features(&self) -> &[VariableFeature] {
        &self.variable_features
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(variable, edge index)` pairs of constraint `i`, sorted by variable.
    pub fn con_neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.con_adj[i]
    }

    /// `(constraint, edge index)` pairs of variable `j`, sorted by constraint.
    pub fn var_neighbors(&self, j: usize) -> &[(usize, usize)] {
        &self.var_adj[j]
    }

    /// Neighbors of a node as `(neighbor, weight)`.
    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = (NodeId, &Rational)> + '_ {
        let adj = match node.side {
            Side::Constraint => &self.con_adj[node.index],
            Side::Variable => &self.var_adj[node.index],
        };
        let other = if node.side == Side::Constraint { NodeId::var } else { NodeId::con };
        adj.iter().map(move |&(k, e)| (other(k), &self.edges[e].weight))
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node.side {
            Side::Constraint => node.index < self.num_constraints(),
            Side::Variable => node.index < self.num_vars(),
        }
    }

    /// One `i j weight` line per edge, sorted by `(i, j)`.
    pub fn edge_list_dump(&self) -> String {
        let mut pairs: Vec<(usize, usize, &Rational)> = self.edges.iter().map(|e| (e.con, e.var, &e.weight)).collect();
        pairs.sort_by_key(|&(i, j, _)| (i, j));
        let mut out = String::new();
        for (i, j, w) in pairs {
            let _ = writeln!(out, "{i} {j} {}", format_rational(w));
        }
        out
    }
}

pub fn encode(inst: &Instance) -> Result<BipartiteGraph> {
    ensure_valid(inst)?;
    let constraint_features =
        inst.rows.iter().map(|r| ConstraintFeature { rhs: r.rhs.clone(), sense: r.sense }).collect();
    let variable_features = inst
        .objective
        .iter()
        .zip(&inst.var_kinds)
        .map(|(c, &kind)| VariableFeature { obj_coeff: c.clone(), kind })
        .collect();
    let edges = inst
        .rows
        .iter()
        .enumerate()
        .flat_map(|(i, r)| r.coeffs.iter().map(move |(&j, a)| Edge { con: i, var: j, weight: a.clone() }))
        .collect();
    BipartiteGraph::new(inst.objective_sense, constraint_features, variable_features, edges)
}

/// Rebuilds the instance a graph encodes. A constraint without edges cannot
/// be a valid row and is rejected.
pub fn decode(g: &BipartiteGraph) -> Result<Instance> {
    let mut rows = Vec::with_capacity(g.num_constraints());
    for (i, feature) in g.constraint_features.iter().enumerate() {
        if g.con_adj[i].is_empty() {
            return Err(Error::MalformedGraph(format!("constraint node {i} has no edges")));
        }
        let coeffs = g.con_adj[i].iter().map(|&(j, e)| (j, g.edges[e].weight.clone()));
        rows.push(ConstraintRow::new(coeffs, feature.sense, feature.rhs.clone()));
    }
    Ok(Instance::new(
        g.objective_sense,
        g.variable_features.iter().map(|f| f.obj_coeff.clone()).collect(),
        g.variable_features.iter().map(|f| f.kind).collect(),
        rows,
    ))
}
