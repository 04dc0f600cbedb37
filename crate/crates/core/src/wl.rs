//! Weisfeiler–Lehman color refinement on bipartite instance graphs.
//!
//! Refinement always runs on the disjoint union of the graphs passed in, so
//! color ids are directly comparable between them. Color ids are canonical:
//! at every round they are the rank of the node's signature in sorted
//! signature order, so identical inputs give identical ids.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeId, Side};
use crate::model::{Sense, VarKind};
use crate::rational::Rational;

/// Node counts above which signatures are computed on the rayon pool.
const PARALLEL_THRESHOLD: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RefinementMode {
    /// Signature: old color plus the sorted multiset of (edge weight,
    /// neighbor color) pairs. Injective, so no collisions.
    #[default]
    Pairs,
    /// Signature: old color plus the exact sum of `weight * (color + 1)` over
    /// neighbors. Distinct neighborhoods may collide.
    #[serde(rename = "sum")]
    WeightedSum,
}

impl RefinementMode {
    pub fn label(self) -> &'static str {
        match self {
            RefinementMode::Pairs => "pairs",
            RefinementMode::WeightedSum => "sum",
        }
    }
}

/// Colors of one graph's nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphColoring {
    pub constraints: Vec<ColorId>,
    pub variables: Vec<ColorId>,
}

impl GraphColoring {
    pub fn color(&self, node: NodeId) -> ColorId {
        match node.side {
            Side::Constraint => self.constraints[node.index],
            Side::Variable => self.variables[node.index],
        }
    }

    /// `side index color` lines, constraints first, each side by index.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = writeln!(out, "con {i} {}", c.0);
        }
        for (j, c) in self.variables.iter().enumerate() {
            let _ = writeln!(out, "var {j} {}", c.0);
        }
        out
    }
}

/// A coloring of one or more graphs computed jointly.
#[derive(Clone, Debug)]
pub struct Coloring {
    pub graphs: Vec<GraphColoring>,
    /// Number of refinement steps that changed the partition.
    pub round: usize,
    pub num_colors: usize,
    /// False only when a caller-supplied round limit stopped refinement early.
    pub stable: bool,
    /// Color count at round 0, 1, ..., `round`.
    pub trace: Vec<usize>,
    pub mode: RefinementMode,
}

/// Per-side color multiplicities of one graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ColoringMultiset {
    pub constraints: BTreeMap<ColorId, usize>,
    pub variables: BTreeMap<ColorId, usize>,
}

/// A color whose multiplicity differs between two multisets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorCountDiff {
    pub side: Side,
    pub color: ColorId,
    pub left: usize,
    pub right: usize,
}

impl ColoringMultiset {
    pub fn diff(&self, other: &ColoringMultiset) -> Vec<ColorCountDiff> {
        let mut out = Vec::new();
        for (side, a, b) in [
            (Side::Constraint, &self.constraints, &other.constraints),
            (Side::Variable, &self.variables, &other.variables),
        ] {
            let mut colors: Vec<ColorId> = a.keys().chain(b.keys()).copied().collect();
            colors.sort_unstable();
            colors.dedup();
            for color in colors {
                let (left, right) = (a.get(&color).copied().unwrap_or(0), b.get(&color).copied().unwrap_or(0));
                if left != right {
                    out.push(ColorCountDiff { side, color, left, right });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum InitKey {
    Con(Rational, Sense),
    Var(Rational, VarKind),
}

/// Flattened disjoint union: per graph, constraints then variables.
struct Union {
    starts: Vec<usize>,
    /// `(weight id, neighbor)`; weight ids follow the numeric order of weights.
    adj: Vec<Vec<(u32, u32)>>,
    weights: Vec<Rational>,
    sizes: Vec<(usize, usize)>,
}

impl Union {
    fn new(graphs: &[&BipartiteGraph]) -> Self {
        let mut weights: Vec<Rational> = graphs.iter().flat_map(|g| g.edges().iter().map(|e| e.weight.clone())).collect();
        weights.sort_unstable();
        weights.dedup();
        let mut starts = Vec::with_capacity(graphs.len());
        let mut total = 0;
        for g in graphs {
            starts.push(total);
            total += g.num_nodes();
        }
        let mut adj = vec![Vec::new(); total];
        for (g, &start) in graphs.iter().zip(&starts) {
            let m = g.num_constraints();
            for e in g.edges() {
                let w = weights.binary_search(&e.weight).expect("interned weight") as u32;
                let (c, v) = (start + e.con, start + m + e.var);
                adj[c].push((w, v as u32));
                adj[v].push((w, c as u32));
            }
        }
        let sizes = graphs.iter().map(|g| (g.num_constraints(), g.num_vars())).collect();
        Union { starts, adj, weights, sizes }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn flatten(&self, colorings: &[GraphColoring]) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len());
        for gc in colorings {
            out.extend(gc.constraints.iter().chain(&gc.variables).map(|c| c.0));
        }
        out
    }

    fn split(&self, colors: &[u32]) -> Vec<GraphColoring> {
        self.starts
            .iter()
            .zip(&self.sizes)
            .map(|(&start, &(m, n))| GraphColoring {
                constraints: colors[start..start + m].iter().map(|&c| ColorId(c)).collect(),
                variables: colors[start + m..start + m + n].iter().map(|&c| ColorId(c)).collect(),
            })
            .collect()
    }
}

/// Dense canonical ranks of `sigs` and the number of distinct values.
fn rank<S: Ord + Sync>(sigs: &[S]) -> (Vec<u32>, usize) {
    let mut order: Vec<u32> = (0..sigs.len() as u32).collect();
    if sigs.len() >= PARALLEL_THRESHOLD {
        order.par_sort_by(|&a, &b| sigs[a as usize].cmp(&sigs[b as usize]));
    } else {
        order.sort_by(|&a, &b| sigs[a as usize].cmp(&sigs[b as usize]));
    }
    let mut colors = vec![0u32; sigs.len()];
    let mut next = 0u32;
    for (k, &node) in order.iter().enumerate() {
        if k > 0 && sigs[order[k - 1] as usize] != sigs[node as usize] {
            next += 1;
        }
        colors[node as usize] = next;
    }
    let count = if sigs.is_empty() { 0 } else { next as usize + 1 };
    (colors, count)
}

fn map_nodes<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if n >= PARALLEL_THRESHOLD {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

fn initial(graphs: &[&BipartiteGraph]) -> (Vec<u32>, usize) {
    let mut keys = Vec::new();
    for g in graphs {
        keys.extend(g.constraint_features().iter().map(|f| InitKey::Con(f.rhs.clone(), f.sense)));
        keys.extend(g.variable_features().iter().map(|f| InitKey::Var(f.obj_coeff.clone(), f.kind)));
    }
    rank(&keys)
}

fn step(union: &Union, colors: &[u32], mode: RefinementMode) -> (Vec<u32>, usize) {
    match mode {
        RefinementMode::Pairs => {
            let sigs = map_nodes(union.len(), |v| {
                let mut pairs: Vec<(u32, u32)> = union.adj[v].iter().map(|&(w, u)| (w, colors[u as usize])).collect();
                pairs.sort_unstable();
                (colors[v], pairs)
            });
            rank(&sigs)
        }
        RefinementMode::WeightedSum => {
            let sigs = map_nodes(union.len(), |v| {
                let mut total = Rational::default();
                for &(w, u) in &union.adj[v] {
                    total += &union.weights[w as usize] * Rational::from_integer((colors[u as usize] as i64 + 1).into());
                }
                (colors[v], total)
            });
            rank(&sigs)
        }
    }
}

/// Round-0 coloring: equal color iff same side and equal features.
pub fn initial_colors(graphs: &[&BipartiteGraph]) -> Coloring {
    let union = Union::new(graphs);
    let (colors, count) = initial(graphs);
    Coloring {
        graphs: union.split(&colors),
        round: 0,
        num_colors: count,
        stable: false,
        trace: vec![count],
        mode: RefinementMode::Pairs,
    }
}

/// One refinement step. The result refines `coloring`; its ids are canonical.
pub fn refine_step(graphs: &[&BipartiteGraph], coloring: &Coloring, mode: RefinementMode) -> Coloring {
    let union = Union::new(graphs);
    let (colors, count) = step(&union, &union.flatten(&coloring.graphs), mode);
    let changed = count != coloring.num_colors;
    let mut trace = coloring.trace.clone();
    if changed {
        trace.push(count);
    }
    Coloring {
        graphs: union.split(&colors),
        round: coloring.round + usize::from(changed),
        num_colors: count,
        stable: !changed,
        trace,
        mode,
    }
}

/// Refines to a stable coloring. `max_rounds` defaults to the total node
/// count of all graphs, which can never bind: every non-final round adds
/// at least one color.
pub fn run_wl(
    graphs: &[&BipartiteGraph],
    mode: RefinementMode,
    max_rounds: Option<usize>,
) -> (Coloring, Vec<ColoringMultiset>) {
    let union = Union::new(graphs);
    let limit = max_rounds.unwrap_or(union.len());
    let (mut colors, mut count) = initial(graphs);
    let mut trace = vec![count];
    let mut stable = count == union.len();
    let mut round = 0;
    while !stable && round < limit {
        let (next, next_count) = step(&union, &colors, mode);
        if next_count == count {
            stable = true;
        } else {
            round += 1;
            trace.push(next_count);
        }
        colors = next;
        count = next_count;
        if count == union.len() {
            stable = true;
        }
    }
    debug_assert!(stable || max_rounds.is_some(), "refinement did not stabilize within the node count");
    let coloring = Coloring { graphs: union.split(&colors), round, num_colors: count, stable, trace, mode };
    let multisets = (0..graphs.len()).map(|k| coloring_multisets(&coloring, k)).collect();
    (coloring, multisets)
}

pub fn coloring_multisets(coloring: &Coloring, graph: usize) -> ColoringMultiset {
    let gc = &coloring.graphs[graph];
    let mut ms = ColoringMultiset::default();
    for &c in &gc.constraints {
        *ms.constraints.entry(c).or_default() += 1;
    }
    for &c in &gc.variables {
        *ms.variables.entry(c).or_default() += 1;
    }
    ms
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassType {
    /// A single node.
    Type1,
    /// Two or more nodes.
    Type2,
}

/// All nodes of one side sharing one color, sorted by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorClass {
    pub color: ColorId,
    pub members: Vec<usize>,
}

impl ColorClass {
    pub fn class_type(&self) -> ClassType {
        if self.members.len() == 1 {
            ClassType::Type1
        } else {
            ClassType::Type2
        }
    }
}

/// Color classes of one graph, each side sorted by color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablePartition {
    pub var_classes: Vec<ColorClass>,
    pub con_classes: Vec<ColorClass>,
}

impl StablePartition {
    pub fn from_coloring(gc: &GraphColoring) -> Self {
        StablePartition { var_classes: classes(&gc.variables), con_classes: classes(&gc.constraints) }
    }

    pub fn type2_classes(&self) -> impl Iterator<Item = (Side, &ColorClass)> {
        let vars = self.var_classes.iter().map(|c| (Side::Variable, c));
        let cons = self.con_classes.iter().map(|c| (Side::Constraint, c));
        vars.chain(cons).filter(|(_, c)| c.class_type() == ClassType::Type2)
    }
}

fn classes(colors: &[ColorId]) -> Vec<ColorClass> {
    let mut by_color: BTreeMap<ColorId, Vec<usize>> = BTreeMap::new();
    for (k, &c) in colors.iter().enumerate() {
        by_color.entry(c).or_default().push(k);
    }
    by_color.into_iter().map(|(color, members)| ColorClass { color, members }).collect()
}

/// The first violated stable-partition condition, if any: equal features
/// within each class, and for every node the per-class sums of its edge
/// weights equal those of the other members of its class.
pub fn partition_violation(g: &BipartiteGraph, gc: &GraphColoring) -> Option<String> {
    let p = StablePartition::from_coloring(gc);
    for class in &p.var_classes {
        let first = &g.variable_features()[class.members[0]];
        if let Some(&j) = class.members.iter().find(|&&j| &g.variable_features()[j] != first) {
            return Some(format!("variable class {} mixes features (var {} vs var {j})", class.color.0, class.members[0]));
        }
    }
    for class in &p.con_classes {
        let first = &g.constraint_features()[class.members[0]];
        if let Some(&i) = class.members.iter().find(|&&i| &g.constraint_features()[i] != first) {
            return Some(format!(
                "constraint class {} mixes features (con {} vs con {i})",
                class.color.0, class.members[0]
            ));
        }
    }
    let sums = |node: NodeId| {
        let mut acc: BTreeMap<ColorId, Rational> = BTreeMap::new();
        for (other, w) in g.neighbors(node) {
            *acc.entry(gc.color(other)).or_default() += w;
        }
        acc.retain(|_, v| *v != Rational::default());
        acc
    };
    for (side, list) in [(Side::Variable, &p.var_classes), (Side::Constraint, &p.con_classes)] {
        for class in list {
            let node = |k: usize| NodeId { side, index: k };
            let reference = sums(node(class.members[0]));
            if let Some(&k) = class.members.iter().skip(1).find(|&&k| sums(node(k)) != reference) {
                return Some(format!(
                    "{} class {}: per-class coefficient sums differ between {} and {}",
                    side.label(),
                    class.color.0,
                    node(class.members[0]),
                    node(k)
                ));
            }
        }
    }
    None
}

/// Color classes of a stable coloring, checked against the stable-partition
/// conditions. A violation in pairs mode means a refinement bug.
pub fn stable_partition(g: &BipartiteGraph, gc: &GraphColoring) -> Result<StablePartition> {
    match partition_violation(g, gc) {
        Some(msg) => Err(Error::InternalAssertion(msg)),
        None => Ok(StablePartition::from_coloring(gc)),
    }
}

/// Every class on both sides is a singleton.
pub fn is_unfoldable(p: &StablePartition) -> bool {
    p.type2_classes().next().is_none()
}
