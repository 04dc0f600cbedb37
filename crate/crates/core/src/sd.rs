//! Symmetric-decomposable detection.
//!
//! After removing uniquely colored nodes, a graph is symmetric decomposable
//! when the remaining nodes split into `k` pairwise disconnected clusters,
//! each carrying every remaining color exactly once.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeId, Side};
use crate::wl::{ColorClass, ColorId, GraphColoring, StablePartition};

/// Order in which classes seed clusters and members are indexed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SeedOrder {
    /// Smallest color first, members by node id.
    #[default]
    Canonical,
    /// Seeded shuffle of the color order and of every member list.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdFailureKind {
    UnequalClassSizes,
    RepeatedColorInCluster,
    ClustersOverlap,
    ClustersConnected,
    /// The coloring does not satisfy the stable-partition conditions. Only
    /// reachable with weighted-sum refinement.
    PartitionNotStable,
}

impl SdFailureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SdFailureKind::UnequalClassSizes => "unequal-class-sizes",
            SdFailureKind::RepeatedColorInCluster => "repeated-color-in-cluster",
            SdFailureKind::ClustersOverlap => "clusters-overlap",
            SdFailureKind::ClustersConnected => "clusters-connected",
            SdFailureKind::PartitionNotStable => "partition-not-stable",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            SdFailureKind::UnequalClassSizes => "unequal class sizes",
            SdFailureKind::RepeatedColorInCluster => "repeated color in cluster",
            SdFailureKind::ClustersOverlap => "clusters overlap",
            SdFailureKind::ClustersConnected => "clusters connected",
            SdFailureKind::PartitionNotStable => "partition not stable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdFailure {
    pub kind: SdFailureKind,
    pub witness: Vec<NodeId>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterAssignment {
    /// Each cluster sorted; clusters ordered by smallest member.
    pub clusters: Vec<Vec<NodeId>>,
    /// Uniquely colored nodes, sorted.
    pub excluded: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SdReport {
    pub is_sd: bool,
    /// Common size of the multi-node color classes, which is also the
    /// number of clusters. Absent when the sizes disagree.
    pub k: Option<usize>,
    /// Number of nodes per cluster (the number of multi-node classes).
    pub cluster_size: Option<usize>,
    pub cluster_assignment: Option<ClusterAssignment>,
    pub failure: Option<SdFailure>,
}

impl SdReport {
    pub fn failed(kind: SdFailureKind, k: Option<usize>, witness: Vec<NodeId>, detail: impl Into<String>) -> Self {
        SdReport {
            is_sd: false,
            k,
            cluster_size: None,
            cluster_assignment: None,
            failure: Some(SdFailure { kind, witness, detail: detail.into() }),
        }
    }
}

fn all_nodes(g: &BipartiteGraph) -> impl Iterator<Item = NodeId> {
    (0..g.num_constraints()).map(NodeId::con).chain((0..g.num_vars()).map(NodeId::var))
}

fn unique_nodes(g: &BipartiteGraph, gc: &GraphColoring) -> Vec<NodeId> {
    let mut counts: HashMap<ColorId, usize> = HashMap::new();
    for node in all_nodes(g) {
        *counts.entry(gc.color(node)).or_default() += 1;
    }
    all_nodes(g).filter(|&v| counts[&gc.color(v)] == 1).collect()
}

pub fn detect_symmetric_decomposable(
    g: &BipartiteGraph,
    gc: &GraphColoring,
    partition: &StablePartition,
    order: SeedOrder,
) -> Result<SdReport> {
    if gc.constraints.len() != g.num_constraints() || gc.variables.len() != g.num_vars() {
        return Err(Error::Precondition("coloring does not cover the graph".into()));
    }
    if *partition != StablePartition::from_coloring(gc) {
        return Err(Error::Precondition("partition was not derived from this coloring".into()));
    }

    let type2: Vec<(Side, &ColorClass)> = partition.type2_classes().collect();
    let excluded = unique_nodes(g, gc);
    let Some(&(first_side, first)) = type2.first() else {
        return Ok(SdReport {
            is_sd: true,
            k: Some(0),
            cluster_size: Some(0),
            cluster_assignment: Some(ClusterAssignment { clusters: Vec::new(), excluded }),
            failure: None,
        });
    };

    let k = first.members.len();
    if let Some(&(side, other)) = type2.iter().find(|(_, c)| c.members.len() != k) {
        return Ok(SdReport::failed(
            SdFailureKind::UnequalClassSizes,
            None,
            vec![NodeId { side: first_side, index: first.members[0] }, NodeId { side, index: other.members[0] }],
            format!("class of color {} has {k} nodes, class of color {} has {}", first.color.0, other.color.0, other.members.len()),
        ));
    }

    // P_c: members of each multi-node class, indexed by color
    let mut members: HashMap<ColorId, Vec<NodeId>> = type2
        .iter()
        .map(|&(side, c)| (c.color, c.members.iter().map(|&index| NodeId { side, index }).collect()))
        .collect();
    let mut colors: Vec<ColorId> = type2.iter().map(|(_, c)| c.color).collect();
    colors.sort_unstable();
    if let SeedOrder::Shuffled(seed) = order {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        colors.shuffle(&mut rng);
        for color in &colors {
            members.get_mut(color).expect("class").shuffle(&mut rng);
        }
    }

    let mut clusters: Vec<Vec<NodeId>> = Vec::with_capacity(k);
    for i in 0..k {
        let mut cluster: Vec<NodeId> = Vec::new();
        let mut by_color: HashMap<ColorId, NodeId> = HashMap::new();
        let mut queue = VecDeque::new();
        for &c in &colors {
            if by_color.contains_key(&c) {
                continue;
            }
            let seed = members[&c][i];
            by_color.insert(c, seed);
            cluster.push(seed);
            queue.push_back(seed);
            while let Some(u) = queue.pop_front() {
                for (w, _) in g.neighbors(u) {
                    let cw = gc.color(w);
                    if !members.contains_key(&cw) || by_color.get(&cw) == Some(&w) {
                        continue;
                    }
                    if let Some(&prev) = by_color.get(&cw) {
                        return Ok(SdReport::failed(
                            SdFailureKind::RepeatedColorInCluster,
                            Some(k),
                            vec![prev, w],
                            format!("cluster {i} reaches color {} twice", cw.0),
                        ));
                    }
                    by_color.insert(cw, w);
                    cluster.push(w);
                    queue.push_back(w);
                }
            }
        }
        clusters.push(cluster);
    }

    if let Some(failure) = check_clusters(g, gc, &clusters) {
        return Ok(SdReport::failed(failure.kind, Some(k), failure.witness, failure.detail));
    }

    for cluster in &mut clusters {
        cluster.sort_unstable();
    }
    clusters.sort_unstable_by_key(|c| c[0]);
    Ok(SdReport {
        is_sd: true,
        k: Some(k),
        cluster_size: Some(colors.len()),
        cluster_assignment: Some(ClusterAssignment { clusters, excluded }),
        failure: None,
    })
}

/// Distinct colors within clusters, pairwise disjointness, and no edges
/// between clusters.
fn check_clusters(g: &BipartiteGraph, gc: &GraphColoring, clusters: &[Vec<NodeId>]) -> Option<SdFailure> {
    for (i, cluster) in clusters.iter().enumerate() {
        let mut seen: HashMap<ColorId, NodeId> = HashMap::new();
        for &v in cluster {
            if let Some(&prev) = seen.get(&gc.color(v)) {
                return Some(SdFailure {
                    kind: SdFailureKind::RepeatedColorInCluster,
                    witness: vec![prev, v],
                    detail: format!("cluster {i} repeats color {}", gc.color(v).0),
                });
            }
            seen.insert(gc.color(v), v);
        }
    }
    let mut owner: HashMap<NodeId, usize> = HashMap::new();
    for (i, cluster) in clusters.iter().enumerate() {
        for &v in cluster {
            if let Some(&j) = owner.get(&v) {
                return Some(SdFailure {
                    kind: SdFailureKind::ClustersOverlap,
                    witness: vec![v],
                    detail: format!("node {v} is in clusters {j} and {i}"),
                });
            }
            owner.insert(v, i);
        }
    }
    for (i, cluster) in clusters.iter().enumerate() {
        for &v in cluster {
            for (w, _) in g.neighbors(v) {
                if let Some(&j) = owner.get(&w) {
                    if j != i {
                        return Some(SdFailure {
                            kind: SdFailureKind::ClustersConnected,
                            witness: vec![v, w],
                            detail: format!("edge joins cluster {i} and cluster {j}"),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Checks a cluster assignment directly: clusters and excluded nodes
/// partition the graph, excluded nodes are exactly the uniquely colored
/// ones, every cluster has distinct colors and the same color set, and no
/// edge joins two clusters.
pub fn verify_cluster_assignment(g: &BipartiteGraph, gc: &GraphColoring, ca: &ClusterAssignment) -> bool {
    let in_range = ca.clusters.iter().flatten().chain(&ca.excluded).all(|&v| g.contains(v));
    if !in_range || gc.constraints.len() != g.num_constraints() || gc.variables.len() != g.num_vars() {
        return false;
    }
    let mut seen: HashSet<NodeId> = HashSet::new();
    if !ca.clusters.iter().flatten().chain(&ca.excluded).all(|&v| seen.insert(v)) {
        return false;
    }
    if seen.len() != g.num_nodes() {
        return false;
    }
    let unique: HashSet<NodeId> = unique_nodes(g, gc).into_iter().collect();
    if ca.excluded.len() != unique.len() || !ca.excluded.iter().all(|v| unique.contains(v)) {
        return false;
    }
    let color_sets: Vec<Vec<ColorId>> = ca
        .clusters
        .iter()
        .map(|c| {
            let mut colors: Vec<ColorId> = c.iter().map(|&v| gc.color(v)).collect();
            colors.sort_unstable();
            colors
        })
        .collect();
    if color_sets.iter().any(|s| s.windows(2).any(|w| w[0] == w[1])) {
        return false;
    }
    if color_sets.windows(2).any(|w| w[0] != w[1]) {
        return false;
    }
    let owner: HashMap<NodeId, usize> =
        ca.clusters.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();
    g.edges().iter().all(|e| match (owner.get(&NodeId::con(e.con)), owner.get(&NodeId::var(e.var))) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    })
}
