//! Instance generators and a naive reference implementation of color
//! refinement, shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use milp_equiv::rational::int;
use milp_equiv::{ConstraintRow, Instance, ObjectiveSense, Rational, Sense, VarKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(sub)
}

pub fn lp_fixtures() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir("lp"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "lp"))
        .collect();
    files.sort();
    files
}

pub fn load_fixture(name: &str) -> Instance {
    milp_equiv::load_lp(&fixture_dir("lp").join(name)).unwrap()
}

fn row(coeffs: &[(usize, i64)], sense: Sense, rhs: i64) -> ConstraintRow {
    ConstraintRow::new(coeffs.iter().map(|&(j, a)| (j, int(a))), sense, int(rhs))
}

/// Bin packing with `p` vehicles and items of the given sizes. Variables
/// are `y_1..y_p` followed by `x_ij` item-major; rows are the item
/// assignment rows followed by one capacity row per vehicle.
pub fn bin_packing(p: usize, sizes: &[i64], capacity: i64) -> Instance {
    let q = sizes.len();
    let x = |i: usize, j: usize| p + i * p + j;
    let mut rows = Vec::new();
    for i in 0..q {
        rows.push(row(&(0..p).map(|j| (x(i, j), 1)).collect::<Vec<_>>(), Sense::Eq, 1));
    }
    for j in 0..p {
        let mut coeffs: Vec<(usize, i64)> = (0..q).map(|i| (x(i, j), sizes[i])).collect();
        coeffs.push((j, -capacity));
        rows.push(row(&coeffs, Sense::Le, 0));
    }
    let n = p + p * q;
    let objective = (0..n).map(|j| if j < p { int(1) } else { int(0) }).collect();
    Instance::new(ObjectiveSense::Minimize, objective, vec![VarKind::Integer; n], rows)
}

/// Four variables and four `a + b <= 1` rows following `pairs`.
pub fn uniform_cycle(pairs: &[(usize, usize)]) -> Instance {
    Instance::new(
        ObjectiveSense::Minimize,
        vec![int(1); 4],
        vec![VarKind::Continuous; 4],
        pairs.iter().map(|&(a, b)| row(&[(a, 1), (b, 1)], Sense::Le, 1)).collect(),
    )
}

pub fn cycle8() -> Instance {
    uniform_cycle(&[(0, 1), (1, 2), (2, 3), (3, 0)])
}

pub fn two_cycles() -> Instance {
    uniform_cycle(&[(0, 1), (0, 1), (2, 3), (2, 3)])
}

fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    loop {
        let v = rng.gen_range(lo..=hi);
        if v != 0 {
            return v;
        }
    }
}

/// A symmetric decomposable instance by construction: `k` identical copies
/// of a connected block whose nodes are pairwise distinguishable, coupled
/// only through uniquely colored rows and variables.
pub fn random_sd_instance(seed: u64, max_dim: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=4usize);
    let bv = rng.gen_range(1..=(max_dim / (2 * k)).clamp(1, 6));
    let bc = rng.gen_range(1..=(max_dim / (2 * k)).clamp(1, 6));
    let free_vars = rng.gen_range(0..=max_dim.saturating_sub(k * bv).min(4));
    let n = k * bv + free_vars;
    let linking = rng.gen_range(0..=max_dim.saturating_sub(k * bc).min(4));

    // block objective and rhs values are distinct, so every block node is
    // distinguishable from the others in its block
    let mut block_obj: Vec<i64> = (1..=40).collect();
    block_obj.shuffle(&mut rng);
    let mut block_rhs: Vec<i64> = (-20..=20).collect();
    block_rhs.shuffle(&mut rng);
    let mut block_rows: Vec<Vec<(usize, i64)>> = Vec::new();
    for c in 0..bc {
        // rows c and c + 1 share variable c + 1, which keeps the block connected
        let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
        coeffs.insert(c % bv, nonzero(&mut rng, -3, 3));
        coeffs.insert((c + 1) % bv, nonzero(&mut rng, -3, 3));
        for t in 0..bv {
            if rng.gen_bool(0.4) {
                coeffs.insert(t, nonzero(&mut rng, -3, 3));
            }
        }
        block_rows.push(coeffs.into_iter().collect());
    }
    let orphan: Vec<usize> = (0..bv).filter(|t| !block_rows.iter().any(|r| r.iter().any(|(j, _)| j == t))).collect();
    for t in orphan {
        block_rows[t % bc].push((t, nonzero(&mut rng, -3, 3)));
    }
    let senses = [Sense::Le, Sense::Ge, Sense::Eq];
    let block_senses: Vec<Sense> = (0..bc).map(|_| senses[rng.gen_range(0..3)]).collect();

    let mut objective = vec![int(0); n];
    let mut kinds = vec![VarKind::Continuous; n];
    let block_kinds: Vec<VarKind> =
        (0..bv).map(|_| if rng.gen_bool(0.3) { VarKind::Integer } else { VarKind::Continuous }).collect();
    for copy in 0..k {
        for t in 0..bv {
            objective[copy * bv + t] = int(block_obj[t]);
            kinds[copy * bv + t] = block_kinds[t];
        }
    }
    for f in 0..free_vars {
        objective[k * bv + f] = int(100 + f as i64);
    }

    let mut rows = Vec::new();
    for copy in 0..k {
        for (c, r) in block_rows.iter().enumerate() {
            let coeffs: Vec<(usize, i64)> = r.iter().map(|&(t, a)| (copy * bv + t, a)).collect();
            rows.push(row(&coeffs, block_senses[c], block_rhs[c]));
        }
    }
    for l in 0..linking {
        // touch every copy of one block variable symmetrically, plus free variables
        let t = rng.gen_range(0..bv);
        let w = nonzero(&mut rng, -2, 2);
        let mut coeffs: Vec<(usize, i64)> = (0..k).map(|copy| (copy * bv + t, w)).collect();
        for f in 0..free_vars {
            if rng.gen_bool(0.5) {
                coeffs.push((k * bv + f, nonzero(&mut rng, -2, 2)));
            }
        }
        rows.push(row(&coeffs, Sense::Ge, 1000 + l as i64));
    }
    for f in 0..free_vars {
        rows.push(row(&[(k * bv + f, 1)], Sense::Le, 500 + f as i64));
    }
    let mut inst = Instance::new(ObjectiveSense::Minimize, objective, kinds, rows);
    if rng.gen_bool(0.5) {
        inst.objective_sense = ObjectiveSense::Maximize;
    }
    inst
}

/// A small random instance over a narrow value range, so that symmetric
/// and non-SD instances are both common.
pub fn random_small_instance(rng: &mut ChaCha8Rng, max_dim: usize) -> Instance {
    let n = rng.gen_range(1..=max_dim);
    let m = rng.gen_range(1..=max_dim);
    let objective = (0..n).map(|_| int(rng.gen_range(0..=2))).collect();
    let kinds = (0..n).map(|_| if rng.gen_bool(0.2) { VarKind::Integer } else { VarKind::Continuous }).collect();
    let senses = [Sense::Le, Sense::Ge, Sense::Eq];
    let rows = (0..m)
        .map(|_| {
            let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
            coeffs.insert(rng.gen_range(0..n), int(rng.gen_range(1..=2)));
            for j in 0..n {
                if rng.gen_bool(0.35) {
                    coeffs.insert(j, int(if rng.gen_bool(0.8) { 1 } else { -1 }));
                }
            }
            ConstraintRow::new(coeffs, senses[rng.gen_range(0..3)], int(rng.gen_range(0..=2)))
        })
        .collect();
    Instance::new(ObjectiveSense::Minimize, objective, kinds, rows)
}

/// A small instance whose rows are `x_i + x_sigma(i) <= 1` for a random
/// derangement-like map, so every variable has degree two and refinement
/// often cannot split anything. Unions of cycles of this shape are the
/// typical non-SD case.
pub fn random_regular_instance(rng: &mut ChaCha8Rng, max_dim: usize) -> Instance {
    let n = rng.gen_range(3..=max_dim.max(3));
    let mut sigma: Vec<usize> = (0..n).collect();
    loop {
        sigma.shuffle(rng);
        if sigma.iter().enumerate().all(|(i, &s)| i != s) {
            break;
        }
    }
    let rows = (0..n).map(|i| row(&[(i, 1), (sigma[i], 1)], Sense::Le, 1)).collect();
    Instance::new(ObjectiveSense::Minimize, vec![int(1); n], vec![VarKind::Continuous; n], rows)
}

/// Node colors of one instance from [`naive_refinement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveColors {
    pub cons: Vec<usize>,
    pub vars: Vec<usize>,
}

impl NaiveColors {
    /// Sorted multiset of (side, color) pairs.
    pub fn multiset(&self) -> Vec<(u8, usize)> {
        let mut out: Vec<(u8, usize)> =
            self.cons.iter().map(|&c| (0, c)).chain(self.vars.iter().map(|&c| (1, c))).collect();
        out.sort();
        out
    }

    /// Sizes of all color classes, sorted descending.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut counts: BTreeMap<(u8, usize), usize> = BTreeMap::new();
        for key in self.multiset() {
            *counts.entry(key).or_default() += 1;
        }
        let mut sizes: Vec<usize> = counts.into_values().collect();
        sizes.sort_by(|a, b| b.cmp(a));
        sizes
    }
}

/// Straightforward joint color refinement on string signatures, written
/// without reference to the library's implementation.
pub fn naive_refinement(instances: &[&Instance]) -> Vec<NaiveColors> {
    // node list: (instance, side, index); side 0 = constraint, 1 = variable
    let mut nodes: Vec<(usize, u8, usize)> = Vec::new();
    for (g, inst) in instances.iter().enumerate() {
        nodes.extend((0..inst.rows.len()).map(|i| (g, 0, i)));
        nodes.extend((0..inst.objective.len()).map(|j| (g, 1, j)));
    }
    let position: BTreeMap<(usize, u8, usize), usize> = nodes.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let mut adjacency: Vec<Vec<(String, usize)>> = vec![Vec::new(); nodes.len()];
    for (g, inst) in instances.iter().enumerate() {
        for (i, r) in inst.rows.iter().enumerate() {
            for (&j, a) in &r.coeffs {
                let (pc, pv) = (position[&(g, 0, i)], position[&(g, 1, j)]);
                adjacency[pc].push((a.to_string(), pv));
                adjacency[pv].push((a.to_string(), pc));
            }
        }
    }
    let initial: Vec<String> = nodes
        .iter()
        .map(|&(g, side, idx)| {
            let inst = instances[g];
            if side == 0 {
                format!("con {:?} {}", inst.rows[idx].sense, inst.rows[idx].rhs)
            } else {
                format!("var {} {:?}", inst.objective[idx], inst.var_kinds[idx])
            }
        })
        .collect();
    let relabel = |sigs: &[String]| -> Vec<usize> {
        let distinct: BTreeSet<&String> = sigs.iter().collect();
        let ids: BTreeMap<&String, usize> = distinct.into_iter().enumerate().map(|(k, s)| (s, k)).collect();
        sigs.iter().map(|s| ids[s]).collect()
    };
    let mut colors = relabel(&initial);
    loop {
        let sigs: Vec<String> = (0..nodes.len())
            .map(|p| {
                let mut nb: Vec<String> = adjacency[p].iter().map(|(w, q)| format!("{w}@{}", colors[*q])).collect();
                nb.sort();
                format!("{}|{}", colors[p], nb.join(","))
            })
            .collect();
        let next = relabel(&sigs);
        let before: BTreeSet<usize> = colors.iter().copied().collect();
        let after: BTreeSet<usize> = next.iter().copied().collect();
        colors = next;
        if before.len() == after.len() {
            break;
        }
    }
    instances
        .iter()
        .enumerate()
        .map(|(g, inst)| NaiveColors {
            cons: (0..inst.rows.len()).map(|i| colors[position[&(g, 0, i)]]).collect(),
            vars: (0..inst.objective.len()).map(|j| colors[position[&(g, 1, j)]]).collect(),
        })
        .collect()
}

/// Connected components of the subgraph induced by nodes whose color
/// occurs more than once. Nodes are `(side, index)`.
pub fn repeated_color_components(inst: &Instance, colors: &NaiveColors) -> Vec<Vec<(u8, usize)>> {
    let mut counts: BTreeMap<(u8, usize), usize> = BTreeMap::new();
    for key in colors.multiset() {
        *counts.entry(key).or_default() += 1;
    }
    let color = |(side, idx): (u8, usize)| if side == 0 { (0, colors.cons[idx]) } else { (1, colors.vars[idx]) };
    let repeated = |node: (u8, usize)| counts[&color(node)] > 1;
    let mut seen: BTreeSet<(u8, usize)> = BTreeSet::new();
    let mut comps = Vec::new();
    let all: Vec<(u8, usize)> =
        (0..inst.rows.len()).map(|i| (0, i)).chain((0..inst.objective.len()).map(|j| (1, j))).collect();
    for &start in &all {
        if !repeated(start) || !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some((side, idx)) = stack.pop() {
            let neighbors: Vec<(u8, usize)> = if side == 0 {
                inst.rows[idx].coeffs.keys().map(|&j| (1, j)).collect()
            } else {
                (0..inst.rows.len()).filter(|&i| inst.rows[i].coeffs.contains_key(&idx)).map(|i| (0, i)).collect()
            };
            for nb in neighbors {
                if repeated(nb) && seen.insert(nb) {
                    comp.push(nb);
                    stack.push(nb);
                }
            }
        }
        comp.sort();
        comps.push(comp);
    }
    comps
}

/// Whether the components of repeated-color nodes can be grouped into
/// clusters that each carry every repeated color exactly once. Exhaustive
/// over groupings, so only for small instances.
pub fn components_form_clusters(inst: &Instance, colors: &NaiveColors) -> bool {
    let comps = repeated_color_components(inst, colors);
    if comps.is_empty() {
        return true;
    }
    let color_of = |(s, i): (u8, usize)| if s == 0 { (0u8, colors.cons[i]) } else { (1u8, colors.vars[i]) };
    let mut counts: BTreeMap<(u8, usize), usize> = BTreeMap::new();
    for comp in &comps {
        for &node in comp {
            *counts.entry(color_of(node)).or_default() += 1;
        }
    }
    let k = *counts.values().next().unwrap();
    if counts.values().any(|&c| c != k) {
        return false;
    }
    let sets: Vec<BTreeSet<(u8, usize)>> = comps.iter().map(|c| c.iter().map(|&n| color_of(n)).collect()).collect();
    if sets.iter().zip(&comps).any(|(s, c)| s.len() != c.len()) {
        return false;
    }
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(sets[c].len()));
    let mut groups: Vec<BTreeSet<(u8, usize)>> = vec![BTreeSet::new(); k];
    fn place(order: &[usize], sets: &[BTreeSet<(u8, usize)>], groups: &mut [BTreeSet<(u8, usize)>]) -> bool {
        let Some((&c, rest)) = order.split_first() else { return true };
        for g in 0..groups.len() {
            if groups[g].is_disjoint(&sets[c]) {
                // empty groups are interchangeable; trying one is enough
                let was_empty = groups[g].is_empty();
                groups[g].extend(sets[c].iter().copied());
                if place(rest, sets, groups) {
                    return true;
                }
                groups[g].retain(|x| !sets[c].contains(x));
                if was_empty {
                    break;
                }
            }
        }
        false
    }
    place(&order, &sets, &mut groups)
}
