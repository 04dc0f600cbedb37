//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use milp_equiv::rational::int;
use milp_equiv::sampling::{derive_seed, evaluate_consistency, parse_template, sample_config, sd_rate, ParameterSpec};
use milp_equiv::wl::coloring_multisets;
use milp_equiv::{
    apply_permutation, brute_force_isomorphic, check_equivalence, encode, instances_identical, parse_lp,
    random_permutation, run_wl, sd_of_instance, write_lp, CheckOptions, ConstraintRow, Instance, ObjectiveSense,
    Reason, RefinementMode, Sense, Side, VarKind, Verdict,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn permuted(inst: &Instance, seed: u64) -> Instance {
    let pv = random_permutation(inst.num_vars(), seed);
    let pr = random_permutation(inst.num_constraints(), seed.wrapping_add(0x9e37));
    apply_permutation(inst, &pv, &pr).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn permutation_soundness() -> Outcome {
    let opts = CheckOptions::default();
    let mut shapes = BTreeMap::new();
    for seed in 0..1000u64 {
        let inst = common::random_sd_instance(seed, 50);
        ensure(inst.num_vars() <= 50 && inst.num_constraints() <= 50, || format!("seed {seed}: instance too large"))?;
        let copy = permuted(&inst, seed ^ 0xabcd);
        let r = check_equivalence(&inst, &copy, &opts).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(r.verdict == Verdict::Equivalent && r.guaranteed, || {
            format!("seed {seed}: {} (guaranteed = {})", r.verdict, r.guaranteed)
        })?;
        *shapes.entry(r.sd_reference.and_then(|s| s.k).unwrap_or(0)).or_insert(0) += 1;
    }
    let by_k: Vec<String> = shapes.iter().map(|(k, c)| format!("k={k}: {c}")).collect();
    Ok(format!("1000/1000 Equivalent and guaranteed ({})", by_k.join(", ")))
}

/// Partner of `a` for the oracle comparison: permuted, perturbed, sense
/// flipped, or both of the last two on top of a permutation.
fn partner(a: &Instance, kind: usize, rng: &mut ChaCha8Rng) -> Instance {
    let mut b = a.clone();
    let perturb = |b: &mut Instance, rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..b.rows.len());
        let j = **b.rows[i].coeffs.keys().collect::<Vec<_>>().choose(rng).unwrap();
        let old = b.rows[i].coeffs[&j].clone();
        let new = loop {
            let v = int(rng.gen_range(-2..=2));
            if v != old && v != int(0) {
                break v;
            }
        };
        b.rows[i].coeffs.insert(j, new);
    };
    let flip = |b: &mut Instance, rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..b.rows.len());
        let senses = [Sense::Le, Sense::Ge, Sense::Eq];
        let new = *senses.iter().filter(|&&s| s != b.rows[i].sense).collect::<Vec<_>>().choose(rng).unwrap();
        b.rows[i].sense = *new;
    };
    match kind {
        0 => {}
        1 => perturb(&mut b, rng),
        2 => flip(&mut b, rng),
        _ => {
            perturb(&mut b, rng);
            flip(&mut b, rng);
        }
    }
    permuted(&b, rng.gen())
}

fn oracle_agreement() -> Outcome {
    let opts = CheckOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut both_sd, mut agree, mut equivalent, mut iso_pairs, mut not_sd) = (0, 0, 0, 0, 0);
    let total = 600;
    for t in 0..total {
        let regular = t % 3 == 2;
        let fresh = |rng: &mut ChaCha8Rng| {
            if regular {
                common::random_regular_instance(rng, 5)
            } else {
                common::random_small_instance(rng, 5)
            }
        };
        let a = fresh(&mut rng);
        let b = if t % 5 == 4 { fresh(&mut rng) } else { partner(&a, t % 5, &mut rng) };
        let r = check_equivalence(&a, &b, &opts).map_err(|e| e.to_string())?;
        let iso = brute_force_isomorphic(&a, &b, 8).map_err(|e| e.to_string())?;
        iso_pairs += usize::from(iso);
        if r.verdict.is_equivalent() {
            equivalent += 1;
            ensure(iso, || format!("false Equivalent on pair {t}:\n{a:?}\n{b:?}"))?;
        }
        let sd_a = sd_of_instance(&a, &opts).map_err(|e| e.to_string())?.is_sd;
        let sd_b = sd_of_instance(&b, &opts).map_err(|e| e.to_string())?.is_sd;
        not_sd += usize::from(!sd_a || !sd_b);
        if sd_a && sd_b {
            both_sd += 1;
            ensure(r.verdict.is_equivalent() == iso, || {
                format!("pair {t}: verdict {} but oracle says isomorphic = {iso}\n{a:?}\n{b:?}", r.verdict)
            })?;
            agree += 1;
        }
    }
    ensure(both_sd > 0, || "no pair had both instances SD".into())?;
    Ok(format!(
        "{total} pairs, {agree}/{both_sd} both-SD pairs match the oracle, {not_sd} pairs with a non-SD side, {equivalent} Equivalent of {iso_pairs} isomorphic, 0 false Equivalent"
    ))
}

fn conservative_counterexample() -> Outcome {
    let (a, b) = (common::load_fixture("cycle8.lp"), common::load_fixture("two_cycles.lp"));
    let opts = CheckOptions::default();
    let g = [encode(&a).unwrap(), encode(&b).unwrap()];
    let (coloring, _) = run_wl(&[&g[0], &g[1]], RefinementMode::Pairs, None);
    ensure(coloring_multisets(&coloring, 0) == coloring_multisets(&coloring, 1), || "multisets differ".into())?;
    let (sd_a, sd_b) = (sd_of_instance(&a, &opts).unwrap(), sd_of_instance(&b, &opts).unwrap());
    ensure(!sd_a.is_sd && !sd_b.is_sd, || format!("SD flags {} / {}", sd_a.is_sd, sd_b.is_sd))?;
    let r = check_equivalence(&a, &b, &opts).unwrap();
    ensure(r.verdict == Verdict::NotEquivalent(Reason::TestNotSd) && !r.guaranteed, || format!("verdict {}", r.verdict))?;
    let iso = brute_force_isomorphic(&a, &b, 8).unwrap();
    ensure(!iso, || "oracle found an isomorphism".into())?;
    Ok("equal multisets, neither SD, NotEquivalent(test-not-sd), oracle: not isomorphic".into())
}

fn bin_packing_structure() -> Outcome {
    let inst = common::bin_packing(3, &[1, 2], 5);
    let sd = sd_of_instance(&inst, &CheckOptions::default()).map_err(|e| e.to_string())?;
    ensure(sd.is_sd, || format!("not SD: {:?}", sd.failure))?;
    let ca = sd.cluster_assignment.as_ref().unwrap();
    ensure(ca.clusters.len() == 3 && sd.k == Some(3), || format!("{} clusters", ca.clusters.len()))?;
    let unique_cons = ca.excluded.iter().filter(|n| n.side == Side::Constraint).count();
    ensure(ca.excluded.len() == 2 && unique_cons == 2, || format!("excluded {:?}", ca.excluded))?;

    let g = encode(&inst).unwrap();
    let (coloring, _) = run_wl(&[&g], RefinementMode::Pairs, None);
    let ms = coloring_multisets(&coloring, 0);
    let mut sizes: Vec<usize> = ms.constraints.values().chain(ms.variables.values()).copied().collect();
    sizes.sort_by(|a, b| b.cmp(a));
    ensure(sizes == [3, 3, 3, 3, 1, 1], || format!("class sizes {sizes:?}"))?;
    let naive = common::naive_refinement(&[&inst]);
    ensure(naive[0].class_sizes() == sizes, || "naive refinement disagrees".into())?;
    Ok(format!("3 clusters of {} nodes, 2 uniquely colored constraints, classes 4x3 + 2x1", sd.cluster_size.unwrap()))
}

/// A template built from parts so variants can be derived mechanically.
#[derive(Clone)]
struct Base {
    name: &'static str,
    maximize: bool,
    vars: Vec<String>,
    objective: Vec<String>,
    rows: Vec<(Vec<String>, &'static str, String)>,
    spec: String,
}

fn terms<'a>(coeffs: impl Iterator<Item = (&'a String, &'a String)>) -> String {
    let parts: Vec<String> = coeffs.filter(|(c, _)| !c.is_empty()).map(|(c, v)| format!("{c} {v}")).collect();
    parts.join(" + ")
}

impl Base {
    fn render(&self) -> String {
        let mut s = format!("[parameters]\n{}[model]\n", self.spec);
        let _ = writeln!(s, "{}\n obj: {}", if self.maximize { "Maximize" } else { "Minimize" }, terms(self.objective.iter().zip(&self.vars)));
        s.push_str("Subject To\n");
        for (i, (coeffs, sense, rhs)) in self.rows.iter().enumerate() {
            let _ = writeln!(s, " r{i}: {} {sense} {rhs}", terms(coeffs.iter().zip(&self.vars)));
        }
        s.push_str("Bounds\n");
        for v in &self.vars {
            let _ = writeln!(s, " {v} free");
        }
        s.push_str("End\n");
        s
    }

    /// Parameter names used by row `i`.
    fn row_parameters(&self, i: usize) -> Vec<String> {
        let (coeffs, _, rhs) = &self.rows[i];
        coeffs
            .iter()
            .chain(std::iter::once(rhs))
            .filter_map(|c| c.strip_prefix("${").and_then(|c| c.strip_suffix('}')))
            .map(str::to_string)
            .collect()
    }
}

/// Dense base: `rows` by `cols`, every coefficient, cost and rhs sampled.
fn dense_base(name: &'static str, rows: usize, cols: usize, senses: &[&'static str], maximize: bool) -> Base {
    let mut spec = String::new();
    let vars: Vec<String> = (0..cols).map(|j| format!("x{j}")).collect();
    let objective = (0..cols)
        .map(|j| {
            let _ = writeln!(spec, "c{j} ~ uniform(1, 10)");
            format!("${{c{j}}}")
        })
        .collect();
    let rows = (0..rows)
        .map(|i| {
            let coeffs = (0..cols)
                .map(|j| {
                    let _ = writeln!(spec, "a{i}_{j} ~ uniform(0, 5)");
                    format!("${{a{i}_{j}}}")
                })
                .collect();
            let _ = writeln!(spec, "b{i} ~ uniform(1, 20)");
            (coeffs, senses[i % senses.len()], format!("${{b{i}}}"))
        })
        .collect();
    Base { name, maximize, vars, objective, rows, spec }
}

/// Sparse base: row `i` touches columns `i` and `i + 1`, and every column
/// has its own `<=` capacity row.
fn sparse_base(name: &'static str, cols: usize) -> Base {
    let mut spec = String::new();
    let vars: Vec<String> = (0..cols).map(|j| format!("x{j}")).collect();
    let objective = (0..cols)
        .map(|j| {
            let _ = writeln!(spec, "c{j} ~ uniform(1, 10)");
            format!("${{c{j}}}")
        })
        .collect();
    let mut rows = Vec::new();
    for i in 0..cols - 1 {
        let coeffs = (0..cols)
            .map(|j| {
                if j == i || j == i + 1 {
                    let _ = writeln!(spec, "a{i}_{j} ~ uniform(0, 5)");
                    format!("${{a{i}_{j}}}")
                } else {
                    String::new()
                }
            })
            .collect();
        let _ = writeln!(spec, "b{i} ~ uniform(1, 20)");
        rows.push((coeffs, ">=", format!("${{b{i}}}")));
    }
    for j in 0..cols {
        let _ = writeln!(spec, "u{j} ~ uniform(5, 15)");
        let coeffs = (0..cols).map(|k| if k == j { "1".to_string() } else { String::new() }).collect();
        rows.push((coeffs, "<=", format!("${{u{j}}}")));
    }
    Base { name, maximize: false, vars, objective, rows, spec }
}

fn bases() -> Vec<Base> {
    vec![
        dense_base("blend", 2, 3, &[">="], false),
        dense_base("production", 3, 4, &["<="], true),
        dense_base("diet", 4, 3, &[">=", "="], false),
        dense_base("mixed", 3, 5, &["<=", ">=", "="], true),
        sparse_base("chain", 5),
        sparse_base("ladder", 7),
    ]
}

/// Variants of a base: name, text, and whether it is equivalent by construction.
fn variants(b: &Base) -> Vec<(&'static str, String, bool)> {
    let mut out = Vec::new();

    let mut reordered = b.clone();
    reordered.rows.reverse();
    reordered.vars.reverse();
    reordered.objective.reverse();
    for (coeffs, _, _) in &mut reordered.rows {
        coeffs.reverse();
    }
    out.push(("reorder", reordered.render(), true));

    let mut renamed = b.clone();
    renamed.vars = b.vars.iter().map(|v| format!("renamed_{v}")).collect();
    out.push(("rename", renamed.render(), true));

    let mut flipped = b.clone();
    flipped.rows[0].1 = if flipped.rows[0].1 == "<=" { ">=" } else { "<=" };
    out.push(("sense-flip", flipped.render(), false));

    let mut dropped = b.clone();
    let gone = b.row_parameters(b.rows.len() - 1);
    dropped.rows.pop();
    dropped.spec = b.spec.lines().filter(|l| !gone.iter().any(|n| l.split_whitespace().next() == Some(n))).map(|l| format!("{l}\n")).collect();
    out.push(("dimension-drop", dropped.render(), false));

    let mut sense = b.clone();
    sense.maximize = !b.maximize;
    out.push(("objective-flip", sense.render(), false));

    let mut offset = b.clone();
    offset.rows[0].2 = format!("{} + 1", offset.rows[0].2);
    out.push(("rhs-offset", offset.render(), false));
    out
}

fn consistency() -> Outcome {
    let mut pairs = 0;
    let mut per_kind: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (bi, base) in bases().iter().enumerate() {
        let text = base.render();
        let reference = parse_template(&text).map_err(|e| format!("{}: {e}\n{text}", base.name))?;
        let spec = reference.spec.clone().unwrap_or_default();
        for (vi, (kind, variant, equivalent)) in variants(base).into_iter().enumerate() {
            let test = parse_template(&variant).map_err(|e| format!("{}/{kind}: {e}\n{variant}", base.name))?;
            let c = if test.template.parameter_names == reference.template.parameter_names {
                evaluate_consistency(&reference.template, &test.template, &spec, 5, (bi * 10 + vi) as u64)
            } else {
                consistency_with_superset(&reference.template, &test.template, &spec, (bi * 10 + vi) as u64)
            }
            .map_err(|e| format!("{}/{kind}: {e}", base.name))?;
            ensure(c.num_configs == 5 && c.consistent, || {
                format!("{}/{kind}: verdicts {:?}", base.name, c.verdicts.iter().map(ToString::to_string).collect::<Vec<_>>())
            })?;
            ensure(c.verdicts[0].is_equivalent() == equivalent, || {
                format!("{}/{kind}: expected equivalent = {equivalent}, got {}", base.name, c.verdicts[0])
            })?;
            pairs += 1;
            let e = per_kind.entry(kind).or_default();
            e.0 += 1;
            e.1 += usize::from(c.verdicts[0].is_equivalent());
        }
    }
    ensure(pairs >= 30, || format!("only {pairs} pairs"))?;
    let kinds: Vec<String> = per_kind.iter().map(|(k, (n, e))| format!("{k} {e}/{n} equivalent")).collect();
    Ok(format!("{pairs}/{pairs} pairs consistent over K=5 ({})", kinds.join(", ")))
}

/// Consistency for a test template that uses a subset of the reference
/// parameters: both receive the same draw, the test ignoring the extras.
fn consistency_with_superset(
    reference: &milp_equiv::sampling::ModelTemplate,
    test: &milp_equiv::sampling::ModelTemplate,
    spec: &ParameterSpec,
    seed: u64,
) -> milp_equiv::Result<milp_equiv::sampling::ConsistencyReport> {
    let opts = CheckOptions::default();
    let mut verdicts = Vec::new();
    for r in 0..5 {
        let cfg = sample_config(spec, derive_seed(seed, 0, r));
        let (a, _) = reference.instantiate(&cfg)?;
        let sub = cfg.iter().filter(|(k, _)| test.parameter_names.contains(k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        let (b, _) = test.instantiate(&sub)?;
        verdicts.push(check_equivalence(&a, &b, &opts)?.verdict);
    }
    let consistent = verdicts.windows(2).all(|w| w[0] == w[1]);
    Ok(milp_equiv::sampling::ConsistencyReport {
        num_configs: 5,
        verdicts,
        consistent,
        sd_count: 0,
        configs: Vec::new(),
        reports: Vec::new(),
    })
}

fn sampling_rates() -> Outcome {
    let opts = CheckOptions::default();
    let mut lines = Vec::new();
    let blend = parse_template(&std::fs::read_to_string(common::fixture_dir("templates").join("blend.tpl")).unwrap())
        .map_err(|e| e.to_string())?;
    let large = parse_template(&dense_base("blend8x4", 4, 8, &[">="], false).render()).map_err(|e| e.to_string())?;
    for (name, t) in [("blend.tpl", &blend), ("blend 8x4", &large)] {
        let r = sd_rate(&t.template, t.spec.as_ref().unwrap(), 200, 17, &opts).map_err(|e| e.to_string())?;
        ensure(r.samples == 200 && r.errors == 0 && r.rate == 1.0, || {
            format!("{name}: sd_rate {:.3} ({} errors)", r.rate, r.errors)
        })?;
        lines.push(format!("{name} sd_rate = {:.3}", r.rate));
    }
    for l in [10u32, 100] {
        let spec = ParameterSpec::parse(&format!("a ~ choice(1..{l})\nb ~ choice(1..{l})\n"), 0).map_err(|e| e.to_string())?;
        let draws = 10_000;
        let hits = (0..draws)
            .filter(|&d| {
                let cfg = sample_config(&spec, derive_seed(99, u64::from(l), d));
                cfg["a"] == cfg["b"]
            })
            .count();
        let p = 1.0 / f64::from(l);
        let rate = hits as f64 / draws as f64;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        ensure((rate - p).abs() <= 3.0 * se, || format!("l={l}: collision rate {rate:.4}, expected {p:.4} +- {:.4}", 3.0 * se))?;
        lines.push(format!("l={l} collisions {rate:.4} (1/l = {p:.4}, 3 SE = {:.4})", 3.0 * se));
    }
    Ok(lines.join(", "))
}

/// SD instance with about `size` nodes: four copies of a block whose rows
/// touch five block variables each, plus a few linking rows.
fn scaling_instance(size: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = 4;
    let half = size / (2 * k);
    let (bv, bc) = (half, half - 1);
    let n = k * bv;
    let mut rows = Vec::new();
    let offsets = [0, 1, 3, 7, 11];
    let block: Vec<Vec<(usize, i64)>> = (0..bc)
        .map(|c| offsets.iter().map(|o| ((c + o) % bv, rng.gen_range(1..=3))).collect())
        .collect();
    let block_rhs: Vec<i64> = (0..bc).map(|_| rng.gen_range(1..=4)).collect();
    for copy in 0..k {
        for (c, terms) in block.iter().enumerate() {
            rows.push(ConstraintRow::new(
                terms.iter().map(|&(j, a)| (copy * bv + j, int(a))),
                Sense::Le,
                int(block_rhs[c]),
            ));
        }
    }
    for l in 0..k {
        let j = rng.gen_range(0..bv);
        rows.push(ConstraintRow::new((0..k).map(|copy| (copy * bv + j, int(1))), Sense::Le, int(100 + l as i64)));
    }
    let objective = (0..n).map(|j| int((j % bv) as i64 % 50 + 1)).collect();
    Instance::new(ObjectiveSense::Minimize, objective, vec![VarKind::Continuous; n], rows)
}

fn timed_check(inst: &Instance, seed: u64) -> Result<Duration, String> {
    let copy = permuted(inst, seed);
    let start = Instant::now();
    let r = check_equivalence(inst, &copy, &CheckOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.verdict == Verdict::Equivalent && r.guaranteed, || {
        format!("size {}: verdict {}", inst.num_vars() + inst.num_constraints(), r.verdict)
    })?;
    Ok(elapsed)
}

fn runtime_scaling() -> Outcome {
    let base = scaling_instance(2000, 1);
    let nodes = base.num_vars() + base.num_constraints();
    let per_row = base.nnz() as f64 / base.num_constraints() as f64;
    let t2000 = timed_check(&base, 7)?;
    ensure(t2000 < Duration::from_secs(5), || format!("m+n={nodes}: {t2000:?}"))?;

    let sizes = [500usize, 1000, 2000, 4000];
    let mut points = Vec::new();
    for &s in &sizes {
        let inst = scaling_instance(s, 1);
        let mut runs: Vec<Duration> = (0..5).map(|r| timed_check(&inst, r)).collect::<Result<_, _>>()?;
        runs.sort();
        let x = (inst.num_vars() + inst.num_constraints()) as f64;
        points.push((x.ln(), runs[2].as_secs_f64().max(1e-6).ln()));
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / points.len() as f64;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let slope = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mean_x).powi(2)).sum::<f64>();
    ensure(slope <= 2.0, || format!("log-log slope {slope:.2}"))?;
    let times: Vec<String> = sizes.iter().zip(&points).map(|(s, p)| format!("{s}: {:.1} ms", p.1.exp() * 1e3)).collect();
    Ok(format!(
        "m+n={nodes} ({per_row:.1} nnz/row) in {:.1} ms; medians {}; slope {slope:.2}",
        t2000.as_secs_f64() * 1e3,
        times.join(", ")
    ))
}

fn parser_round_trip() -> Outcome {
    let files = common::lp_fixtures();
    ensure(files.len() >= 40, || format!("only {} fixtures", files.len()))?;
    for path in &files {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let first = parse_lp(&text).instance.ok_or_else(|| format!("{} does not parse", path.display()))?;
        let written = write_lp(&first).map_err(|e| e.to_string())?;
        let second = parse_lp(&written).instance.ok_or_else(|| format!("{}: rewrite does not parse", path.display()))?;
        ensure(instances_identical(&first, &second), || format!("{} changed on round trip", path.display()))?;
    }
    Ok(format!("{0}/{0} fixtures identical after parse, write, parse", files.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("permutation soundness", permutation_soundness),
        ("oracle agreement on small pairs", oracle_agreement),
        ("conservative counterexample", conservative_counterexample),
        ("bin-packing SD structure", bin_packing_structure),
        ("template consistency", consistency),
        ("sampling rates", sampling_rates),
        ("runtime scaling", runtime_scaling),
        ("parser round trip", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
