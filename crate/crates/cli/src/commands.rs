use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use milp_equiv::lp::parse_lp_bytes;
use milp_equiv::rational::format_rational;
use milp_equiv::sampling::{
    batch_evaluate, derive_seed, evaluate_consistency_with, load_spec, load_template, parse_config, sample_config,
    sd_rate, BatchOptions, Manifest, ParameterConfig, ParameterSpec,
};
use milp_equiv::{
    check_equivalence, describe_sd, encode, explain_report, find_isomorphism, run_wl, sd_of_instance, write_lp,
    CheckOptions, Error, Instance, JsonReport, OracleOptions, RefinementMode, Result,
};
use serde_json::{json, Value};

const ORACLE_BUDGET_VAR: &str = "MILPEQ_ORACLE_BUDGET";

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// Parses an LP file, echoing warnings to stderr.
fn load(path: &Path) -> Result<Instance> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    let doc = parse_lp_bytes(&bytes);
    for w in doc.warnings() {
        eprintln!("{}:{w}", path.display());
    }
    match doc.instance {
        Some(inst) => Ok(inst),
        None => {
            let errors: Vec<String> = doc.errors().map(|d| format!("{}:{d}", path.display())).collect();
            Err(Error::Parse(errors.join("\n")))
        }
    }
}

fn options(mode: RefinementMode) -> CheckOptions {
    CheckOptions { mode, ..CheckOptions::default() }
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

fn oracle_options() -> Result<OracleOptions> {
    let mut opts = OracleOptions::default();
    if let Ok(raw) = env::var(ORACLE_BUDGET_VAR) {
        opts.budget = raw
            .trim()
            .parse()
            .map_err(|_| Error::Precondition(format!("{ORACLE_BUDGET_VAR} must be a node count, got `{raw}`")))?;
    }
    Ok(opts)
}

pub fn check(reference: &Path, test: &Path, mode: RefinementMode, json: bool, oracle: bool) -> Result<u8> {
    let (a, b) = (load(reference)?, load(test)?);
    let report = check_equivalence(&a, &b, &options(mode))?;
    let equivalent = report.verdict.is_equivalent();

    let mut oracle_line = None;
    let mut oracle_json = Value::Null;
    if oracle {
        let (status, line) = match find_isomorphism(&a, &b, &oracle_options()?) {
            Ok(found) => {
                let iso = found.is_some();
                if iso != equivalent && (equivalent || report.guaranteed) {
                    return Err(Error::InternalAssertion(format!(
                        "oracle found the instances {}isomorphic, contradicting a guaranteed verdict",
                        if iso { "" } else { "non-" }
                    )));
                }
                let agreement = if iso == equivalent { "agrees" } else { "verdict is conservative" };
                let what = if iso { "isomorphic" } else { "not isomorphic" };
                (json!({"isomorphic": iso, "agrees": iso == equivalent}), format!("oracle: {what} ({agreement})"))
            }
            Err(Error::OracleBudgetExceeded(why)) => {
                (json!({"skipped": why.clone()}), format!("oracle: skipped ({why})"))
            }
            Err(e) => return Err(e),
        };
        oracle_json = status;
        oracle_line = Some(line);
    }

    if json {
        let json_report = JsonReport::from(&report);
        if oracle {
            print_json(&json!({"report": json_report, "oracle": oracle_json}));
        } else {
            print_json(&json_report);
        }
    } else {
        print!("{}", explain_report(&report));
        if let Some(line) = oracle_line {
            println!("{line}");
        }
    }
    Ok(if equivalent { 0 } else { 1 })
}

pub fn sd(path: &Path, mode: RefinementMode, json: bool) -> Result<u8> {
    let inst = load(path)?;
    let report = sd_of_instance(&inst, &options(mode))?;
    if json {
        print_json(&report);
    } else {
        println!("{}", describe_sd(&report));
        if let (Some(ca), Some(size)) = (&report.cluster_assignment, report.cluster_size) {
            if !ca.clusters.is_empty() {
                println!("clusters: {} of {size} nodes each", ca.clusters.len());
            }
            let unique: Vec<String> = ca.excluded.iter().map(ToString::to_string).collect();
            println!("uniquely colored: {}", if unique.is_empty() { "none".into() } else { unique.join(", ") });
        }
    }
    Ok(if report.is_sd { 0 } else { 1 })
}

pub fn wl(path: &Path, mode: RefinementMode, dump_colors: bool, rounds: bool) -> Result<u8> {
    let inst = load(path)?;
    let g = encode(&inst)?;
    let (coloring, _) = run_wl(&[&g], mode, None);
    if rounds {
        for (r, count) in coloring.trace.iter().enumerate() {
            println!("round {r}: {count} colors");
        }
    }
    let plural = if coloring.round == 1 { "" } else { "s" };
    println!("stable after {} refinement round{plural}, {} colors", coloring.round, coloring.num_colors);
    if dump_colors {
        print!("{}", coloring.graphs[0].dump());
    }
    Ok(0)
}

pub struct SampleArgs {
    pub template: PathBuf,
    pub other: Option<PathBuf>,
    pub configs: usize,
    pub seed: u64,
    pub sd_rate: Option<usize>,
    pub spec: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub mode: RefinementMode,
    pub json: bool,
}

fn describe_config(cfg: &ParameterConfig) -> String {
    let parts: Vec<String> = cfg.iter().map(|(k, v)| format!("{k} = {}", format_rational(v))).collect();
    parts.join(", ")
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

fn emit(out: Option<&Path>, file_name: &str, header: &str, inst: &Instance) -> Result<()> {
    let text = write_lp(inst)?;
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            let path = dir.join(file_name);
            fs::write(&path, format!("\\ {header}\n{text}")).map_err(|e| io_error(&path, e))
        }
        None => {
            println!("\\ {header}");
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sample(args: SampleArgs) -> Result<u8> {
    let file = load_template(&args.template)?;
    for w in &file.warnings {
        eprintln!("{}:{w}", args.template.display());
    }
    let other = args.other.as_deref().map(load_template).transpose()?;
    let spec = match &args.spec {
        Some(path) => load_spec(path)?,
        None => file
            .spec
            .clone()
            .or_else(|| other.as_ref().and_then(|o| o.spec.clone()))
            .unwrap_or_else(ParameterSpec::default),
    };
    let opts = options(args.mode);
    let name = stem(&args.template);

    if let Some(data) = &args.data {
        let text = fs::read_to_string(data).map_err(|e| io_error(data, e))?;
        let cfg = parse_config(&text).map_err(|e| Error::ParameterSpec(format!("{}: {e}", data.display())))?;
        let (inst, warnings) = file.template.instantiate(&cfg)?;
        warnings.iter().for_each(|w| eprintln!("warning: {w}"));
        emit(args.out.as_deref(), &format!("{name}.lp"), &describe_config(&cfg), &inst)?;
        return Ok(0);
    }

    if let Some(other) = other {
        let c = evaluate_consistency_with(&file.template, &other.template, &spec, args.configs, args.seed, 0, &opts)?;
        let all_equivalent = c.verdicts.iter().all(|v| v.is_equivalent());
        if args.json {
            let rounds: Vec<Value> = c
                .configs
                .iter()
                .zip(c.reports)
                .map(|(cfg, mut r)| {
                    r.elapsed_ms = None;
                    let values: serde_json::Map<String, Value> =
                        cfg.iter().map(|(k, v)| (k.clone(), Value::String(format_rational(v)))).collect();
                    json!({"config": values, "report": r})
                })
                .collect();
            print_json(&json!({
                "num_configs": c.num_configs,
                "verdicts": c.verdicts.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "consistent": c.consistent,
                "sd_count": c.sd_count,
                "rounds": rounds,
            }));
        } else {
            let mut text = String::new();
            for (r, v) in c.verdicts.iter().enumerate() {
                let _ = writeln!(text, "config {r}: {v}");
            }
            let _ = writeln!(
                text,
                "{}: {} configs, both SD in {}",
                if c.consistent { "consistent" } else { "inconsistent" },
                c.num_configs,
                c.sd_count
            );
            print!("{text}");
        }
        return Ok(if all_equivalent { 0 } else { 1 });
    }

    if let Some(n) = args.sd_rate {
        let r = sd_rate(&file.template, &spec, n, args.seed, &opts)?;
        if args.json {
            print_json(&r);
        } else {
            println!("sd_rate = {:.3} ({}/{} symmetric decomposable, {} instantiation errors)", r.rate, r.sd_count, r.samples, r.errors);
        }
        return Ok(0);
    }

    if spec.names() != file.template.parameter_names {
        return Err(Error::ParameterSpec(format!(
            "specification declares [{}] but the template uses [{}]",
            spec.names().join(", "),
            file.template.parameter_names.join(", ")
        )));
    }
    for r in 0..args.configs {
        let cfg = sample_config(&spec, derive_seed(args.seed, 0, r as u64));
        let (inst, warnings) = file.template.instantiate(&cfg)?;
        warnings.iter().for_each(|w| eprintln!("warning: config {r}: {w}"));
        let header = format!("config {r}: {}", describe_config(&cfg));
        emit(args.out.as_deref(), &format!("{name}_{r}.lp"), &header, &inst)?;
    }
    Ok(0)
}

pub fn batch(manifest: &Path, mode: RefinementMode, json: bool, jobs: usize, seed: u64) -> Result<u8> {
    let m = Manifest::load(manifest)?;
    let report = batch_evaluate(&m, &BatchOptions { check: options(mode), jobs, seed })?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.summary.errors == 0 { 0 } else { 2 })
}
