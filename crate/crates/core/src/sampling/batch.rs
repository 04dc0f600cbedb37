//! Batch evaluation over a manifest of instance or template pairs.
//!
//! A manifest is JSON Lines, one entry per line, or a single JSON array.
//! Blank lines and lines starting with `#` are skipped.
//!
//! ```text
//! {"id": "p1", "reference": "a.lp", "test": "b.lp"}
//! {"id": "t1", "reference": "a.tpl", "test": "b.tpl", "template": true, "K": 5}
//! {"id": "t2", "reference": "a.tpl", "test": "b.tpl", "template": true, "spec": "theta.spec"}
//! ```
//!
//! Relative paths are resolved against the manifest's directory. Template
//! entries take their parameters from `spec` or else from the reference
//! template's `[parameters]` block.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::{check_equivalence, CheckOptions, JsonReport};
use crate::error::{Error, Result};
use crate::lp::load_lp;

use super::harness::{evaluate_consistency_with, DEFAULT_CONFIGS};
use super::template::{load_spec, load_template};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub reference: PathBuf,
    pub test: PathBuf,
    #[serde(default)]
    pub template: bool,
    #[serde(default)]
    pub spec: Option<PathBuf>,
    #[serde(default, rename = "K")]
    pub k: Option<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    /// Directory that relative entry paths are resolved against.
    pub base: PathBuf,
}

#[derive(Clone, Copy, Debug)]
pub struct BatchOptions {
    pub check: CheckOptions,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    pub seed: u64,
}

impl Default for BatchOptions {
    fn default() -> Self {
        BatchOptions { check: CheckOptions::default(), jobs: 1, seed: 0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencySummary {
    pub num_configs: usize,
    pub verdicts: Vec<String>,
    pub consistent: bool,
    pub sd_count: usize,
    pub rounds: Vec<JsonReport>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EntryOutcome {
    Check(JsonReport),
    Consistency(ConsistencySummary),
    Error { message: String },
}

impl EntryOutcome {
    /// `Some(true)` for an equivalent verdict, `None` for an entry error.
    /// A consistency entry counts as equivalent when every round is.
    pub fn equivalent(&self) -> Option<bool> {
        match self {
            EntryOutcome::Check(r) => Some(r.verdict == "Equivalent"),
            EntryOutcome::Consistency(c) => Some(c.verdicts.iter().all(|v| v == "Equivalent")),
            EntryOutcome::Error { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub index: usize,
    pub id: String,
    #[serde(flatten)]
    pub outcome: EntryOutcome,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub entries: usize,
    pub decided: usize,
    pub equivalent: usize,
    pub errors: usize,
    /// `equivalent / decided`; null when nothing was decided.
    pub accuracy: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub results: Vec<EntryResult>,
    pub summary: BatchSummary,
}

impl Manifest {
    pub fn parse(text: &str, base: impl Into<PathBuf>) -> Result<Self> {
        let base = base.into();
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            let entries = serde_json::from_str(trimmed).map_err(|e| Error::Manifest(e.to_string()))?;
            return Ok(Manifest { entries, base });
        }
        let mut entries = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let entry = serde_json::from_str(line).map_err(|e| Error::Manifest(format!("line {}: {e}", k + 1)))?;
            entries.push(entry);
        }
        Ok(Manifest { entries, base })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Manifest::parse(&text, base)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }
}

fn evaluate_entry(manifest: &Manifest, index: usize, options: &BatchOptions) -> Result<EntryOutcome> {
    let entry = &manifest.entries[index];
    let (reference, test) = (manifest.resolve(&entry.reference), manifest.resolve(&entry.test));
    if !entry.template {
        if entry.spec.is_some() || entry.k.is_some() {
            return Err(Error::Manifest("`spec` and `K` apply only to template entries".into()));
        }
        let report = check_equivalence(&load_lp(&reference)?, &load_lp(&test)?, &options.check)?;
        let mut json = JsonReport::from(&report);
        json.elapsed_ms = None;
        return Ok(EntryOutcome::Check(json));
    }
    let t_ref = load_template(&reference)?;
    let t_test = load_template(&test)?;
    let spec = match (&entry.spec, t_ref.spec) {
        (Some(path), _) => load_spec(&manifest.resolve(path))?,
        (None, Some(spec)) => spec,
        (None, None) => match t_test.spec {
            Some(spec) => spec,
            None => return Err(Error::Manifest("template entry has no parameter specification".into())),
        },
    };
    let k = entry.k.unwrap_or(DEFAULT_CONFIGS);
    let c = evaluate_consistency_with(
        &t_ref.template,
        &t_test.template,
        &spec,
        k,
        options.seed,
        index as u64,
        &options.check,
    )?;
    let rounds = c
        .reports
        .into_iter()
        .map(|mut r| {
            r.elapsed_ms = None;
            r
        })
        .collect();
    Ok(EntryOutcome::Consistency(ConsistencySummary {
        num_configs: c.num_configs,
        verdicts: c.verdicts.iter().map(ToString::to_string).collect(),
        consistent: c.consistent,
        sd_count: c.sd_count,
        rounds,
    }))
}

/// Evaluates every entry, in parallel when `jobs != 1`. Results keep
/// manifest order and carry no timing, so the report does not depend on
/// the worker count.
pub fn batch_evaluate(manifest: &Manifest, options: &BatchOptions) -> Result<BatchReport> {
    let run = |index: usize| {
        let outcome = evaluate_entry(manifest, index, options)
            .unwrap_or_else(|e| EntryOutcome::Error { message: e.to_string() });
        EntryResult { index, id: manifest.entries[index].id.clone(), outcome }
    };
    let results: Vec<EntryResult> = if options.jobs == 1 {
        (0..manifest.entries.len()).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..manifest.entries.len()).into_par_iter().map(run).collect())
    };
    let decided = results.iter().filter(|r| r.outcome.equivalent().is_some()).count();
    let equivalent = results.iter().filter(|r| r.outcome.equivalent() == Some(true)).count();
    let summary = BatchSummary {
        entries: results.len(),
        decided,
        equivalent,
        errors: results.len() - decided,
        accuracy: (decided > 0).then(|| equivalent as f64 / decided as f64),
    };
    Ok(BatchReport { results, summary })
}

impl BatchReport {
    /// Per-entry table followed by the accuracy line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.results.is_empty() {
            out.push_str("0 entries\n");
            return out;
        }
        for r in &self.results {
            let detail = match &r.outcome {
                EntryOutcome::Check(j) => match j.reason {
                    Some(reason) => format!("{}({reason})", j.verdict),
                    None if j.guaranteed => format!("{} (guaranteed)", j.verdict),
                    None => j.verdict.to_string(),
                },
                EntryOutcome::Consistency(c) => format!(
                    "{} over {} configs: {}",
                    if c.consistent { "consistent" } else { "inconsistent" },
                    c.num_configs,
                    c.verdicts.join(", ")
                ),
                EntryOutcome::Error { message } => format!("error: {message}"),
            };
            let _ = writeln!(out, "{:>4}  {:<16} {detail}", r.index, r.id);
        }
        let s = &self.summary;
        match s.accuracy {
            Some(acc) => {
                let _ = writeln!(out, "accuracy: {:.1}% ({}/{} pairs equivalent)", acc * 100.0, s.equivalent, s.decided);
            }
            None => out.push_str("accuracy: undefined (no decided entries)\n"),
        }
        if s.errors > 0 {
            let _ = writeln!(out, "{} entries failed", s.errors);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
