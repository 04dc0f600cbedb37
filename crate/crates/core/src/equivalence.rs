//! Instance equivalence: dimension and sense checks, joint WL refinement,
//! multiset comparison, then SD detection on both graphs.
//!
//! When both instances are symmetric decomposable the verdict is exact.
//! Otherwise a match of the color multisets is answered conservatively with
//! `NotEquivalent` and `guaranteed = false`.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{encode, BipartiteGraph, Side};
use crate::model::{ensure_valid, Instance, ObjectiveSense};
use crate::sd::{detect_symmetric_decomposable, SdFailureKind, SdReport, SeedOrder};
use crate::wl::{partition_violation, run_wl, ColorCountDiff, GraphColoring, RefinementMode, StablePartition};

/// Number of differing color counts kept in a report.
const DIFF_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    ColoringMismatch,
    TestNotSd,
    ReferenceNotSd,
    SenseMismatch,
    DimensionMismatch,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::ColoringMismatch => "coloring-mismatch",
            Reason::TestNotSd => "test-not-sd",
            Reason::ReferenceNotSd => "reference-not-sd",
            Reason::SenseMismatch => "sense-mismatch",
            Reason::DimensionMismatch => "dimension-mismatch",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Equivalent,
    NotEquivalent(Reason),
}

impl Verdict {
    pub fn is_equivalent(self) -> bool {
        self == Verdict::Equivalent
    }

    pub fn reason(self) -> Option<Reason> {
        match self {
            Verdict::Equivalent => None,
            Verdict::NotEquivalent(r) => Some(r),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Equivalent => "Equivalent",
            Verdict::NotEquivalent(_) => "NotEquivalent",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent => f.write_str("Equivalent"),
            Verdict::NotEquivalent(r) => write!(f, "NotEquivalent({})", r.as_str()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub mode: RefinementMode,
    /// Defaults to the combined node count of both graphs.
    pub max_rounds: Option<usize>,
    pub seed_order: SeedOrder,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// Both instances are symmetric decomposable, so the verdict is exact.
    pub guaranteed: bool,
    pub multisets_equal: bool,
    pub sd_reference: Option<SdReport>,
    pub sd_test: Option<SdReport>,
    pub wl_rounds: usize,
    pub elapsed: Duration,
    /// Up to five colors whose counts differ (left = reference).
    pub multiset_diff: Vec<ColorCountDiff>,
    pub mode: RefinementMode,
    /// `(n, m)` of reference and test.
    pub dims: [(usize, usize); 2],
    pub senses: [ObjectiveSense; 2],
}

/// SD detection on one graph of a joint coloring. A coloring that breaks
/// the stable-partition conditions is a bug in pairs mode and a plain
/// detection failure in weighted-sum mode.
pub fn sd_for_graph(
    g: &BipartiteGraph,
    gc: &GraphColoring,
    mode: RefinementMode,
    order: SeedOrder,
) -> Result<SdReport> {
    if let Some(violation) = partition_violation(g, gc) {
        return match mode {
            RefinementMode::Pairs => Err(Error::InternalAssertion(violation)),
            RefinementMode::WeightedSum => {
                Ok(SdReport::failed(SdFailureKind::PartitionNotStable, None, Vec::new(), violation))
            }
        };
    }
    detect_symmetric_decomposable(g, gc, &StablePartition::from_coloring(gc), order)
}

/// Refines one instance on its own and runs SD detection on it.
pub fn sd_of_instance(inst: &Instance, options: &CheckOptions) -> Result<SdReport> {
    ensure_valid(inst)?;
    let g = encode(inst)?;
    let (coloring, _) = run_wl(&[&g], options.mode, options.max_rounds);
    if !coloring.stable {
        return Err(Error::Precondition("refinement did not stabilize".into()));
    }
    sd_for_graph(&g, &coloring.graphs[0], options.mode, options.seed_order)
}

pub fn check_equivalence(reference: &Instance, test: &Instance, options: &CheckOptions) -> Result<EquivalenceReport> {
    let start = Instant::now();
    ensure_valid(reference)?;
    ensure_valid(test)?;
    let dims = [
        (reference.num_vars(), reference.num_constraints()),
        (test.num_vars(), test.num_constraints()),
    ];
    let senses = [reference.objective_sense, test.objective_sense];
    let mut report = EquivalenceReport {
        verdict: Verdict::Equivalent,
        guaranteed: false,
        multisets_equal: false,
        sd_reference: None,
        sd_test: None,
        wl_rounds: 0,
        elapsed: Duration::ZERO,
        multiset_diff: Vec::new(),
        mode: options.mode,
        dims,
        senses,
    };
    if dims[0] != dims[1] {
        report.verdict = Verdict::NotEquivalent(Reason::DimensionMismatch);
        report.elapsed = start.elapsed();
        return Ok(report);
    }
    if senses[0] != senses[1] {
        report.verdict = Verdict::NotEquivalent(Reason::SenseMismatch);
        report.elapsed = start.elapsed();
        return Ok(report);
    }

    let (gr, gt) = (encode(reference)?, encode(test)?);
    let (coloring, multisets) = run_wl(&[&gr, &gt], options.mode, options.max_rounds);
    if !coloring.stable {
        return Err(Error::Precondition(format!(
            "refinement did not stabilize within {} rounds",
            options.max_rounds.unwrap_or_default()
        )));
    }
    report.wl_rounds = coloring.round;
    report.multisets_equal = multisets[0] == multisets[1];
    report.multiset_diff = multisets[0].diff(&multisets[1]).into_iter().take(DIFF_LIMIT).collect();

    let sd_ref = sd_for_graph(&gr, &coloring.graphs[0], options.mode, options.seed_order)?;
    let sd_test = sd_for_graph(&gt, &coloring.graphs[1], options.mode, options.seed_order)?;
    report.guaranteed = sd_ref.is_sd && sd_test.is_sd;
    report.verdict = if !report.multisets_equal {
        Verdict::NotEquivalent(Reason::ColoringMismatch)
    } else if !sd_test.is_sd {
        Verdict::NotEquivalent(Reason::TestNotSd)
    } else if !sd_ref.is_sd {
        Verdict::NotEquivalent(Reason::ReferenceNotSd)
    } else {
        Verdict::Equivalent
    };
    report.sd_reference = Some(sd_ref);
    report.sd_test = Some(sd_test);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// One-line summary of an SD report.
pub fn describe_sd(sd: &SdReport) -> String {
    match (&sd.failure, sd.k) {
        (None, Some(0)) => "symmetric decomposable, k=0 (unfoldable)".into(),
        (None, Some(k)) => format!("symmetric decomposable, k={k}"),
        (Some(f), _) => {
            let witness: Vec<String> = f.witness.iter().map(ToString::to_string).collect();
            if witness.is_empty() {
                format!("not SD: {} ({})", f.kind.describe(), f.detail)
            } else {
                format!("not SD: {} (witness: {})", f.kind.describe(), witness.join(", "))
            }
        }
        (None, None) => "symmetric decomposable".into(),
    }
}

/// Human-readable summary naming the deciding branch.
pub fn explain_report(r: &EquivalenceReport) -> String {
    let mut out = String::new();
    let [(rn, rm), (tn, tm)] = r.dims;
    match r.verdict {
        Verdict::Equivalent => {
            out.push_str("Equivalent: guaranteed (both instances symmetric decomposable)\n");
        }
        Verdict::NotEquivalent(Reason::DimensionMismatch) => {
            let _ = writeln!(out, "Not equivalent: dimension mismatch (reference n={rn}, m={rm}; test n={tn}, m={tm})");
        }
        Verdict::NotEquivalent(Reason::SenseMismatch) => {
            let label = |s: ObjectiveSense| match s {
                ObjectiveSense::Minimize => "minimize",
                ObjectiveSense::Maximize => "maximize",
            };
            let _ = writeln!(
                out,
                "Not equivalent: objective sense mismatch (reference {}, test {})",
                label(r.senses[0]),
                label(r.senses[1])
            );
        }
        Verdict::NotEquivalent(Reason::ColoringMismatch) => {
            out.push_str("Not equivalent: stable color multisets differ\n");
            for d in &r.multiset_diff {
                let side = match d.side {
                    Side::Constraint => "constraint",
                    Side::Variable => "variable",
                };
                let _ = writeln!(out, "  {side} color {}: reference {}, test {}", d.color.0, d.left, d.right);
            }
        }
        Verdict::NotEquivalent(reason @ (Reason::TestNotSd | Reason::ReferenceNotSd)) => {
            let which = if reason == Reason::TestNotSd { "test" } else { "reference" };
            let _ = writeln!(
                out,
                "Not equivalent (not guaranteed): color multisets match but the {which} instance is not symmetric decomposable"
            );
        }
    }
    if let (Some(a), Some(b)) = (&r.sd_reference, &r.sd_test) {
        let _ = writeln!(out, "reference: {}", describe_sd(a));
        let _ = writeln!(out, "test: {}", describe_sd(b));
        let plural = if r.wl_rounds == 1 { "" } else { "s" };
        let _ = writeln!(out, "refinement: {} round{plural} ({} mode)", r.wl_rounds, r.mode.label());
    }
    out
}

/// Stable JSON shape of a report.
#[derive(Clone, Debug, Serialize)]
pub struct JsonReport {
    pub verdict: &'static str,
    pub reason: Option<&'static str>,
    pub guaranteed: bool,
    pub multisets_equal: bool,
    pub wl_rounds: usize,
    pub k_reference: Option<usize>,
    pub k_test: Option<usize>,
    pub sd_failure_reference: Option<&'static str>,
    pub sd_failure_test: Option<&'static str>,
    /// Absent in reports that must be byte-reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl From<&EquivalenceReport> for JsonReport {
    fn from(r: &EquivalenceReport) -> Self {
        let k = |sd: &Option<SdReport>| sd.as_ref().filter(|s| s.is_sd).and_then(|s| s.k);
        let failure = |sd: &Option<SdReport>| sd.as_ref().and_then(|s| s.failure.as_ref()).map(|f| f.kind.as_str());
        JsonReport {
            verdict: r.verdict.label(),
            reason: r.verdict.reason().map(Reason::as_str),
            guaranteed: r.guaranteed,
            multisets_equal: r.multisets_equal,
            wl_rounds: r.wl_rounds,
            k_reference: k(&r.sd_reference),
            k_test: k(&r.sd_test),
            sd_failure_reference: failure(&r.sd_reference),
            sd_failure_test: failure(&r.sd_test),
            elapsed_ms: Some((r.elapsed.as_secs_f64() * 1e6).round() / 1e3),
        }
    }
}
