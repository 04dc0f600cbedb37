//! Model-level evaluation: SD rates over sampled instantiations and verdict
//! consistency between two templates under shared configurations.

use serde::Serialize;

use crate::equivalence::{check_equivalence, sd_of_instance, CheckOptions, JsonReport, Verdict};
use crate::error::{Error, Result};

use super::params::{derive_seed, sample_config, ParameterConfig, ParameterSpec};
use super::template::ModelTemplate;

/// Number of configurations per consistency run when none is given.
pub const DEFAULT_CONFIGS: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SdRateReport {
    pub samples: usize,
    pub sd_count: usize,
    /// Instantiations that failed, e.g. a row whose coefficients all drew zero.
    pub errors: usize,
    /// `sd_count / samples`.
    pub rate: f64,
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub num_configs: usize,
    pub verdicts: Vec<Verdict>,
    pub consistent: bool,
    /// Rounds in which both instances were symmetric decomposable.
    pub sd_count: usize,
    pub configs: Vec<ParameterConfig>,
    pub reports: Vec<JsonReport>,
}

fn check_spec(t: &ModelTemplate, spec: &ParameterSpec) -> Result<()> {
    if spec.names() != t.parameter_names {
        return Err(Error::ParameterSpec(format!(
            "specification declares [{}] but the template uses [{}]",
            spec.names().join(", "),
            t.parameter_names.join(", ")
        )));
    }
    Ok(())
}

/// Fraction of `n` sampled instantiations of `t` that are symmetric
/// decomposable. Sample `i` draws from `derive_seed(seed, 0, i)`.
pub fn sd_rate(t: &ModelTemplate, spec: &ParameterSpec, n: usize, seed: u64, options: &CheckOptions) -> Result<SdRateReport> {
    if n == 0 {
        return Err(Error::Precondition("sd_rate needs at least one sample".into()));
    }
    check_spec(t, spec)?;
    let (mut sd_count, mut errors) = (0, 0);
    for i in 0..n {
        let cfg = sample_config(spec, derive_seed(seed, 0, i as u64));
        match t.instantiate(&cfg) {
            Ok((inst, _)) => {
                if sd_of_instance(&inst, options)?.is_sd {
                    sd_count += 1;
                }
            }
            Err(Error::InvalidAfterSubstitution(_) | Error::InvalidInstance(_)) => errors += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SdRateReport { samples: n, sd_count, errors, rate: sd_count as f64 / n as f64 })
}

/// Checks `t_ref` against `t_test` on `k` sampled configurations, feeding the
/// same configuration to both templates in every round.
pub fn evaluate_consistency(
    t_ref: &ModelTemplate,
    t_test: &ModelTemplate,
    spec: &ParameterSpec,
    k: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    evaluate_consistency_with(t_ref, t_test, spec, k, seed, 0, &CheckOptions::default())
}

/// [`evaluate_consistency`] for batch entry `entry`: round `r` draws from
/// `derive_seed(seed, entry, r)`.
pub fn evaluate_consistency_with(
    t_ref: &ModelTemplate,
    t_test: &ModelTemplate,
    spec: &ParameterSpec,
    k: usize,
    seed: u64,
    entry: u64,
    options: &CheckOptions,
) -> Result<ConsistencyReport> {
    if t_ref.parameter_names != t_test.parameter_names {
        return Err(Error::ParameterSpec(format!(
            "templates use different parameters: [{}] vs [{}]",
            t_ref.parameter_names.join(", "),
            t_test.parameter_names.join(", ")
        )));
    }
    check_spec(t_ref, spec)?;
    let mut report = ConsistencyReport {
        num_configs: k,
        verdicts: Vec::with_capacity(k),
        consistent: true,
        sd_count: 0,
        configs: Vec::with_capacity(k),
        reports: Vec::with_capacity(k),
    };
    for round in 0..k {
        let cfg = sample_config(spec, derive_seed(seed, entry, round as u64));
        let (reference, _) = t_ref.instantiate(&cfg)?;
        let (test, _) = t_test.instantiate(&cfg)?;
        let r = check_equivalence(&reference, &test, options)?;
        if r.guaranteed {
            report.sd_count += 1;
        }
        report.verdicts.push(r.verdict);
        report.reports.push(JsonReport::from(&r));
        report.configs.push(cfg);
    }
    report.consistent = report.verdicts.windows(2).all(|w| w[0] == w[1]);
    Ok(report)
}
