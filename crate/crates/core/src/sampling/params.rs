//! Parameter distributions, configurations and seeded sampling.
//!
//! Specification lines:
//!
//! ```text
//! cost ~ uniform(1, 10)        continuous, on a grid of step (hi - lo) / 2^64
//! size ~ choice(2, 3, 7/2)     discrete, uniform over the listed values
//! count ~ choice(1..100)       discrete, integers 1 through 100
//! capacity = 5                 fixed value
//! ```
//!
//! `#` and `\` start comments.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Largest number of values a `lo..hi` range may expand to.
const MAX_RANGE_LEN: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    /// Uniform on `lo + (hi - lo) * r / 2^64` for integer `0 <= r < 2^64`.
    Uniform { lo: Rational, hi: Rational },
    /// Uniform over distinct values.
    Discrete(Vec<Rational>),
}

impl Distribution {
    pub fn uniform(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::ParameterSpec(format!(
                "uniform bounds need lo < hi, got {} and {}",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Distribution::Uniform { lo, hi })
    }

    pub fn discrete(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ParameterSpec("choice needs at least one value".into()));
        }
        let distinct: BTreeSet<&Rational> = values.iter().collect();
        if distinct.len() != values.len() {
            return Err(Error::ParameterSpec("choice values must be distinct".into()));
        }
        Ok(Distribution::Discrete(values))
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> Rational {
        match self {
            Distribution::Uniform { lo, hi } => {
                let r = Rational::from_integer(BigInt::from(rng.next_u64()));
                let scale = Rational::from_integer(BigInt::from(1u128 << 64));
                lo + (hi - lo) * r / scale
            }
            Distribution::Discrete(values) => values[rng.gen_range(0..values.len())].clone(),
        }
    }
}

/// Distribution per parameter name.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParameterSpec {
    pub params: BTreeMap<String, Distribution>,
}

/// A value per parameter name.
pub type ParameterConfig = BTreeMap<String, Rational>;

fn strip_comment(line: &str) -> &str {
    let end = line.find(['#', '\\']).unwrap_or(line.len());
    line[..end].trim()
}

fn valid_param_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn located(line_no: usize, e: Error) -> Error {
    let msg = match e {
        Error::ParameterSpec(m) => m,
        other => other.to_string(),
    };
    Error::ParameterSpec(format!("line {line_no}: {msg}"))
}

fn parse_values(body: &str) -> Result<Vec<Rational>> {
    if let Some((lo, hi)) = body.split_once("..") {
        let (lo, hi) = (lo.trim().parse::<i64>(), hi.trim().parse::<i64>());
        let (Ok(lo), Ok(hi)) = (lo, hi) else {
            return Err(Error::ParameterSpec(format!("range `{body}` needs integer endpoints")));
        };
        if hi < lo || hi - lo >= MAX_RANGE_LEN {
            return Err(Error::ParameterSpec(format!("range `{body}` is empty or too long")));
        }
        return Ok((lo..=hi).map(|v| Rational::from_integer(v.into())).collect());
    }
    body.split(',').map(|v| parse_rational(v.trim())).collect()
}

fn call_args<'a>(text: &'a str, func: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(func)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')
}

impl ParameterSpec {
    /// Parses specification lines. `line_offset` shifts reported line numbers.
    pub fn parse(text: &str, line_offset: usize) -> Result<Self> {
        let mut params = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1 + line_offset;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (name, dist) = Self::parse_line(line).map_err(|e| located(line_no, e))?;
            if params.insert(name.clone(), dist).is_some() {
                return Err(located(line_no, Error::ParameterSpec(format!("parameter `{name}` declared twice"))));
            }
        }
        Ok(ParameterSpec { params })
    }

    fn parse_line(line: &str) -> Result<(String, Distribution)> {
        let (name, dist) = if let Some((name, rhs)) = line.split_once('~') {
            let rhs = rhs.trim();
            let dist = if let Some(args) = call_args(rhs, "uniform") {
                let parts: Vec<&str> = args.split(',').collect();
                let [lo, hi] = parts.as_slice() else {
                    return Err(Error::ParameterSpec(format!("uniform takes two bounds: `{rhs}`")));
                };
                Distribution::uniform(parse_rational(lo.trim())?, parse_rational(hi.trim())?)?
            } else if let Some(args) = call_args(rhs, "choice") {
                Distribution::discrete(parse_values(args)?)?
            } else {
                return Err(Error::ParameterSpec(format!("unknown distribution `{rhs}`")));
            };
            (name.trim(), dist)
        } else if let Some((name, value)) = line.split_once('=') {
            (name.trim(), Distribution::Discrete(vec![parse_rational(value.trim())?]))
        } else {
            return Err(Error::ParameterSpec(format!("expected `name ~ distribution` or `name = value`: `{line}`")));
        };
        if !valid_param_name(name) {
            return Err(Error::ParameterSpec(format!("invalid parameter name `{name}`")));
        }
        Ok((name.to_string(), dist))
    }

    pub fn names(&self) -> Vec<String> {
        self.params.keys().cloned().collect()
    }
}

/// Parses a data file of `name = value` lines into a configuration.
pub fn parse_config(text: &str) -> Result<ParameterConfig> {
    let mut cfg = ParameterConfig::new();
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let entry = match line.split_once('=') {
            Some((name, value)) if !line.contains('~') && valid_param_name(name.trim()) => {
                parse_rational(value.trim()).map(|v| (name.trim().to_string(), v))
            }
            _ => Err(Error::ParameterSpec(format!("expected `name = value`: `{line}`"))),
        };
        let (name, value) = entry.map_err(|e| located(k + 1, e))?;
        if cfg.insert(name.clone(), value).is_some() {
            return Err(located(k + 1, Error::ParameterSpec(format!("parameter `{name}` given twice"))));
        }
    }
    Ok(cfg)
}

/// Draws one value per parameter, in name order, from a ChaCha8 stream.
pub fn sample_config(spec: &ParameterSpec, seed: u64) -> ParameterConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spec.params.iter().map(|(name, dist)| (name.clone(), dist.sample(&mut rng))).collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the random stream for one (entry, round) of a run.
pub fn derive_seed(seed: u64, entry: u64, round: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ entry) ^ round)
}
