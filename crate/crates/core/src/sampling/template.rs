//! Model templates: LP text with `${name}` placeholders in coefficient,
//! objective and right-hand-side positions, plus an optional parameter block.
//!
//! ```text
//! [parameters]
//! c1 ~ uniform(1, 10)
//! cap = 5
//! [model]
//! Minimize
//!  obj: ${c1} x + 2 y
//! Subject To
//!  c: x + y <= ${cap}
//! End
//! ```
//!
//! A file without section headers is a model with no parameter block; its
//! parameters are the ones it references.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lp::{parse_skeleton, ParseDiagnostic, Severity, Skeleton};
use crate::model::{ensure_valid, Instance};
use crate::rational::Rational;

use super::params::{ParameterConfig, ParameterSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelTemplate {
    pub skeleton: Skeleton,
    /// Sorted parameter names; each is referenced at least once.
    pub parameter_names: Vec<String>,
}

/// A parsed template file.
#[derive(Clone, Debug)]
pub struct TemplateFile {
    pub template: ModelTemplate,
    pub spec: Option<ParameterSpec>,
    pub warnings: Vec<ParseDiagnostic>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    Parameters,
    Model,
}

fn header(line: &str) -> Option<Block> {
    match line.trim().to_ascii_lowercase().as_str() {
        "[parameters]" => Some(Block::Parameters),
        "[model]" => Some(Block::Model),
        _ => None,
    }
}

fn diagnostics_error(diags: &[ParseDiagnostic]) -> Error {
    let lines: Vec<String> = diags.iter().filter(|d| d.severity == Severity::Error).map(ToString::to_string).collect();
    Error::Template(lines.join("; "))
}

impl ModelTemplate {
    /// Wraps a skeleton, declaring exactly the parameters it references.
    pub fn from_skeleton(skeleton: Skeleton) -> Self {
        let parameter_names = skeleton.referenced_params();
        ModelTemplate { skeleton, parameter_names }
    }

    /// Substitutes `cfg` into every slot. Zero coefficients are dropped and
    /// returned as warnings.
    pub fn instantiate(&self, cfg: &ParameterConfig) -> Result<(Instance, Vec<String>)> {
        if let Some(name) = self.parameter_names.iter().find(|n| !cfg.contains_key(*n)) {
            return Err(Error::MissingParameter(name.clone()));
        }
        if let Some(extra) = cfg.keys().find(|k| self.parameter_names.binary_search(k).is_err()) {
            return Err(Error::ParameterSpec(format!("configuration sets unknown parameter `{extra}`")));
        }
        let (inst, warnings) = self.skeleton.instantiate(cfg)?;
        ensure_valid(&inst).map_err(|e| Error::InvalidAfterSubstitution(e.to_string()))?;
        Ok((inst, warnings))
    }
}

pub fn parse_template(text: &str) -> Result<TemplateFile> {
    let mut blocks: Vec<(Block, usize, String)> = Vec::new();
    let mut preamble = true;
    for (k, line) in text.lines().enumerate() {
        if let Some(block) = header(line) {
            if blocks.iter().any(|(b, _, _)| *b == block) {
                return Err(Error::Template(format!("line {}: section repeated", k + 1)));
            }
            blocks.push((block, k + 1, String::new()));
            preamble = false;
        } else if let Some((_, _, body)) = blocks.last_mut() {
            body.push_str(line);
            body.push('\n');
        } else if preamble && !line.trim().is_empty() && !line.trim_start().starts_with(['#', '\\']) {
            // no headers at all: the whole file is the model
            blocks.clear();
            break;
        }
    }

    let (model_text, model_offset, spec) = if blocks.is_empty() {
        (text.to_string(), 0, None)
    } else {
        let model = blocks
            .iter()
            .find(|(b, _, _)| *b == Block::Model)
            .ok_or_else(|| Error::Template("missing [model] section".into()))?;
        let spec = match blocks.iter().find(|(b, _, _)| *b == Block::Parameters) {
            Some((_, offset, body)) => Some(ParameterSpec::parse(body, *offset)?),
            None => None,
        };
        (model.2.clone(), model.1, spec)
    };

    let (skeleton, diags) = parse_skeleton(&model_text, true, model_offset);
    let Some(skeleton) = skeleton else {
        return Err(diagnostics_error(&diags));
    };
    let template = ModelTemplate::from_skeleton(skeleton);
    if let Some(spec) = &spec {
        let declared = spec.names();
        if let Some(unused) = declared.iter().find(|n| template.parameter_names.binary_search(n).is_err()) {
            return Err(Error::Template(format!("parameter `{unused}` is declared but never used")));
        }
        if let Some(undeclared) = template.parameter_names.iter().find(|n| !spec.params.contains_key(*n)) {
            return Err(Error::Template(format!("parameter `{undeclared}` is used but not declared")));
        }
    }
    let warnings = diags.into_iter().filter(|d| d.severity == Severity::Warning).collect();
    Ok(TemplateFile { template, spec, warnings })
}

pub fn load_template(path: &Path) -> Result<TemplateFile> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_template(&text).map_err(|e| match e {
        Error::Template(msg) => Error::Template(format!("{}: {msg}", path.display())),
        Error::ParameterSpec(msg) => Error::ParameterSpec(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Reads a specification file: parameter lines, optionally under a
/// `[parameters]` header.
pub fn load_spec(path: &Path) -> Result<ParameterSpec> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let body: String = text.lines().map(|l| if header(l) == Some(Block::Parameters) { "" } else { l }).collect::<Vec<_>>().join("\n");
    ParameterSpec::parse(&body, 0).map_err(|e| Error::ParameterSpec(format!("{}: {e}", path.display())))
}

/// Instantiates with values given as exact rationals by name.
pub fn instantiate_with(t: &ModelTemplate, values: &[(&str, Rational)]) -> Result<Instance> {
    let cfg: BTreeMap<String, Rational> = values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    t.instantiate(&cfg).map(|(inst, _)| inst)
}
