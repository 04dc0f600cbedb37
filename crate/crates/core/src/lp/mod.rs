//! Reading and writing instances in LP text format.
//!
//! Supported sections: `Minimize`/`Maximize`, `Subject To`, `Bounds`,
//! `General`/`Integers`, `Binary`, `End`. Keywords are case-insensitive.
//! Bounds become constraint rows; a variable without a lower bound entry
//! gets the implicit row `x >= 0` unless declared `free`.

mod lexer;
mod parser;
mod skeleton;
mod writer;

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Instance;

pub use crate::rational::parse_rational;
pub use skeleton::{Affine, Skeleton, SkeletonRow};
pub use writer::write_lp;

pub(crate) use parser::parse_skeleton;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub severity: Severity,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {label}: {}", self.line, self.column, self.message)
    }
}

/// Result of parsing one LP document.
#[derive(Clone, Debug)]
pub struct LpDocument {
    /// Present iff no diagnostic has error severity.
    pub instance: Option<Instance>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl LpDocument {
    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics.iter().filter(|d| d.severity == Severity::Warning)
    }
}

pub fn parse_lp(text: &str) -> LpDocument {
    let (skeleton, mut diagnostics) = parse_skeleton(text, false, 0);
    let instance = skeleton.map(|s| {
        let (inst, warnings) = s.instantiate(&Default::default()).expect("literal skeleton instantiates");
        debug_assert!(warnings.is_empty());
        inst
    });
    diagnostics.sort_by_key(|d| (d.line, d.column));
    LpDocument { instance, diagnostics }
}

/// Like [`parse_lp`] but accepts raw bytes, reporting the location of the
/// first byte that is not ASCII.
pub fn parse_lp_bytes(bytes: &[u8]) -> LpDocument {
    if let Some(pos) = bytes.iter().position(|b| !b.is_ascii()) {
        let line = 1 + bytes[..pos].iter().filter(|&&b| b == b'\n').count();
        let line_start = bytes[..pos].iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        return LpDocument {
            instance: None,
            diagnostics: vec![ParseDiagnostic {
                line,
                column: pos - line_start + 1,
                severity: Severity::Error,
                message: format!("non-ASCII byte 0x{:02x}", bytes[pos]),
            }],
        };
    }
    parse_lp(std::str::from_utf8(bytes).expect("ASCII is valid UTF-8"))
}

/// Reads and parses an LP file. Parse errors are joined into one
/// [`Error::Parse`] prefixed with the path.
pub fn load_lp(path: &Path) -> Result<Instance> {
    let bytes = fs::read(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    let doc = parse_lp_bytes(&bytes);
    match doc.instance {
        Some(inst) => Ok(inst),
        None => {
            let errors: Vec<String> = doc.errors().map(|d| format!("{}:{d}", path.display())).collect();
            Err(Error::Parse(errors.join("\n")))
        }
    }
}
