use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed numeric literal {0:?}")]
    MalformedLiteral(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid instance: {}", summarize(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A stable coloring failed the stable-partition conditions. In the
    /// default refinement mode this means a refinement bug.
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),

    #[error("oracle budget exceeded: {0}")]
    OracleBudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("template error: {0}")]
    Template(String),

    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),

    #[error("invalid parameter specification: {0}")]
    ParameterSpec(String),

    #[error("instance invalid after substitution: {0}")]
    InvalidAfterSubstitution(String),

    #[error("manifest error: {0}")]
    Manifest(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn summarize(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
    let mut text = shown.join("; ");
    if violations.len() > 3 {
        text.push_str(&format!(" (+{} more)", violations.len() - 3));
    }
    text
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
