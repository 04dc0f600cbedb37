//! Structural equivalence checking for LP and MILP instances.
//!
//! Instances are encoded as weighted bipartite graphs, colored jointly by
//! Weisfeiler-Lehman refinement, and compared by color multiset. When both
//! instances are symmetric decomposable, equal multisets imply that one
//! instance is a variable and row permutation of the other, so the verdict
//! is exact. Otherwise the checker answers `NotEquivalent` without a
//! guarantee.
//!
//! ```
//! use milp_equiv::{check_equivalence, parse_lp, CheckOptions};
//!
//! let a = parse_lp("min\n x + 2 y\nst\n c: x + y >= 1\nend").instance.unwrap();
//! let b = parse_lp("min\n 2 y + x\nst\n d: y + x >= 1\nend").instance.unwrap();
//! let report = check_equivalence(&a, &b, &CheckOptions::default()).unwrap();
//! assert!(report.verdict.is_equivalent() && report.guaranteed);
//! ```

pub mod equivalence;
pub mod error;
pub mod graph;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rational;
pub mod sampling;
pub mod sd;
pub mod wl;

pub use equivalence::{
    check_equivalence, describe_sd, explain_report, sd_of_instance, CheckOptions, EquivalenceReport, JsonReport, Reason, Verdict,
};
pub use error::{Error, Result};
pub use graph::{decode, encode, BipartiteGraph, NodeId, Side};
pub use lp::{load_lp, parse_lp, write_lp, LpDocument};
pub use model::{
    apply_permutation, instances_identical, random_permutation, validate_instance, ConstraintRow, Instance,
    ObjectiveSense, Permutation, Sense, VarKind,
};
pub use oracle::{brute_force_isomorphic, find_isomorphism, OracleOptions};
pub use rational::Rational;
pub use sd::{detect_symmetric_decomposable, SdReport, SeedOrder};
pub use wl::{run_wl, RefinementMode};
