//! Parameterized templates, random configurations and model-level
//! evaluation.

pub mod batch;
pub mod harness;
pub mod params;
pub mod template;

pub use batch::{batch_evaluate, BatchOptions, BatchReport, EntryOutcome, Manifest, ManifestEntry};
pub use harness::{
    evaluate_consistency, evaluate_consistency_with, sd_rate, ConsistencyReport, SdRateReport, DEFAULT_CONFIGS,
};
pub use params::{derive_seed, parse_config, sample_config, Distribution, ParameterConfig, ParameterSpec};
pub use template::{instantiate_with, load_spec, load_template, parse_template, ModelTemplate, TemplateFile};
