//! `milpeq`: structural equivalence checks for LP/MILP files.
//!
//! Exit codes: 0 equivalent or success, 1 not equivalent, 2 usage or input
//! error, 3 internal assertion.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use milp_equiv::{Error, RefinementMode};

#[derive(Parser)]
#[command(name = "milpeq", version, about = "Structural equivalence checks for LP/MILP instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Neighbor color and weight pairs (collision-free).
    Pairs,
    /// Weighted sums of neighbor colors.
    Sum,
}

impl From<Mode> for RefinementMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Pairs => RefinementMode::Pairs,
            Mode::Sum => RefinementMode::WeightedSum,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare two LP files.
    Check {
        reference: PathBuf,
        test: PathBuf,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: Mode,
        #[arg(long)]
        json: bool,
        /// Also search for an explicit isomorphism on small instances.
        #[arg(long)]
        oracle: bool,
    },
    /// Test one LP file for symmetric decomposability.
    Sd {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Run color refinement on one LP file.
    Wl {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: Mode,
        /// Print the stable color of every node.
        #[arg(long)]
        dump_colors: bool,
        /// Print the color count after every round.
        #[arg(long)]
        rounds: bool,
    },
    /// Instantiate templates with sampled or pinned parameters.
    Sample {
        template: PathBuf,
        /// Second template: run a consistency check against the first.
        other: Option<PathBuf>,
        #[arg(long, default_value_t = milp_equiv::sampling::DEFAULT_CONFIGS)]
        configs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report the SD rate over this many samples instead.
        #[arg(long, value_name = "N")]
        sd_rate: Option<usize>,
        /// Parameter specification, overriding the template's own block.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Data file of `name = value` lines pinning every parameter.
        #[arg(long, conflicts_with_all = ["sd_rate", "other"])]
        data: Option<PathBuf>,
        /// Write instances to this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate every pair listed in a manifest.
    Batch {
        manifest: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "pairs")]
        mode: Mode,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = match &cli.command {
        Command::Check { mode, .. }
        | Command::Sd { mode, .. }
        | Command::Wl { mode, .. }
        | Command::Sample { mode, .. }
        | Command::Batch { mode, .. } => RefinementMode::from(*mode),
    };
    if mode == RefinementMode::WeightedSum {
        eprintln!("note: sum mode assumes weighted neighbor sums never collide; pairs mode has no such assumption");
    }
    let result = match cli.command {
        Command::Check { reference, test, json, oracle, .. } => commands::check(&reference, &test, mode, json, oracle),
        Command::Sd { path, json, .. } => commands::sd(&path, mode, json),
        Command::Wl { path, dump_colors, rounds, .. } => commands::wl(&path, mode, dump_colors, rounds),
        Command::Sample { template, other, configs, seed, sd_rate, spec, data, out, json, .. } => {
            commands::sample(commands::SampleArgs {
                template,
                other,
                configs,
                seed,
                sd_rate,
                spec,
                data,
                out,
                mode,
                json,
            })
        }
        Command::Batch { manifest, json, jobs, seed, .. } => commands::batch(&manifest, mode, json, jobs, seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InternalAssertion(_) => 3,
                _ => 2,
            })
        }
    }
}
