use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod run;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_501;

#[derive(Parser, Debug)]
#[command(name = "permstab", version, about = "Stability of permutation solutions: testers, defects and expansion constants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GuardArgs {
    /// Cap on explored nodes in homomorphism and cocycle searches.
    #[arg(long = "guard-search", default_value_t = permstab::stability::DEFAULT_GUARD)]
    pub search: u64,
    /// Cap on fiber alignments in exact edit distance.
    #[arg(long = "guard-edit", default_value_t = permstab::graph::DEFAULT_EDIT_GUARD)]
    pub edit: u128,
    /// Fail with exit code 2 instead of returning a flagged heuristic bound.
    #[arg(long = "no-heuristic")]
    pub no_heuristic: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ObjectArgs {
    /// hom | cocycle | cover | cover-dm | matrix
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub input: PathBuf,
    /// Complex the covering lives over (cover kinds only).
    #[arg(long)]
    pub complex: Option<PathBuf>,
    /// Weights file with `mu2` (polygons, relators or matrix rows).
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum DefectMode {
    /// Exact rejection probability of the tester.
    Local(ObjectArgs),
    /// Bounded search for the nearest genuine solution.
    Global {
        #[command(flatten)]
        object: ObjectArgs,
        /// Largest target degree (default: input degree + 2).
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        guards: GuardArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that files parse and satisfy their structural invariants.
    Validate {
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
    },
    /// Local or global defects.
    Defect {
        #[command(subcommand)]
        mode: DefectMode,
    },
    /// Seeded Monte Carlo run of a tester.
    Test {
        #[command(flatten)]
        object: ObjectArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Check every constraint on each trial.
        #[arg(long)]
        linf: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Translate between cochains, coverings, presentations and complexes.
    Convert {
        /// cover | cochain | complex | presentation | images
        #[arg(long)]
        to: String,
        #[arg(long)]
        input: PathBuf,
        /// Spanning-tree file for complex → presentation.
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Complex a covering lives over, for cover → cochain.
        #[arg(long)]
        complex: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Classical, cocycle or coboundary Cheeger constants.
    Cheeger {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "cocycle")]
        variant: String,
        #[arg(long, default_value_t = 0)]
        dim: u8,
        #[arg(long = "coeff-cap", default_value_t = 2)]
        coeff_cap: usize,
        /// Largest target degree for 1-dimensional distances.
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        guards: GuardArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Normalized spectral gap of a regular graph.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Whether every 1-cocycle is a coboundary, for each degree up to a cap.
    H1check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        ncap: usize,
        #[arg(long = "guard-search", default_value_t = permstab::stability::DEFAULT_GUARD)]
        guard: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Edge distribution induced by a polygon distribution.
    Weights {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Local defect against global-defect bound for corrupted solutions.
    Profile {
        /// Presentation or complex file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Comma-separated corruption levels.
        #[arg(long, default_value = "0,0.05,0.1,0.2")]
        grid: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        guards: GuardArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check the cochain/covering/presentation defect identities on an instance.
    Equiv {
        /// Images file or 1-cochain file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[command(flatten)]
        guards: GuardArgs,
    },
    /// Write instance files for a standard family.
    Generate {
        /// bouquet | cycle | complete-graph | complete-complex | petersen | torus | triangle | cut | random | blr
        #[arg(long)]
        family: String,
        /// Cycle length, cochain degree or BLR dimension.
        #[arg(long)]
        n: Option<usize>,
        /// Complete complex size.
        #[arg(long)]
        d: Option<usize>,
        /// Number of bouquet loops.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Bouquet relator as comma-separated signed loop ids; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        relator: Vec<String>,
        /// Target local defect for the random family.
        #[arg(long, default_value_t = 0.2)]
        target: f64,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = e.chain().any(|c| matches!(c.downcast_ref(), Some(permstab::Error::GuardExceeded(_))));
            ExitCode::from(if guard { 2 } else { 1 })
        }
    }
}
