use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cohent", version, about = "Coherence and entanglement monotones, conversions, and concurrence bounds")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct Global {
    /// Seed for every randomized search or sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Overrides both the validation tolerance (1e-9) and the solver tolerance (1e-6).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Random restarts for convex-roof searches.
    #[arg(long, global = true, default_value_t = 32)]
    pub restarts: usize,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

impl Global {
    pub fn validation_tol(&self) -> f64 {
        self.tol.unwrap_or(1e-9)
    }

    pub fn solver_tol(&self) -> f64 {
        self.tol.unwrap_or(1e-6)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a monotone, by closed form on pure states or convex roof on mixed ones.
    Measure(MeasureArgs),
    /// Decide, bound, or synthesize a conversion between pure states.
    Transform(TransformArgs),
    /// Certified lower bound on the generalized concurrence.
    Certify(CertifyArgs),
    /// Sweep a closed-form family and compare against the solvers.
    Family(FamilyArgs),
    /// Run the randomized invariant suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    pub state: PathBuf,
    /// shannon, geom, gc, gc:<d>, renyi:<alpha>, or tail:<m>.
    #[arg(long = "f", default_value = "shannon")]
    pub functional: String,
    #[arg(long, value_enum, default_value_t = MeasureKind::Coherence)]
    pub kind: MeasureKind,
    /// Ensemble size for the roof search; defaults to rank².
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    /// Coordinate-descent sweeps per restart.
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureKind {
    Coherence,
    Entanglement,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    pub source: PathBuf,
    pub target: PathBuf,
    /// Build incoherent Kraus operators for a feasible conversion.
    #[arg(long)]
    pub synthesize: bool,
    /// Report the optimal (or bounding) success probability.
    #[arg(long)]
    pub prob: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub state: PathBuf,
    #[arg(long, value_enum, default_value_t = CertifyMeasure::Auto)]
    pub measure: CertifyMeasure,
    /// Also run the convex-roof search and compare it with the bound.
    #[arg(long)]
    pub roof: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertifyMeasure {
    /// Entanglement for square bipartite files, coherence otherwise.
    Auto,
    Cgc,
    Egc,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub d: usize,
    /// `start:stop:steps`, inclusive of both ends. Defaults to the full parameter range in 11 steps.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Symmetric,
    Isotropic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Random cases per suite.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Subsample the suites and skip the convex-roof checks.
    #[arg(long)]
    pub quick: bool,
    /// State files that must be rejected; the validation suite names the invariant each one breaks.
    #[arg(long = "fixture")]
    pub fixtures: Vec<PathBuf>,
}
