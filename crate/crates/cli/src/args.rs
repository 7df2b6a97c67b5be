//! Command-line surface. Parsing only; validation of values that clap cannot
//! express (grid bounds, list lengths) happens in [`crate::config`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cfree", version, about = "c-free probability toolkit: partitions, cumulants, convolutions and limit laws")]
pub struct Cli {
    /// Output format for tables and reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Non-crossing partition counts, listings and block statistics.
    Nc {
        #[command(subcommand)]
        action: NcAction,
    },
    /// Moment/cumulant transforms.
    Cumulants(CumulantArgs),
    /// Convolution of two pairs (or two single measures).
    Convolve(ConvolveArgs),
    /// Central-limit scaling of a centered pair against the Gaussian limit.
    Clt(CltArgs),
    /// Poisson prelimit pair against the Poisson limit moments.
    PoissonLimit(PoissonLimitArgs),
    /// Density grid and atoms of a limit law.
    Density(DensityArgs),
    /// Generating-function coefficients, optionally a Cauchy transform value.
    Transforms(TransformArgs),
    /// Run invariant checks and report pass/fail per check.
    Verify {
        #[arg(value_enum, default_value_t = VerifyGroup::All)]
        group: VerifyGroup,
    },
}

#[derive(Debug, Subcommand)]
pub enum NcAction {
    /// |NC(n)| and, for even n, the number of pair partitions.
    Count {
        #[arg(long)]
        n: usize,
    },
    /// List partitions in canonical order with outer/inner block counts.
    Enum {
        #[arg(long)]
        n: usize,
        /// Only pair partitions.
        #[arg(long)]
        pairs: bool,
    },
    /// Tables of inner-pair counts, block counts and outer/inner counts.
    Stats {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CumulantKind {
    Free,
    Cfree,
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Moments to cumulants.
    To,
    /// Cumulants to moments.
    From,
}

#[derive(Debug, Args)]
pub struct CumulantArgs {
    #[arg(long, value_enum)]
    pub kind: CumulantKind,
    #[arg(long, value_enum, default_value_t = Direction::To)]
    pub direction: Direction,
    /// Comma-separated rationals: moments m_1.. (direction to) or cumulants
    /// k_1.. (direction from). For cfree this is the mu side.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
    /// nu-moments m_1.., required for cfree.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Truncate the input to this order.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long, value_enum, default_value_t = CumulantKind::Cfree)]
    pub kind: CumulantKind,
    #[arg(long, allow_hyphen_values = true)]
    pub mu1: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu2: String,
    #[arg(long, allow_hyphen_values = true)]
    pub nu2: Option<String>,
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CltArgs {
    /// mu-moments m_1.. of a centered measure.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: String,
    /// nu-moments m_1.. of a centered measure.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long, default_value_t = 64)]
    pub copies: u64,
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PoissonLimitArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value_t = 64)]
    pub copies: u64,
    #[arg(long, default_value_t = 6)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gaussian,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityMethod {
    ClosedForm,
    Inversion,
}

#[derive(Debug, Args)]
pub struct LawParams {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// alpha squared, for exact boundary cases (Gaussian only).
    #[arg(long, conflicts_with = "alpha")]
    pub alpha_sq: Option<String>,
    /// beta squared (Gaussian only).
    #[arg(long, conflicts_with = "beta")]
    pub beta_sq: Option<String>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub law: LawParams,
    /// lo:hi:points
    #[arg(long, allow_hyphen_values = true, default_value = "-3:3:601")]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = DensityMethod::ClosedForm)]
    pub method: DensityMethod,
    /// Distance above the axis for inversion.
    #[arg(long, default_value_t = 1e-4)]
    pub eps: f64,
    /// Invert a continued fraction of this depth instead of the closed-form
    /// transform. A truncated fraction is a discrete measure, so `--eps` must
    /// exceed its atom spacing (roughly support width / depth) to give a density.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Atom sidecar path; defaults to the output path with extension `atoms.json`.
    #[arg(long)]
    pub atoms_out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Limit law whose exact moments feed the series.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// Explicit mu-moments m_1.. (instead of a family).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long, default_value_t = 8)]
    pub order: usize,
    /// Evaluate G at `re,im` (family only): closed form and continued fraction.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long, default_value_t = cfree_core::series::DEFAULT_CF_DEPTH)]
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum VerifyGroup {
    All,
    Partitions,
    Cumulants,
    Oracle,
    Series,
    Laws,
    Limits,
}
