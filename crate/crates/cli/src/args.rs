use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gfd_core::basis::DEFAULT_DEPTH;
use gfd_core::tolerance::{CONDITION_WARN, CONVERGENCE_ABS, INDEPENDENCE_REL, ORTHOGONALITY_ABS};
use gfd_core::{Method, Pruning, Tolerances};

/// Generic frequency decomposition of periodic signals over non-orthogonal
/// basis pairs.
#[derive(Debug, Parser)]
#[command(name = "gfd", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Independence, convergence, orthogonality and frame bounds of a basis.
    CheckBasis(CheckBasisArgs),
    /// Decompose a signal CSV into a decomposition JSON.
    Analyze(AnalyzeArgs),
    /// Sample a decomposition JSON back into a signal CSV.
    Reconstruct(ReconstructArgs),
    /// Generalized spectrum `k,energy` of a decomposition JSON.
    Spectrum(SpectrumArgs),
    /// Keep a band of frequencies of a decomposition JSON.
    Filter(FilterArgs),
    /// Direct versus indirect coefficients at one or more orders.
    Compare(CompareArgs),
    /// Classical Fourier coefficients `k,a,b` of a signal CSV.
    Fourier(FourierArgs),
}

/// Where the basis comes from: a builtin name, a basis JSON file, or a
/// schedule JSON file.
#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// Builtin name (sine_cosine, square_saw, square, sawtooth, triangle,
    /// trapezoid) or path to a basis JSON file.
    #[arg(long, default_value = "square_saw", conflicts_with = "schedule")]
    pub basis: String,
    /// Phase of S in turns; builtins only.
    #[arg(long, allow_hyphen_values = true)]
    pub phase_s: Option<f64>,
    /// Phase of R in turns; builtins only.
    #[arg(long, allow_hyphen_values = true)]
    pub phase_r: Option<f64>,
    /// Harmonic depth of builtin generators.
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Multiband schedule JSON; replaces `--basis`.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    /// Relative margin for the independence check.
    #[arg(long, default_value_t = INDEPENDENCE_REL)]
    pub tol_independence: f64,
    /// Smallest eigenvalue that counts as positive in the convergence check.
    #[arg(long, default_value_t = CONVERGENCE_ABS)]
    pub tol_convergence: f64,
    /// Inner products below this count as zero when classifying orthogonality.
    #[arg(long, default_value_t = ORTHOGONALITY_ABS)]
    pub tol_orthogonality: f64,
    /// Condition number above which a direct solve is reported as ill-conditioned.
    #[arg(long, default_value_t = CONDITION_WARN)]
    pub condition_warn: f64,
}

impl ToleranceArgs {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            independence_rel: self.tol_independence,
            convergence: self.tol_convergence,
            orthogonality: self.tol_orthogonality,
            condition_warn: self.condition_warn,
            ..Tolerances::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct CheckBasisArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Order used for the orthogonality scan and the frame bounds.
    #[arg(long, default_value_t = 40)]
    pub order: usize,
    /// Also write the report as JSON.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Signal CSV (`x,value`).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Decomposition JSON; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    pub order: usize,
    #[arg(long, default_value_t = Method::Indirect)]
    pub method: Method,
    /// Gram entry pruning for the direct method.
    #[arg(long, default_value_t = Pruning::Paper)]
    pub pruning: Pruning,
    /// Residual harmonics above this amplitude count as noise.
    #[arg(long, default_value_t = 1e-6)]
    pub noise_tol: f64,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Decomposition JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Signal CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Decomposition JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Spectrum CSV (`k,energy`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Components are truncated at harmonic `samples / 2 - 1`.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
    /// Also write totals (`total`, `c0_sq`, `parseval_lhs`) as JSON.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Decomposition JSON.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Filtered decomposition JSON; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub keep_from: usize,
    #[arg(long)]
    pub keep_to: usize,
    /// Also write the filtered reconstruction as a signal CSV.
    #[arg(long)]
    pub csv_out: Option<PathBuf>,
    /// Sample count of `--csv-out`.
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Signal CSV (`x,value`).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Comparison CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Orders to compare, comma separated.
    #[arg(long = "order", value_delimiter = ',', default_value = "40")]
    pub orders: Vec<usize>,
    #[arg(long, default_value_t = Pruning::Paper)]
    pub pruning: Pruning,
    #[command(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Debug, Args)]
pub struct FourierArgs {
    /// Signal CSV (`x,value`).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Spectrum CSV (`k,a,b`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Highest harmonic; defaults to `n / 2 - 1`.
    #[arg(long)]
    pub order: Option<usize>,
}
