use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "frac-hirota",
    version,
    about = "Fractional derivatives, fractional Hirota operators and tau-function solitons",
    args_override_self = true
)]
pub struct Cli {
    /// Flat `key = value` file; keys are long flag names, flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral fractional derivative of a test function, optionally against Marchaud quadrature.
    Deriv(DerivArgs),
    /// Fractional (or classical) Hirota bilinear operator of two test functions.
    Bilinear(BilinearArgs),
    /// KdV one- or two-soliton: tau-function, field and residuals.
    Soliton(SolitonArgs),
    /// KP one-soliton tau-function and its symbolic residual.
    Kp(KpArgs),
    /// Full verification battery.
    Suite(SuiteArgs),
    /// H^(s-1) distance of the fractional to the classical bilinear derivative.
    LimitCheck(LimitArgs),
    /// Empirical ratio behind the fractional product bound.
    SobolevProbe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    /// Symbol (ik)^alpha, differences f(x) - f(x - y).
    Backward,
    /// Symbol (-ik)^alpha, differences f(x) - f(x + y).
    Forward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Commutator,
    Kernel,
    Symbol,
    Classical,
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Split point y0 between the singular and the regular part.
    #[arg(long)]
    pub split: Option<f64>,
    #[arg(long)]
    pub inner_nodes: Option<usize>,
    #[arg(long)]
    pub tail_nodes: Option<usize>,
    #[arg(long)]
    pub panel_width: Option<f64>,
    /// Tail truncation for handles without decay information.
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Target of the embedded quadrature error estimate.
    #[arg(long)]
    pub quad_tol: Option<f64>,
    /// `gauss-jacobi` or `log:<u_min>`.
    #[arg(long)]
    pub inner_rule: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DerivArgs {
    #[arg(long)]
    pub alpha: f64,
    /// gaussian[:c] | sech[:c] | x-gaussian | mode:k | from-csv
    #[arg(long, default_value = "gaussian", allow_hyphen_values = true)]
    pub func: String,
    /// Half-length of the box [-L, L).
    #[arg(long = "L")]
    pub half_length: Option<f64>,
    /// Grid points (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples for `--func from-csv`: columns x, re[, im] with a header row.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Treat the samples as periodic instead of requiring edge decay.
    #[arg(long)]
    pub periodic: bool,
    /// Also evaluate the Marchaud quadrature (alpha < 1).
    #[arg(long)]
    pub compare_marchaud: bool,
    #[arg(long, value_enum, default_value = "backward")]
    pub direction: DirectionArg,
    /// Report the H^s norms of f and of its derivative.
    #[arg(long)]
    pub sobolev: Option<f64>,
    /// Exit 3 when the quadrature misses its tolerance.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BilinearArgs {
    /// Order of the fractional operator; not used by the classical form.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "gaussian", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value = "x-gaussian", allow_hyphen_values = true)]
    pub g: String,
    #[arg(long = "L")]
    pub half_length: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "commutator")]
    pub form: FormArg,
    /// Order of the classical Hirota derivative.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Also report skew-symmetry and diagonal vanishing of the commutator.
    #[arg(long)]
    pub identities: bool,
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolitonArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Wavenumbers, one or two; repeat the flag.
    #[arg(long, required = true, allow_negative_numbers = true)]
    pub k: Vec<f64>,
    /// Phase offsets, one per wavenumber (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Vec<f64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long = "L", default_value_t = 30.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub tmin: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub tmax: f64,
    #[arg(long, default_value_t = 5)]
    pub nt: usize,
    /// Also evaluate D_t^alpha u + u_xxx + 6 u u_x on the grid.
    #[arg(long)]
    pub pde_residual: bool,
    /// Measure the asymptotic phase shifts of a two-soliton.
    #[arg(long)]
    pub phase_shifts: bool,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct KpArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ell: f64,
    /// Sign of the D_y^2 term, +1 or -1.
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub sign: i32,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    /// Extra per-alpha identity rows, `start:stop:step`.
    #[arg(long)]
    pub alpha_sweep: Option<String>,
    /// Write the machine-readable report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Random pairs for the bilinear identities.
    #[arg(long, default_value_t = 50)]
    pub pairs: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    #[arg(long, default_value = "gaussian", allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, default_value = "x-gaussian", allow_hyphen_values = true)]
    pub g: String,
    #[arg(long = "L")]
    pub half_length: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,
    /// Orders to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.9, 0.99, 0.999, 1.0])]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long = "L", default_value_t = 20.0)]
    pub half_length: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Width of the Gaussian spectral envelope of the random family.
    #[arg(long, default_value_t = 4.0)]
    pub envelope: f64,
    /// Use g = f in every trial.
    #[arg(long)]
    pub diagonal: bool,
    /// Single-mode pairs `n1:n2`, comma separated, instead of the random family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub modes: Vec<String>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}
