use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Optimized-expansion approximations for the anharmonic oscillator
/// `V = m²x²/2 + λx⁴`, with an exact spectral reference.
#[derive(Parser, Debug)]
#[command(name = "oep", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Free energy versus inverse temperature (CSV: beta,method,F,omega_diag,err_est,error).
    FreeEnergy(CommonArgs),
    /// Particle density at one inverse temperature (CSV: x,method,rho).
    Density(CommonArgs),
    /// Density matrix on the product of the position grid with itself (CSV: x_a,x_b,method,rho).
    DensityMatrix(CommonArgs),
    /// Optimized first-order amplitude at one endpoint pair (key=value lines).
    Propagator(PropagatorArgs),
    /// Energy levels of the exact spectral reference (CSV: n,energy).
    ExactSpectrum(CommonArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Harmonic coefficient m² (may be negative for a double well).
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Option<f64>,

    /// Quartic coupling λ ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,

    /// Inverse temperature(s): a value, a comma list, `start:stop:count` or `log:start:stop:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,

    /// Position grid, same syntax as --beta.
    #[arg(long = "x-grid", allow_hyphen_values = true)]
    pub x_grid: Option<String>,

    /// Comma-separated subset of OEP,OEF,FK,EXACT.
    #[arg(long)]
    pub methods: Option<String>,

    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// key=value file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Relative bracket width of the trial-frequency root search.
    #[arg(long = "tol-root")]
    pub tol_root: Option<f64>,

    /// Relative tolerance of the partition-function quadrature.
    #[arg(long = "tol-quad")]
    pub tol_quad: Option<f64>,

    /// Oscillator basis size of the exact reference.
    #[arg(long = "basis-size")]
    pub basis_size: Option<usize>,

    /// Oscillator basis frequency of the exact reference.
    #[arg(long = "basis-omega")]
    pub basis_omega: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PropagatorArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long = "x-a", allow_hyphen_values = true)]
    pub x_a: Option<f64>,

    #[arg(long = "x-b", allow_hyphen_values = true)]
    pub x_b: Option<f64>,

    /// Propagation time; in imag mode this is β (falls back to --beta).
    #[arg(long, allow_hyphen_values = true)]
    pub time: Option<f64>,

    /// `imag` (Euclidean) or `real`.
    #[arg(long)]
    pub mode: Option<String>,

    /// Use this trial frequency instead of optimizing it.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
}
