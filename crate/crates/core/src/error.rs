use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("caustic: |sin(omega*T)| = {sin_abs:.3e} below tolerance (omega*T = {omega_t})")]
    Caustic { omega_t: f64, sin_abs: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error(
        "quadrature did not converge: estimated error {error_estimate:.3e} > target {target:.3e}"
    )]
    QuadratureNonConvergence { error_estimate: f64, target: f64 },

    #[error("no stationary point of the trial-frequency condition in [{lo}, {hi}]")]
    NoStationaryPoint { lo: f64, hi: f64 },

    #[error("root solver did not converge: {0}")]
    SolverNonConvergence(String),

    #[error("optimizer failed at x = {x}: {source}")]
    OptimizerAt {
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("spectral sum truncated: exp(-beta*(E_max - E_0)) = {bound:.3e} exceeds {limit:.0e}; raise the basis size or beta")]
    Truncation { bound: f64, limit: f64 },

    #[error("Hermite recurrence out of range at x = {x} (basis frequency {omega})")]
    RecurrenceRange { x: f64, omega: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable name used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Caustic { .. } => "Caustic",
            Error::NonFinite(_) => "NonFinite",
            Error::QuadratureNonConvergence { .. } => "QuadratureNonConvergence",
            Error::NoStationaryPoint { .. } => "NoStationaryPoint",
            Error::SolverNonConvergence(_) => "SolverNonConvergence",
            Error::OptimizerAt { .. } => "OptimizerFailure",
            Error::EigenNonConvergence { .. } => "EigenNonConvergence",
            Error::Truncation { .. } => "TruncationError",
            Error::RecurrenceRange { .. } => "RecurrenceRange",
        }
    }
}
