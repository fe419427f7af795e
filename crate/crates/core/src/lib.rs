//! First-order optimized expansion (OE) of the propagation amplitude in the
//! anharmonic potential `m²x²/2 + λx⁴`.
//!
//! * [`kernels`]: harmonic amplitudes and the closed-form kernel integrals.
//! * [`oep`]: the first-order amplitude `W⁽¹⁾` and its trial-frequency
//!   optimization.
//! * [`thermo`]: partition function, free energy, density and density matrix.
//! * [`oef`], [`fk`]: free-energy comparators (optimized free-energy series
//!   and the Feynman–Kleinert effective classical potential).
//! * [`oracle`]: exact spectral reference from diagonalizing `H` in a
//!   harmonic-oscillator basis.

pub mod eigen;
pub mod error;
pub mod exec;
pub mod fk;
pub mod kernels;
pub mod observables;
pub mod oef;
pub mod oep;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod scalar;
pub mod stationary;
pub mod thermo;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::{EuclideanPoint, OscillatorParams, RealTimePoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use observables::{DensityMatrixEntry, DensityProfile, FreeEnergyResult, Method};
