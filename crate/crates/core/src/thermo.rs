//! Partition function, free energy, particle density and density matrix from
//! the optimized first-order amplitude.
//!
//! ```text
//! Z = ∫ exp(W⁽¹⁾(x, x, β; ω*(x))) dx,   F = −ln Z / β,   ρ(x) = exp(W⁽¹⁾)/Z
//! ```
//!
//! The trial frequency is optimized independently at every quadrature node,
//! so the integrand is a pure function of `x` and results do not depend on
//! the evaluation order or the degree of parallelism.

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::observables::{linspace, DensityMatrixEntry, DensityProfile, FreeEnergyResult, Method};
use crate::oep::{amplitude_imag_with, GapOptions};
use crate::params::{EuclideanPoint, OscillatorParams};
use crate::quadrature::{integrate_panels, QuadOptions};

/// Tail criterion: the integrand at the cutoff must be below this fraction of
/// its peak.
pub const TAIL_FRACTION: f64 = 1e-12;
pub const DEFAULT_DENSITY_POINTS: usize = 201;
const MAX_DOUBLINGS: usize = 12;
const PEAK_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoOptions {
    pub quad: QuadOptions,
    pub gap: GapOptions,
    /// Number of equal panels the half-line `[0, X]` is split into.
    pub panels: usize,
    pub exec: Execution,
}

impl Default for ThermoOptions {
    fn default() -> Self {
        ThermoOptions {
            quad: QuadOptions::with_tol(1e-14, 1e-11),
            gap: GapOptions::default(),
            panels: 16,
            exec: Execution::default(),
        }
    }
}

impl ThermoOptions {
    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}

/// Result of an even-integrand quadrature `∫_{−X}^{X} f`, stored relative to
/// a reference exponent to avoid overflow: `Z = exp(shift) · scaled`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFunction {
    pub scaled: f64,
    pub shift: f64,
    /// Absolute quadrature error on `scaled`.
    pub scaled_error: f64,
    /// Integration cutoff `X`.
    pub cutoff: f64,
}

impl PartitionFunction {
    pub fn value(&self) -> f64 {
        self.scaled * self.shift.exp()
    }

    pub fn ln_value(&self) -> f64 {
        self.scaled.ln() + self.shift
    }

    /// Absolute error of `Z`.
    pub fn error(&self) -> f64 {
        self.scaled_error * self.shift.exp()
    }

    pub fn relative_error(&self) -> f64 {
        self.scaled_error / self.scaled
    }

    /// `(F, error of F)`.
    pub fn free_energy(&self, beta: f64) -> (f64, f64) {
        (-self.ln_value() / beta, self.relative_error() / beta)
    }
}

/// Initial cutoff `3·max(1, (1/(βλ))^(1/4), 1/√(β·max(m², 1)))`.
pub fn initial_cutoff(params: &OscillatorParams, beta: f64) -> f64 {
    let mut x: f64 = 1.0;
    if params.lambda > 0.0 {
        x = x.max((1.0 / (beta * params.lambda)).powf(0.25));
    }
    x = x.max(1.0 / (beta * params.m2.max(1.0)).sqrt());
    3.0 * x
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "beta must be > 0, got {beta}"
        )))
    }
}

/// Collects the first failure raised inside a quadrature integrand.
struct FailureSlot(Mutex<Option<(f64, Error)>>);

impl FailureSlot {
    fn new() -> Self {
        FailureSlot(Mutex::new(None))
    }

    fn record(&self, x: f64, e: Error) {
        let mut slot = self.0.lock().unwrap_or_else(|p| p.into_inner());
        // keep the smallest |x| so the report does not depend on scheduling
        if slot.as_ref().is_none_or(|(y, _)| x.abs() < y.abs()) {
            *slot = Some((x, e));
        }
    }

    fn take(self) -> Option<Error> {
        let slot = self.0.into_inner().unwrap_or_else(|p| p.into_inner());
        slot.map(|(x, e)| Error::OptimizerAt {
            x,
            source: Box::new(e),
        })
    }
}

/// Log-integrand wrapper shared by the OEP and FK partition functions:
/// integrates `exp(log_f(x))` over the real line for an even `log_f`.
pub(crate) fn integrate_even_exp<L>(
    log_f: L,
    start_cutoff: f64,
    opts: &ThermoOptions,
) -> Result<PartitionFunction>
where
    L: Fn(f64) -> Result<f64> + Sync + Send,
{
    let mut cutoff = start_cutoff;
    let mut doublings = 0;
    let (shift, tail_ok) = loop {
        let xs = linspace(0.0, cutoff, PEAK_SAMPLES + 1);
        let logs: Result<Vec<f64>> = opts
            .exec
            .map(&xs, |&x| {
                log_f(x).map_err(|e| Error::OptimizerAt {
                    x,
                    source: Box::new(e),
                })
            })
            .into_iter()
            .collect();
        let logs = logs?;
        let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::NonFinite("partition-function integrand"));
        }
        let edge = logs[logs.len() - 1];
        if edge - peak < TAIL_FRACTION.ln() {
            break (peak, true);
        }
        if doublings == MAX_DOUBLINGS {
            break (peak, false);
        }
        cutoff *= 2.0;
        doublings += 1;
    };
    if !tail_ok {
        return Err(Error::Truncation {
            bound: TAIL_FRACTION,
            limit: cutoff,
        });
    }

    let failure = FailureSlot::new();
    let integrand = |x: f64| match log_f(x) {
        Ok(l) => (l - shift).exp(),
        Err(e) => {
            failure.record(x, e);
            f64::NAN
        }
    };
    let result = integrate_panels(integrand, 0.0, cutoff, opts.panels, &opts.quad, opts.exec);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let half = result?;
    Ok(PartitionFunction {
        scaled: 2.0 * half.value,
        shift,
        scaled_error: 2.0 * half.error,
        cutoff,
    })
}

/// Optimized diagonal `W⁽¹⁾(x, x, β)`.
fn diagonal_w(params: &OscillatorParams, beta: f64, x: f64, gap: &GapOptions) -> Result<f64> {
    let p = EuclideanPoint::diagonal(x, beta)?;
    Ok(amplitude_imag_with(params, &p, gap)?.w_value)
}

pub fn partition_function_oep(
    params: &OscillatorParams,
    beta: f64,
    opts: &ThermoOptions,
) -> Result<PartitionFunction> {
    check_beta(beta)?;
    integrate_even_exp(
        |x| diagonal_w(params, beta, x, &opts.gap),
        initial_cutoff(params, beta),
        opts,
    )
}

pub fn free_energy_oep(
    params: &OscillatorParams,
    beta: f64,
    opts: &ThermoOptions,
) -> Result<FreeEnergyResult> {
    let z = partition_function_oep(params, beta, opts)?;
    let (f, err) = z.free_energy(beta);
    let omega_diag = crate::oep::optimize_omega_imag_with(
        params,
        &EuclideanPoint::diagonal(0.0, beta)?,
        &opts.gap,
    )?
    .omega_star;
    Ok(FreeEnergyResult {
        beta,
        f,
        method: Method::Oep,
        omega_diag,
        error_estimate: err,
    })
}

/// Default density grid: `DEFAULT_DENSITY_POINTS` uniform points over
/// `[−X, X]` with `X` the partition-function cutoff.
pub fn default_density_grid(z: &PartitionFunction) -> Vec<f64> {
    linspace(-z.cutoff, z.cutoff, DEFAULT_DENSITY_POINTS)
}

/// OEP density on `grid` (or the default grid when `None`).
pub fn density_oep(
    params: &OscillatorParams,
    beta: f64,
    grid: Option<&[f64]>,
    opts: &ThermoOptions,
) -> Result<DensityProfile> {
    let z = partition_function_oep(params, beta, opts)?;
    let grid = match grid {
        Some(g) => g.to_vec(),
        None => default_density_grid(&z),
    };
    density_with_partition(params, beta, &z, &grid, opts)
}

/// OEP density normalized by an already computed partition function.
pub fn density_with_partition(
    params: &OscillatorParams,
    beta: f64,
    z: &PartitionFunction,
    grid: &[f64],
    opts: &ThermoOptions,
) -> Result<DensityProfile> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "density grid must be strictly increasing".into(),
        ));
    }
    let ln_z = z.ln_value();
    let rho: Result<Vec<f64>> = opts
        .exec
        .map(grid, |&x| {
            diagonal_w(params, beta, x, &opts.gap)
                .map(|w| (w - ln_z).exp())
                .map_err(|e| Error::OptimizerAt {
                    x,
                    source: Box::new(e),
                })
        })
        .into_iter()
        .collect();
    Ok(DensityProfile::new(grid.to_vec(), rho?, beta))
}

/// Density-matrix entries for a list of endpoint pairs sharing one `Z`.
pub fn density_matrix_oep(
    params: &OscillatorParams,
    beta: f64,
    pairs: &[(f64, f64)],
    opts: &ThermoOptions,
) -> Result<Vec<DensityMatrixEntry>> {
    let z = partition_function_oep(params, beta, opts)?;
    density_matrix_with_partition(params, beta, &z, pairs, opts)
}

pub fn density_matrix_with_partition(
    params: &OscillatorParams,
    beta: f64,
    z: &PartitionFunction,
    pairs: &[(f64, f64)],
    opts: &ThermoOptions,
) -> Result<Vec<DensityMatrixEntry>> {
    let ln_z = z.ln_value();
    opts.exec
        .map(pairs, |&(x_a, x_b)| {
            let p = EuclideanPoint::new(x_a, x_b, beta)?;
            let w = amplitude_imag_with(params, &p, &opts.gap)
                .map_err(|e| Error::OptimizerAt {
                    x: x_a,
                    source: Box::new(e),
                })?
                .w_value;
            Ok(DensityMatrixEntry {
                x_a,
                x_b,
                value: (w - ln_z).exp(),
                beta,
            })
        })
        .into_iter()
        .collect()
}
