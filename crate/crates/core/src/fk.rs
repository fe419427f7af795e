//! First-order Feynman–Kleinert effective classical potential.
//!
//! Paths are split into their mean `x₀` and fluctuations around it; the
//! fluctuations are replaced by a trial oscillator of frequency `Ω(x₀)`:
//!
//! ```text
//! W₁(x₀) = (1/β) ln[sinh(βΩ/2)/(βΩ/2)] − Ω²a²/2 + V_a²(x₀)
//! a²     = (1/(βΩ²)) [(βΩ/2) coth(βΩ/2) − 1]
//! V_a²   = m²(x₀² + a²)/2 + λ(x₀⁴ + 6x₀²a² + 3a⁴)
//! Ω²     = m² + 12λ(x₀² + a²)                 (stationarity in Ω²)
//! Z      = ∫ dx₀ / √(2πβ) · exp(−β W₁(x₀))
//! ```
//!
//! Everything depends on `Ω` only through `s = (βΩ/2)²`, so a negative `Ω²`
//! (possible in the double well) continues analytically to `sin`/`cot` as
//! long as `|s| < π²`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::observables::{FreeEnergyResult, Method};
use crate::params::OscillatorParams;
use crate::thermo::{initial_cutoff, integrate_even_exp, ThermoOptions};

const SERIES_RADIUS: f64 = 1e-2;

/// `(u coth u − 1)/u²` as a function of `s = u²`.
fn smearing_reduced(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        1.0 / 3.0 - s / 45.0 + 2.0 * s * s / 945.0 - s * s * s / 4725.0 + 2.0 * s.powi(4) / 93555.0
    } else if s > 0.0 {
        let u = s.sqrt();
        // coth u = (1 + e^{−2u}) / (1 − e^{−2u})
        let e = (-2.0 * u).exp();
        (u * (1.0 + e) / (-(-2.0 * u).exp_m1()) - 1.0) / s
    } else {
        let v = (-s).sqrt();
        (1.0 - v / v.tan()) / (-s)
    }
}

/// `ln(sinh u / u)` as a function of `s = u²`.
fn ln_sinhc(s: f64) -> f64 {
    if s.abs() < SERIES_RADIUS {
        s / 6.0 - s * s / 180.0 + s * s * s / 2835.0 - s.powi(4) / 37800.0
    } else if s > 0.0 {
        let u = s.sqrt();
        u + (-(-2.0 * u).exp_m1()).ln() - 2f64.ln() - u.ln()
    } else {
        let v = (-s).sqrt();
        (v.sin() / v).ln()
    }
}

/// Fluctuation width `a²(Ω², β)`. Requires `βΩ/2 > −π²` in the squared sense.
pub fn smearing_width(omega2: f64, beta: f64) -> Result<f64> {
    let s = 0.25 * beta * beta * omega2;
    if s <= -PI * PI {
        return Err(Error::InvalidParameter(format!(
            "trial frequency squared {omega2} below the continuation limit"
        )));
    }
    Ok(0.25 * beta * smearing_reduced(s))
}

/// Optimized `(W₁(x₀), Ω²(x₀))`.
pub fn effective_potential(params: &OscillatorParams, beta: f64, x0: f64) -> Result<(f64, f64)> {
    let (m2, lambda) = (params.m2, params.lambda);
    let base = m2 + 12.0 * lambda * x0 * x0;
    let omega2 = if lambda == 0.0 {
        m2
    } else {
        let pole = -4.0 * PI * PI / (beta * beta);
        let g =
            |w2: f64| -> Result<f64> { Ok(w2 - base - 12.0 * lambda * smearing_width(w2, beta)?) };
        // g increases monotonically; g(base) < 0 and g → −∞ at the pole
        let mut lo = base.max(pole * (1.0 - 1e-12));
        let mut hi = base.abs().max(1.0) + base;
        let mut grow = 0;
        while g(hi)? <= 0.0 {
            hi += (hi - lo).max(1.0);
            grow += 1;
            if grow > 200 {
                return Err(Error::SolverNonConvergence(
                    "FK trial frequency bracket".into(),
                ));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let s = 0.25 * beta * beta * omega2;
    let a2 = smearing_width(omega2, beta)?;
    let x2 = x0 * x0;
    let smeared = 0.5 * m2 * (x2 + a2) + lambda * (x2 * x2 + 6.0 * x2 * a2 + 3.0 * a2 * a2);
    let w = ln_sinhc(s) / beta - 0.5 * omega2 * a2 + smeared;
    if w.is_finite() {
        Ok((w, omega2))
    } else {
        Err(Error::NonFinite("FK effective potential"))
    }
}

pub fn free_energy_fk(
    params: &OscillatorParams,
    beta: f64,
    opts: &ThermoOptions,
) -> Result<FreeEnergyResult> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be > 0, got {beta}"
        )));
    }
    let norm = -0.5 * (2.0 * PI * beta).ln();
    let z = integrate_even_exp(
        |x0| effective_potential(params, beta, x0).map(|(w, _)| norm - beta * w),
        initial_cutoff(params, beta),
        opts,
    )?;
    let (f, err) = z.free_energy(beta);
    let omega2 = effective_potential(params, beta, 0.0)?.1;
    Ok(FreeEnergyResult {
        beta,
        f,
        method: Method::Fk,
        omega_diag: omega2.signum() * omega2.abs().sqrt(),
        error_estimate: err,
    })
}
