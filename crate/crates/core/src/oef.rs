//! First-order optimized expansion of the free energy itself (OEF), with one
//! trial frequency per temperature:
//!
//! ```text
//! F(ω) = ω/2 + ln(1 − e^{−βω})/β + (m² − ω²)/(2ω)·(½ + n) + 3λ/ω²·(½ + n)²
//! n = 1/(e^{βω} − 1)
//! ```

use crate::error::{Error, Result};
use crate::observables::{FreeEnergyResult, Method};
use crate::params::OscillatorParams;
use crate::scalar::{Dual, Scalar};
use crate::stationary::{solve_real, GapOptions};

fn oef_generic<S: Scalar>(params: &OscillatorParams, beta: f64, omega: S) -> S {
    let x = omega * beta;
    // q = e^{−βω}, 1 − q = −expm1(−βω); no overflow for large βω
    let q = (-x).exp();
    let one_minus_q = -(-x).exp_m1();
    let occ = S::cst(0.5) + q / one_minus_q;
    omega * 0.5
        + one_minus_q.ln() * (1.0 / beta)
        + (S::cst(params.m2) - omega * omega) / (omega * 2.0) * occ
        + occ * occ * (3.0 * params.lambda) / (omega * omega)
}

/// The OEF free energy at a fixed trial frequency.
pub fn oef_value(params: &OscillatorParams, beta: f64, omega: f64) -> f64 {
    oef_generic(params, beta, omega)
}

/// `(F, dF/dω, d²F/dω²)`.
pub fn oef_derivatives(params: &OscillatorParams, beta: f64, omega: f64) -> (f64, f64, f64) {
    let w: Dual<Dual<f64>> = Dual::new(Dual::var(omega), Dual::constant(1.0));
    let r = oef_generic(params, beta, w);
    (r.v.v, r.d.v, r.d.d)
}

pub fn free_energy_oef(
    params: &OscillatorParams,
    beta: f64,
    opts: &GapOptions,
) -> Result<FreeEnergyResult> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be > 0, got {beta}"
        )));
    }
    let omega_ref = params.frequency_scale().max(1.0 / beta);
    let gap = solve_real(
        |w| {
            let (_, g, dg) = oef_derivatives(params, beta, w);
            Ok((g, dg))
        },
        omega_ref,
        opts,
    )?;
    let f = oef_value(params, beta, gap.omega_star);
    if !f.is_finite() {
        return Err(Error::NonFinite("OEF free energy"));
    }
    Ok(FreeEnergyResult {
        beta,
        f,
        method: Method::Oef,
        omega_diag: gap.omega_star,
        error_estimate: gap.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_limit() {
        let p = OscillatorParams::harmonic(1.3);
        for beta in [0.1, 1.0, 20.0] {
            let r = free_energy_oef(&p, beta, &GapOptions::default()).unwrap();
            assert!((r.omega_diag - 1.3).abs() < 1e-9);
            let exact = 0.65 + (-(-1.3 * beta).exp_m1()).ln() / beta;
            assert!((r.f - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_temperature_cubic() {
        // β → ∞: ω³ − m²ω − 6λ = 0, F = ω/4 + m²/(4ω) + 3λ/(4ω²)
        let p = OscillatorParams::new(0.0, 1.0).unwrap();
        let w0 = 6f64.cbrt();
        let f0 = w0 / 4.0 + 3.0 / (4.0 * w0 * w0);
        let r = free_energy_oef(&p, 50.0, &GapOptions::default()).unwrap();
        assert!((r.omega_diag - w0).abs() < 1e-9);
        assert!((r.f - f0).abs() < 1e-12);
        assert!((r.f - 0.68142).abs() < 1e-4);
    }

    #[test]
    fn stationary_point_is_a_minimum() {
        let p = OscillatorParams::new(0.0, 1.0).unwrap();
        let r = free_energy_oef(&p, 2.0, &GapOptions::default()).unwrap();
        assert!(oef_derivatives(&p, 2.0, r.omega_diag).2 > 0.0);
    }

    #[test]
    fn derivative_matches_difference() {
        let p = OscillatorParams::new(-1.0, 0.3).unwrap();
        let (_, d, _) = oef_derivatives(&p, 1.7, 2.1);
        let h = 1e-6;
        let fd = (oef_value(&p, 1.7, 2.1 + h) - oef_value(&p, 1.7, 2.1 - h)) / (2.0 * h);
        assert!((d - fd).abs() < 1e-7);
    }
}
