//! First-order optimized expansion of the propagation amplitude.
//!
//! ```text
//! W⁽¹⁾ = W⁰ − (m² − ω²)/2 · ∫(L² + K) − λ ∫(L⁴ + 6L²K + 3K²)
//! ```
//!
//! with the trial frequency `ω` fixed per endpoint pair by `dW⁽¹⁾/dω = 0`.
//! Derivatives with respect to `ω` are exact (forward-mode dual numbers
//! through the closed-form kernels).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::{check_omega, complex_beta, w1_generic};
use crate::params::{EuclideanPoint, OscillatorParams, RealTimePoint};
use crate::scalar::Dual;
use crate::stationary::{log_grid, minimal_sensitivity, solve_on_grid};

pub use crate::stationary::{GapOptions, GapSolution};

/// Relative distance kept from `|ω|β = π` by the imaginary-frequency scan.
const IMAGINARY_MARGIN: f64 = 1e-6;

/// Optimized first-order amplitude together with its gap solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderAmplitude<P, W> {
    pub w_value: W,
    pub gap: GapSolution,
    pub point: P,
}

impl FirstOrderAmplitude<EuclideanPoint, f64> {
    pub fn amplitude(&self) -> f64 {
        self.w_value.exp()
    }
}

impl FirstOrderAmplitude<RealTimePoint, Complex64> {
    pub fn amplitude(&self) -> Complex64 {
        self.w_value.exp()
    }
}

/// Stationarity tolerance `1e-10 · max(1, |W|/ω)` used to report an exact
/// stationary point.
pub fn residual_tolerance(w: f64, omega: f64) -> f64 {
    1e-10 * (w.abs() / omega).max(1.0)
}

/// Scan scale `max(√|m²|, (6λ·max(1, x_a² + x_b²))^(1/3), 1/β)`.
pub fn reference_frequency(params: &OscillatorParams, x_a: f64, x_b: f64, beta: f64) -> f64 {
    let spread = (x_a * x_a + x_b * x_b).max(1.0);
    params
        .m2
        .abs()
        .sqrt()
        .max((6.0 * params.lambda * spread).cbrt())
        .max(1.0 / beta)
}

/// `W⁽¹⁾` in imaginary time. `W⁽¹⁾` depends on the trial frequency only
/// through `ω²`; a negative `omega` selects the imaginary frequency
/// `ω = i|omega|` (`ω² < 0`), allowed while `|omega|·β < π`.
pub fn w1_imag(params: &OscillatorParams, p: &EuclideanPoint, omega: f64) -> Result<f64> {
    let w = if omega < 0.0 {
        let nu = check_imaginary(p, -omega)?;
        let w = Complex64::new(0.0, nu);
        w1_generic(params.m2, params.lambda, p.x_a, p.x_b, w, w * p.beta).re
    } else {
        check_omega(omega)?;
        w1_generic(
            params.m2,
            params.lambda,
            p.x_a,
            p.x_b,
            omega,
            omega * p.beta,
        )
    };
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite("w1_imag"))
    }
}

/// Upper bound (exclusive) on `|ω|β` for an imaginary trial frequency.
pub const IMAGINARY_LIMIT: f64 = PI;

fn check_imaginary(p: &EuclideanPoint, nu: f64) -> Result<f64> {
    if nu.is_finite() && nu * p.beta < IMAGINARY_LIMIT {
        Ok(nu)
    } else {
        Err(Error::InvalidParameter(format!(
            "imaginary trial frequency {nu}i out of range for beta {}",
            p.beta
        )))
    }
}

/// `(W⁽¹⁾, dW⁽¹⁾/du, d²W⁽¹⁾/du²)` with `u = ω²`, for `u` of either sign.
pub fn w1_imag_square_derivatives(
    params: &OscillatorParams,
    p: &EuclideanPoint,
    u: f64,
) -> Result<(f64, f64, f64)> {
    if u == 0.0 || !u.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "squared trial frequency must be finite and nonzero, got {u}"
        )));
    }
    // chain rule from ω to u = ω²
    let to_square = |w: Complex64, d1: Complex64, d2: Complex64| {
        let du = d1 / (w * 2.0);
        let duu = (d2 - d1 / w) / (w * w * 4.0);
        (du, duu)
    };
    let out = if u > 0.0 {
        let (w, d1, d2) = w1_imag_derivatives(params, p, u.sqrt())?;
        let (du, duu) = to_square(Complex64::new(u.sqrt(), 0.0), d1.into(), d2.into());
        (w, du.re, duu.re)
    } else {
        let nu = check_imaginary(p, (-u).sqrt())?;
        let omega = Complex64::new(0.0, nu);
        let wd: Dual<Dual<Complex64>> =
            Dual::new(Dual::var(omega), Dual::constant(Complex64::new(1.0, 0.0)));
        let r = w1_generic(params.m2, params.lambda, p.x_a, p.x_b, wd, wd * p.beta);
        let (du, duu) = to_square(omega, r.d.v, r.d.d);
        (r.v.v.re, du.re, duu.re)
    };
    if out.0.is_finite() && out.1.is_finite() && out.2.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("w1_imag square derivatives"))
    }
}

/// `(W⁽¹⁾, dW⁽¹⁾/dω, d²W⁽¹⁾/dω²)` in imaginary time.
pub fn w1_imag_derivatives(
    params: &OscillatorParams,
    p: &EuclideanPoint,
    omega: f64,
) -> Result<(f64, f64, f64)> {
    check_omega(omega)?;
    let w: Dual<Dual<f64>> = Dual::new(Dual::var(omega), Dual::constant(1.0));
    let b = w * p.beta;
    let r = w1_generic(params.m2, params.lambda, p.x_a, p.x_b, w, b);
    let out = (r.v.v, r.d.v, r.d.d);
    if out.0.is_finite() && out.1.is_finite() && out.2.is_finite() {
        Ok(out)
    } else {
        Err(Error::NonFinite("w1_imag derivatives"))
    }
}

/// `dW⁽¹⁾/dω` in imaginary time.
pub fn gap_residual_imag(params: &OscillatorParams, p: &EuclideanPoint, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let w = Dual::var(omega);
    let r = w1_generic(params.m2, params.lambda, p.x_a, p.x_b, w, w * p.beta);
    if r.d.is_finite() {
        Ok(r.d)
    } else {
        Err(Error::NonFinite("gap_residual_imag"))
    }
}

pub fn optimize_omega_imag(params: &OscillatorParams, p: &EuclideanPoint) -> Result<GapSolution> {
    optimize_omega_imag_with(params, p, &GapOptions::default())
}

/// Scan `u = ω²` over imaginary and real trial frequencies, take the
/// largest stationary `u`, and report it as a signed frequency
/// (`omega_star < 0` for `ω = i|omega_star|`). The bracket is reported the
/// same way and the residual is `|dW⁽¹⁾/dω|`.
pub fn optimize_omega_imag_with(
    params: &OscillatorParams,
    p: &EuclideanPoint,
    opts: &GapOptions,
) -> Result<GapSolution> {
    let omega_ref = reference_frequency(params, p.x_a, p.x_b, p.beta);
    let n = opts.grid_points.max(3);
    let (lo, hi) = (omega_ref / opts.span, omega_ref * opts.span);
    let nu_max = IMAGINARY_LIMIT / p.beta * (1.0 - IMAGINARY_MARGIN);
    let mut grid: Vec<f64> = Vec::with_capacity(n + n / 2);
    if nu_max > lo {
        grid.extend(
            log_grid(lo, nu_max, (n / 2).max(3))
                .iter()
                .rev()
                .map(|nu| -nu * nu),
        );
    }
    grid.extend(log_grid(lo, hi, n).iter().map(|w| w * w));
    let sol = solve_on_grid(
        |u| {
            let (_, g, dg) = w1_imag_square_derivatives(params, p, u)?;
            Ok((g, dg))
        },
        &grid,
        |_, g| g.abs(),
        opts,
    )?;
    let signed = |u: f64| u.signum() * u.abs().sqrt();
    Ok(GapSolution {
        omega_star: signed(sol.omega_star),
        residual: 2.0 * sol.omega_star.abs().sqrt() * sol.residual,
        bracket: (signed(sol.bracket.0), signed(sol.bracket.1)),
        ..sol
    })
}

/// Optimized `W⁽¹⁾` at a Euclidean point.
pub fn amplitude_imag(
    params: &OscillatorParams,
    p: &EuclideanPoint,
) -> Result<FirstOrderAmplitude<EuclideanPoint, f64>> {
    amplitude_imag_with(params, p, &GapOptions::default())
}

pub fn amplitude_imag_with(
    params: &OscillatorParams,
    p: &EuclideanPoint,
    opts: &GapOptions,
) -> Result<FirstOrderAmplitude<EuclideanPoint, f64>> {
    let gap = optimize_omega_imag_with(params, p, opts)?;
    let w_value = w1_imag(params, p, gap.omega_star)?;
    Ok(FirstOrderAmplitude {
        w_value,
        gap,
        point: *p,
    })
}

/// `W⁽¹⁾` for a complex propagation time (`Im T ≤ 0`).
pub fn w1_complex_time(
    params: &OscillatorParams,
    x_a: f64,
    x_b: f64,
    time: Complex64,
    omega: f64,
) -> Result<Complex64> {
    check_omega(omega)?;
    let beta = complex_beta(time, omega)?;
    let w = Complex64::new(omega, 0.0);
    let r = w1_generic(params.m2, params.lambda, x_a, x_b, w, w * beta);
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::NonFinite("w1_real"))
    }
}

pub fn w1_real(params: &OscillatorParams, p: &RealTimePoint, omega: f64) -> Result<Complex64> {
    w1_complex_time(params, p.x_a, p.x_b, Complex64::new(p.time, 0.0), omega)
}

/// `(dW⁽¹⁾/dω, d²W⁽¹⁾/dω²)` for complex time and real `ω`.
pub fn gap_residual_complex_time(
    params: &OscillatorParams,
    x_a: f64,
    x_b: f64,
    time: Complex64,
    omega: f64,
) -> Result<(Complex64, Complex64)> {
    check_omega(omega)?;
    let beta = complex_beta(time, omega)?;
    let w: Dual<Dual<Complex64>> = Dual::new(
        Dual::var(Complex64::new(omega, 0.0)),
        Dual::constant(Complex64::new(1.0, 0.0)),
    );
    let r = w1_generic(
        params.m2,
        params.lambda,
        x_a,
        x_b,
        w,
        w * Dual::constant(Dual::constant(beta)),
    );
    let (g, dg) = (r.d.v, r.d.d);
    if g.re.is_finite() && g.im.is_finite() {
        Ok((g, dg))
    } else {
        Err(Error::NonFinite("gap_residual_real"))
    }
}

pub fn gap_residual_real(
    params: &OscillatorParams,
    p: &RealTimePoint,
    omega: f64,
) -> Result<Complex64> {
    gap_residual_complex_time(params, p.x_a, p.x_b, Complex64::new(p.time, 0.0), omega).map(|r| r.0)
}

/// Real `ω` minimizing `|dW⁽¹⁾/dω|` for a complex time. A complex `W` is in
/// general not stationary for any real `ω`; `fallback_used` stays set unless
/// the residual reaches the stationarity tolerance.
pub fn optimize_omega_complex_time(
    params: &OscillatorParams,
    x_a: f64,
    x_b: f64,
    time: Complex64,
    opts: &GapOptions,
) -> Result<GapSolution> {
    if params.lambda == 0.0 {
        // exact stationary point of the harmonic problem
        let m = params.m2.sqrt();
        let g = gap_residual_complex_time(params, x_a, x_b, time, m)?.0;
        return Ok(GapSolution {
            omega_star: m,
            residual: g.norm(),
            n_roots: 1,
            bracket: (m, m),
            fallback_used: false,
        });
    }
    let omega_ref = reference_frequency(params, x_a, x_b, time.norm());
    let grid = log_grid(
        omega_ref / opts.span,
        omega_ref * opts.span,
        opts.grid_points.max(3),
    );
    let abs_g = |w: f64| -> Result<f64> {
        // caustic points are skipped by giving them infinite sensitivity
        match gap_residual_complex_time(params, x_a, x_b, time, w) {
            Ok((g, _)) => Ok(g.norm()),
            Err(Error::Caustic { .. }) | Err(Error::NonFinite(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    };
    let measure = |w: f64| abs_g(w).map(|g| g / w);
    let samples: Vec<f64> = grid.iter().map(|&w| measure(w)).collect::<Result<_>>()?;
    let mut sol = minimal_sensitivity(measure, abs_g, &grid, &samples, 0)?;

    // Gauss–Newton polish of |g|² along real ω
    for _ in 0..opts.newton_steps.max(3) {
        let (g, dg) = gap_residual_complex_time(params, x_a, x_b, time, sol.omega_star)?;
        let denom = dg.norm_sqr();
        if denom == 0.0 || g.norm() == 0.0 {
            break;
        }
        let next = sol.omega_star - (g.conj() * dg).re / denom;
        if next.is_nan() || next <= 0.0 {
            break;
        }
        let r = abs_g(next)?;
        if r >= sol.residual {
            break;
        }
        sol.omega_star = next;
        sol.residual = r;
        sol.bracket = (sol.bracket.0.min(next), sol.bracket.1.max(next));
    }
    let w = w1_complex_time(params, x_a, x_b, time, sol.omega_star)?;
    sol.fallback_used = sol.residual > residual_tolerance(w.norm(), sol.omega_star);
    sol.n_roots = usize::from(!sol.fallback_used);
    Ok(sol)
}

pub fn optimize_omega_real(params: &OscillatorParams, p: &RealTimePoint) -> Result<GapSolution> {
    optimize_omega_complex_time(
        params,
        p.x_a,
        p.x_b,
        Complex64::new(p.time, 0.0),
        &GapOptions::default(),
    )
}

pub fn amplitude_real(
    params: &OscillatorParams,
    p: &RealTimePoint,
) -> Result<FirstOrderAmplitude<RealTimePoint, Complex64>> {
    let gap = optimize_omega_real(params, p)?;
    let w_value = w1_real(params, p, gap.omega_star)?;
    Ok(FirstOrderAmplitude {
        w_value,
        gap,
        point: *p,
    })
}
