//! Harmonic-oscillator amplitudes and the kernel integrals of the first-order
//! correction.
//!
//! Conventions: the classical path runs from `x_a` at `t = 0` to `x_b` at
//! `t = β`,
//!
//! ```text
//! L(t) = [x_a sinh ω(β−t) + x_b sinh ωt] / sinh ωβ
//! K(t) = sinh ωt · sinh ω(β−t) / (ω sinh ωβ)
//! ```
//!
//! and the harmonic log-amplitude is
//!
//! ```text
//! W⁰ = ½ ln(ω / (2π sinh ωβ)) − ω[(x_a² + x_b²) cosh ωβ − 2 x_a x_b] / (2 sinh ωβ)
//! ```
//!
//! All five integrals only depend on `b = ωβ` up to powers of `ω`:
//!
//! ```text
//! ∫L²   = [(x_a²+x_b²) P20(b) + 2 x_a x_b P11(b)] / ω
//! ∫K    = H11(b) / ω²
//! ∫L⁴   = [(x_a⁴+x_b⁴) P40 + 4 x_a x_b (x_a²+x_b²) P31 + 6 x_a² x_b² P22] / ω
//! ∫L²K  = [(x_a²+x_b²) Q31 + 2 x_a x_b Q22] / ω²
//! ∫K²   = R22(b) / ω³
//! ```
//!
//! with `J_pq(b) = ∫₀ᵇ sinhᵖ(b−u) sinhᑫ(u) du` and `P = J/sinh⁴`, `Q = J/sinh³`,
//! etc. For `|b| < 1` the `J_pq` are summed as Taylor series (the closed forms
//! cancel catastrophically there); otherwise they are written in terms of
//! `e^{-b}` so that nothing overflows for large `b`.
//!
//! Real time is the same analytic function evaluated at the complex inverse
//! temperature `β' = iT`. With `𝓛, 𝒦` the trigonometric path functions,
//!
//! ```text
//! ∫₀ᵀ𝓛² = −i I_L2(iT)   ∫₀ᵀ𝒦 = −I_K(iT)   ∫₀ᵀ𝓛⁴ = −i I_L4(iT)
//! ∫₀ᵀ𝓛²𝒦 = −I_L2K(iT)   ∫₀ᵀ𝒦² = i I_KK(iT)
//! ```
//!
//! so `T = −iβ` maps every real-time quantity back onto its imaginary-time
//! counterpart and the real-time log-amplitude `W(T = −iβ)` equals `W(β)`.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{EuclideanPoint, RealTimePoint};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::Scalar;

/// `|sin ωT|` below this is treated as a caustic.
pub const CAUSTIC_TOL: f64 = 1e-8;

const SERIES_RADIUS: f64 = 1.0;
const SERIES_MAX_ORDER: u32 = 41;

/// The five integrals `∫L², ∫K, ∫L⁴, ∫L²K, ∫K²` entering the first-order
/// amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegrals<T> {
    pub l2: T,
    pub k: T,
    pub l4: T,
    pub l2k: T,
    pub kk: T,
}

impl<T: Scalar> KernelIntegrals<T> {
    /// `∫⟨x²⟩ = ∫(L² + K)`
    pub fn second_moment(&self) -> T {
        self.l2 + self.k
    }

    /// `∫⟨x⁴⟩ = ∫(L⁴ + 6L²K + 3K²)`
    pub fn fourth_moment(&self) -> T {
        self.l4 + self.l2k * 6.0 + self.kk * 3.0
    }

    pub fn as_array(&self) -> [T; 5] {
        [self.l2, self.k, self.l4, self.l2k, self.kk]
    }
}

/// Reduced kernel functions of `b = ωβ`.
#[derive(Debug, Clone, Copy)]
struct Reduced<S> {
    p20: S,
    p11: S,
    h11: S,
    p40: S,
    p31: S,
    p22: S,
    q31: S,
    q22: S,
    r22: S,
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn reduced_series<S: Scalar>(b: S) -> Reduced<S> {
    let b2 = b * b;
    let b3 = b2 * b;
    let mut j20 = S::cst(0.0);
    let mut j11 = S::cst(0.0);
    let mut j40 = S::cst(0.0);
    let mut j31 = S::cst(0.0);
    let mut j22 = S::cst(0.0);
    let mut bn = b3;
    let mut n = 3;
    while n <= SERIES_MAX_ORDER {
        let nf = factorial(n);
        let p2 = 2f64.powi(n as i32);
        j20 = j20 + bn * (p2 / (4.0 * nf));
        j11 = j11 + bn * ((n - 1) as f64 / (2.0 * nf));
        if n >= 5 {
            let p3 = 3f64.powi(n as i32);
            let p4 = 4f64.powi(n as i32 - 1);
            j40 = j40 + bn * ((p4 - 2.0 * p2) / (8.0 * nf));
            j31 = j31 + bn * ((p3 - 3.0 - 12.0 * (n - 1) as f64) / (32.0 * nf));
            j22 = j22 + bn * (0.5 * p2 * (n - 3) as f64 / (8.0 * nf));
        }
        bn = bn * b2;
        n += 2;
    }
    let s = (b.exp_m1() - (-b).exp_m1()) * 0.5;
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s2 * s2;
    Reduced {
        p20: j20 / s2,
        p11: j11 / s2,
        h11: j11 / s,
        p40: j40 / s4,
        p31: j31 / s4,
        p22: j22 / s4,
        q31: j31 / s3,
        q22: j22 / s3,
        r22: j22 / s2,
    }
}

fn reduced_exponential<S: Scalar>(b: S) -> Reduced<S> {
    let one = S::cst(1.0);
    let r = (-b).exp();
    let q = r * r;
    let r3 = q * r;
    let d = -(b * -2.0).exp_m1();
    let d2 = d * d;
    let d3 = d2 * d;
    let d4 = d2 * d2;
    let q2 = q * q;
    let q3 = q2 * q;
    let q4 = q2 * q2;
    let opq = one + q;
    Reduced {
        p20: opq / (d * 2.0) - b * q * 2.0 / d2,
        p11: b * r * opq / d2 - r / d,
        h11: (b * opq / d - one) * 0.5,
        p40: ((one - q4) * 2.0 - q * (one - q2) * 16.0 + b * q2 * 48.0) / (d4 * 8.0),
        p31: (r * (one - q3) - r3 * d * 3.0) / (d4 * 4.0) - r3 * (b * opq - d) * 3.0 / d4,
        p22: (b * q * (one + q2) - q * (one - q2) * 1.5 + b * q2 * 4.0) / d4,
        q31: ((one - q3) - q * d * 3.0) / (d3 * 8.0) - q * (b * opq - d) * 3.0 / (d3 * 2.0),
        q22: r * (b * (one + q2) - (one - q2) * 1.5 + b * q * 4.0) / (d3 * 2.0),
        r22: b * (one + q2) / (d2 * 4.0) - opq * 3.0 / (d * 8.0) + b * q / d2,
    }
}

fn reduced<S: Scalar>(b: S) -> Reduced<S> {
    if b.modulus() < SERIES_RADIUS {
        reduced_series(b)
    } else {
        reduced_exponential(b)
    }
}

/// Kernel integrals at trial frequency `omega` and `b = omega·β` (`β` may be
/// complex).
pub(crate) fn integrals_generic<S: Scalar>(
    x_a: f64,
    x_b: f64,
    omega: S,
    b: S,
) -> KernelIntegrals<S> {
    let red = reduced(b);
    let sum2 = x_a * x_a + x_b * x_b;
    let prod = x_a * x_b;
    let sum4 = x_a.powi(4) + x_b.powi(4);
    let w2 = omega * omega;
    KernelIntegrals {
        l2: (red.p20 * sum2 + red.p11 * (2.0 * prod)) / omega,
        k: red.h11 / w2,
        l4: (red.p40 * sum4 + red.p31 * (4.0 * prod * sum2) + red.p22 * (6.0 * prod * prod))
            / omega,
        l2k: (red.q31 * sum2 + red.q22 * (2.0 * prod)) / w2,
        kk: red.r22 / (w2 * omega),
    }
}

/// `ln sinh b` on the branch continuous from `b → 0⁺` through `Re b > 0`.
fn ln_sinh<S: Scalar>(b: S) -> S {
    b + (-(b * -2.0).exp_m1()).ln() - S::cst(LN_2)
}

/// Harmonic log-amplitude `W⁰` at `b = omega·β`.
pub(crate) fn w0_generic<S: Scalar>(x_a: f64, x_b: f64, omega: S, b: S) -> S {
    let one = S::cst(1.0);
    let em = (-b).exp();
    let tanh_half = -(-b).exp_m1() / (one + em);
    let csch = em * 2.0 / -(b * -2.0).exp_m1();
    let dx = x_a - x_b;
    let quad = tanh_half * (x_a * x_a + x_b * x_b) + csch * (dx * dx);
    (omega * (1.0 / (2.0 * PI))).ln() * 0.5 - ln_sinh(b) * 0.5 - omega * quad * 0.5
}

/// First-order log-amplitude `W⁽¹⁾` at `b = omega·β`.
pub(crate) fn w1_generic<S: Scalar>(m2: f64, lambda: f64, x_a: f64, x_b: f64, omega: S, b: S) -> S {
    let w0 = w0_generic(x_a, x_b, omega, b);
    let ki = integrals_generic(x_a, x_b, omega, b);
    let mass_shift = (S::cst(m2) - omega * omega) * 0.5;
    w0 - mass_shift * ki.second_moment() - ki.fourth_moment() * lambda
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "trial frequency must be finite and > 0, got {omega}"
        )))
    }
}

/// Validate a complex propagation time and return `β' = iT`.
pub(crate) fn complex_beta(time: Complex64, omega: f64) -> Result<Complex64> {
    if !(time.re.is_finite() && time.im.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite time {time}")));
    }
    if time.im > 0.0 || time.norm() == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time must be non-zero with Im T <= 0, got {time}"
        )));
    }
    let wt = time * omega;
    let sin_abs = wt.sin().norm();
    if sin_abs < CAUSTIC_TOL {
        return Err(Error::Caustic {
            omega_t: wt.re,
            sin_abs,
        });
    }
    Ok(Complex64::i() * time)
}

fn finite<T: Scalar>(ki: KernelIntegrals<T>, what: &'static str) -> Result<KernelIntegrals<T>> {
    if ki.as_array().iter().all(|v| v.is_finite()) {
        Ok(ki)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `sinh(u)/sinh(b)` for `0 ≤ u ≤ b` without overflow.
fn sinh_ratio(u: f64, b: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    (u - b).exp() * (-2.0 * u).exp_m1() / (-2.0 * b).exp_m1()
}

fn check_time(t: f64, omega: f64, beta: f64) -> Result<()> {
    check_omega(omega)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and > 0, got {beta}"
        )));
    }
    if !(0.0..=beta).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "t = {t} outside [0, {beta}]"
        )));
    }
    Ok(())
}

/// Classical harmonic path, `L(0) = x_a`, `L(β) = x_b`.
pub fn path_l(x_a: f64, x_b: f64, t: f64, omega: f64, beta: f64) -> Result<f64> {
    check_time(t, omega, beta)?;
    if !(x_a.is_finite() && x_b.is_finite()) {
        return Err(Error::InvalidParameter("non-finite endpoints".into()));
    }
    let b = omega * beta;
    Ok(x_a * sinh_ratio(omega * (beta - t), b) + x_b * sinh_ratio(omega * t, b))
}

/// Fluctuation variance `K(t)` of the harmonic bridge.
pub fn path_k(t: f64, omega: f64, beta: f64) -> Result<f64> {
    check_time(t, omega, beta)?;
    let b = omega * beta;
    let u = omega * t;
    let (lo, hi) = if u <= b - u { (u, b - u) } else { (b - u, u) };
    let k = if lo < 1.0 {
        lo.sinh() * sinh_ratio(hi, b)
    } else {
        // both factors large: combine exponents before exponentiating
        0.5 * (-(-2.0 * lo).exp_m1()) * (-(-2.0 * hi).exp_m1()) / (-(-2.0 * b).exp_m1())
    };
    Ok(k / omega)
}

/// Real-time classical path `𝓛(t)`, `𝓛(0) = x_a`, `𝓛(T) = x_b`.
pub fn path_l_real(x_a: f64, x_b: f64, t: f64, omega: f64, time: f64) -> f64 {
    (x_a * (omega * (time - t)).sin() + x_b * (omega * t).sin()) / (omega * time).sin()
}

/// Real-time fluctuation function `𝒦(t)`.
pub fn path_k_real(t: f64, omega: f64, time: f64) -> f64 {
    (omega * t).sin() * (omega * (time - t)).sin() / (omega * (omega * time).sin())
}

/// Closed-form imaginary-time kernel integrals.
pub fn kernel_integrals_imag(p: &EuclideanPoint, omega: f64) -> Result<KernelIntegrals<f64>> {
    check_omega(omega)?;
    finite(
        integrals_generic(p.x_a, p.x_b, omega, omega * p.beta),
        "kernel integrals",
    )
}

/// Same five integrals by adaptive quadrature of [`path_l`] and [`path_k`];
/// returns the values and the per-integral error estimates.
pub fn kernel_integrals_imag_quadrature(
    p: &EuclideanPoint,
    omega: f64,
    opts: &QuadOptions,
) -> Result<(KernelIntegrals<f64>, [f64; 5])> {
    check_omega(omega)?;
    let beta = p.beta;
    let l = |t: f64| path_l(p.x_a, p.x_b, t.clamp(0.0, beta), omega, beta).unwrap_or(f64::NAN);
    let k = |t: f64| path_k(t.clamp(0.0, beta), omega, beta).unwrap_or(f64::NAN);
    let parts = [
        integrate(|t| l(t).powi(2), 0.0, beta, opts)?,
        integrate(k, 0.0, beta, opts)?,
        integrate(|t| l(t).powi(4), 0.0, beta, opts)?,
        integrate(|t| l(t).powi(2) * k(t), 0.0, beta, opts)?,
        integrate(|t| k(t).powi(2), 0.0, beta, opts)?,
    ];
    let ki = KernelIntegrals {
        l2: parts[0].value,
        k: parts[1].value,
        l4: parts[2].value,
        l2k: parts[3].value,
        kk: parts[4].value,
    };
    Ok((ki, parts.map(|r| r.error)))
}

/// Real-time integrals `∫₀ᵀ𝓛², ∫𝒦, ∫𝓛⁴, ∫𝓛²𝒦, ∫𝒦²` for a complex time `T`
/// with `Im T ≤ 0`.
pub fn kernel_integrals_complex_time(
    x_a: f64,
    x_b: f64,
    time: Complex64,
    omega: f64,
) -> Result<KernelIntegrals<Complex64>> {
    check_omega(omega)?;
    let beta = complex_beta(time, omega)?;
    let w = Complex64::new(omega, 0.0);
    let e = integrals_generic(x_a, x_b, w, w * beta);
    let i = Complex64::i();
    finite(
        KernelIntegrals {
            l2: -i * e.l2,
            k: -e.k,
            l4: -i * e.l4,
            l2k: -e.l2k,
            kk: i * e.kk,
        },
        "real-time kernel integrals",
    )
}

pub fn kernel_integrals_real(p: &RealTimePoint, omega: f64) -> Result<KernelIntegrals<Complex64>> {
    kernel_integrals_complex_time(p.x_a, p.x_b, Complex64::new(p.time, 0.0), omega)
}

pub fn w0_imag(p: &EuclideanPoint, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    let w = w0_generic(p.x_a, p.x_b, omega, omega * p.beta);
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite("w0_imag"))
    }
}

/// Harmonic real-time log-amplitude
/// `½ ln(ω/(2πi sin ωT)) + iω[(x_a²+x_b²) cos ωT − 2x_a x_b]/(2 sin ωT)`
/// for complex `T`, on the branch continuous from `T → 0⁺` (each caustic
/// passed contributes a phase of `−π/2`).
pub fn w0_complex_time(x_a: f64, x_b: f64, time: Complex64, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    let beta = complex_beta(time, omega)?;
    let w = Complex64::new(omega, 0.0);
    let v = w0_generic(x_a, x_b, w, w * beta);
    if Scalar::is_finite(v) {
        Ok(v)
    } else {
        Err(Error::NonFinite("w0_real"))
    }
}

pub fn w0_real(p: &RealTimePoint, omega: f64) -> Result<Complex64> {
    w0_complex_time(p.x_a, p.x_b, Complex64::new(p.time, 0.0), omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn path_l_examples() {
        assert_eq!(path_l(0.7, 0.7, 0.0, 1.3, 2.0).unwrap(), 0.7);
        assert_eq!(path_l(0.0, 0.0, 0.4, 1.3, 2.0).unwrap(), 0.0);
        let v = path_l(1.0, 0.0, 1.0, 1.0, 2.0).unwrap();
        assert!((v - 1f64.sinh() / 2f64.sinh()).abs() < 1e-15);
        assert!((v - 0.32410).abs() < 1e-4);
        assert!(close(
            path_l(0.3, -1.1, 2.0, 1.3, 2.0).unwrap(),
            -1.1,
            1e-15
        ));
    }

    #[test]
    fn path_l_solves_boundary_value_problem() {
        // L'' = ω² L checked by second differences
        let (w, beta, h) = (1.7, 2.3, 1e-4);
        for &t in &[0.3, 1.0, 1.9] {
            let f = |s| path_l(0.8, -0.4, s, w, beta).unwrap();
            let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
            assert!((d2 - w * w * f(t)).abs() < 1e-5);
        }
    }

    #[test]
    fn path_k_examples() {
        assert_eq!(path_k(0.0, 1.0, 2.0).unwrap(), 0.0);
        assert!(path_k(2.0, 1.0, 2.0).unwrap().abs() < 1e-16);
        let v = path_k(1.0, 1.0, 2.0).unwrap();
        assert!((v - 0.5 * (2f64.cosh() - 1.0) / 2f64.sinh()).abs() < 1e-15);
        assert!((v - 0.38080).abs() < 5e-6);
        // large ωβ: K → 1/(2ω) in the middle
        let mid = path_k(500.0, 1.0, 1000.0).unwrap();
        assert!((mid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn path_functions_reject_bad_input() {
        assert!(path_k(-0.1, 1.0, 1.0).is_err());
        assert!(path_k(0.5, 0.0, 1.0).is_err());
        assert!(path_l(f64::NAN, 0.0, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn ik_example_value() {
        let p = EuclideanPoint::new(0.3, 0.3, 1.0).unwrap();
        let ki = kernel_integrals_imag(&p, 1.0).unwrap();
        // (coth 1 − 1)/2
        assert!((ki.k - 0.5 * (1.0 / 1f64.tanh() - 1.0)).abs() < 1e-15);
        assert!((ki.k - 0.15652).abs() < 5e-6);
    }

    #[test]
    fn zero_endpoints_leave_only_fluctuations() {
        let p = EuclideanPoint::new(0.0, 0.0, 1.4).unwrap();
        let ki = kernel_integrals_imag(&p, 0.9).unwrap();
        assert_eq!((ki.l2, ki.l4, ki.l2k), (0.0, 0.0, 0.0));
        assert!(ki.k > 0.0 && ki.kk > 0.0);
    }

    #[test]
    fn vanishing_beta() {
        let p = EuclideanPoint::new(1.0, -0.5, 1e-3).unwrap();
        let ki = kernel_integrals_imag(&p, 1.0).unwrap();
        assert!(ki.as_array().iter().all(|v| *v > 0.0 && *v < 1e-2));
    }

    #[test]
    fn branches_agree_at_the_switch() {
        // both representations are valid near |b| = 1
        for b in [0.7, 1.0, 1.3] {
            let lo = reduced_series(b);
            let hi = reduced_exponential(b);
            let pairs = [
                (lo.p20, hi.p20),
                (lo.p11, hi.p11),
                (lo.h11, hi.h11),
                (lo.p40, hi.p40),
                (lo.p31, hi.p31),
                (lo.p22, hi.p22),
                (lo.q31, hi.q31),
                (lo.q22, hi.q22),
                (lo.r22, hi.r22),
            ];
            for (a, b) in pairs {
                assert!((a - b).abs() < 1e-12 * b.abs(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn huge_omega_beta_is_finite() {
        let p = EuclideanPoint::new(0.5, -0.2, 1000.0).unwrap();
        let ki = kernel_integrals_imag(&p, 2.0).unwrap();
        assert!(ki.as_array().iter().all(|v| v.is_finite() && *v > 0.0));
        // ∫K → β/(2ω), ∫K² → β/(4ω²) at large β
        assert!(close(ki.k, 1000.0 / 4.0 - 1.0 / 8.0, 1e-12));
        assert!(w0_imag(&p, 2.0).unwrap().is_finite());
    }

    #[test]
    fn w0_examples() {
        let p = EuclideanPoint::new(0.0, 0.0, 1.0).unwrap();
        let w = w0_imag(&p, 1.0).unwrap();
        assert!((w - 0.5 * (1.0 / (2.0 * PI * 1f64.sinh())).ln()).abs() < 1e-15);
        assert!((w + 0.99973).abs() < 1e-4);
        let near = w0_imag(&EuclideanPoint::new(0.2, -0.2, 1.0).unwrap(), 1.0).unwrap();
        let far = w0_imag(&EuclideanPoint::new(0.6, -0.6, 1.0).unwrap(), 1.0).unwrap();
        assert!(far < near);
    }

    #[test]
    fn w0_real_examples() {
        let p = RealTimePoint::new(0.0, 0.0, PI / 2.0).unwrap();
        let w = w0_real(&p, 1.0).unwrap();
        let expect = (Complex64::new(1.0, 0.0) / Complex64::new(0.0, 2.0 * PI)).ln() * 0.5;
        assert!((w - expect).norm() < 1e-14);
        let caustic = w0_real(&RealTimePoint::new(0.0, 0.0, PI).unwrap(), 1.0);
        assert!(matches!(caustic, Err(Error::Caustic { .. })));
    }

    #[test]
    fn w0_real_maslov_phase() {
        // past one caustic the prefactor phase drops by π/2
        let before = w0_real(&RealTimePoint::new(0.0, 0.0, 0.5 * PI).unwrap(), 1.0).unwrap();
        let after = w0_real(&RealTimePoint::new(0.0, 0.0, 1.5 * PI).unwrap(), 1.0).unwrap();
        assert!((before.im + PI / 4.0).abs() < 1e-14);
        assert!((after.im + 3.0 * PI / 4.0).abs() < 1e-14);
    }

    #[test]
    fn real_time_harmonic_amplitude_matches_textbook_formula() {
        let (xa, xb, t, w) = (0.4, -0.9, 0.8, 1.3);
        let got = w0_real(&RealTimePoint::new(xa, xb, t).unwrap(), w).unwrap();
        let s = (w * t).sin();
        let i = Complex64::i();
        let expect = (Complex64::new(w, 0.0) / (i * 2.0 * PI * s)).ln() * 0.5
            + i * w * ((xa * xa + xb * xb) * (w * t).cos() - 2.0 * xa * xb) / (2.0 * s);
        assert!((got - expect).norm() < 1e-13);
    }

    #[test]
    fn real_time_integrals_at_quarter_period() {
        // ∫₀^{π/2} sin t sin(π/2 − t) dt = 1/2 for ω = 1
        let p = RealTimePoint::new(0.0, 0.0, PI / 2.0).unwrap();
        let ki = kernel_integrals_real(&p, 1.0).unwrap();
        assert!((ki.k - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert_eq!(ki.l2.norm(), 0.0);
        assert_eq!(ki.l4.norm(), 0.0);
        assert_eq!(ki.l2k.norm(), 0.0);
    }
}
