//! Scalar abstraction shared by the closed-form kernels.
//!
//! The same closed-form expressions are evaluated over `f64` (imaginary time),
//! `Complex64` (complex time, used for the real-time amplitude) and forward-mode
//! [`Dual`] numbers wrapping either of those, which give exact derivatives with
//! respect to the trial frequency.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
{
    fn cst(x: f64) -> Self;
    fn exp(self) -> Self;
    fn exp_m1(self) -> Self;
    fn ln(self) -> Self;
    /// Modulus of the underlying value, used only for branch selection.
    fn modulus(self) -> f64;
    fn is_finite(self) -> bool;

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn exp_m1(self) -> Self {
        f64::exp_m1(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
}

impl Scalar for Complex64 {
    fn cst(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn exp_m1(self) -> Self {
        // expm1(x + iy) = expm1(x) cos y - 2 sin²(y/2) + i e^x sin y
        let (x, y) = (self.re, self.im);
        let half = (0.5 * y).sin();
        Complex64::new(x.exp_m1() * y.cos() - 2.0 * half * half, x.exp() * y.sin())
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Forward-mode dual number `v + d·ε` with `ε² = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual<T> {
    pub v: T,
    pub d: T,
}

impl<T: Scalar> Dual<T> {
    pub fn new(v: T, d: T) -> Self {
        Dual { v, d }
    }

    /// The independent variable: derivative seed of one.
    pub fn var(v: T) -> Self {
        Dual { v, d: T::cst(1.0) }
    }

    pub fn constant(v: T) -> Self {
        Dual { v, d: T::cst(0.0) }
    }
}

impl<T: Scalar> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl<T: Scalar> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl<T: Scalar> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl<T: Scalar> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = T::cst(1.0) / o.v;
        let q = self.v * inv;
        Dual::new(q, (self.d - q * o.d) * inv)
    }
}

impl<T: Scalar> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual::new(-self.v, -self.d)
    }
}

impl<T: Scalar> Mul<f64> for Dual<T> {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        Dual::new(self.v * c, self.d * c)
    }
}

impl<T: Scalar> Scalar for Dual<T> {
    fn cst(x: f64) -> Self {
        Dual::constant(T::cst(x))
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        Dual::new(e, self.d * e)
    }
    fn exp_m1(self) -> Self {
        Dual::new(self.v.exp_m1(), self.d * self.v.exp())
    }
    fn ln(self) -> Self {
        Dual::new(self.v.ln(), self.d / self.v)
    }
    fn modulus(self) -> f64 {
        self.v.modulus()
    }
    fn is_finite(self) -> bool {
        self.v.is_finite() && self.d.is_finite()
    }
}
