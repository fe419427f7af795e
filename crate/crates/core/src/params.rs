use crate::error::{Error, Result};

/// Potential `m2·x²/2 + lambda·x⁴` (unit mass, ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub m2: f64,
    pub lambda: f64,
}

impl OscillatorParams {
    pub fn new(m2: f64, lambda: f64) -> Result<Self> {
        if !m2.is_finite() || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite m2={m2} or lambda={lambda}"
            )));
        }
        if lambda < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        if lambda == 0.0 && m2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "harmonic case (lambda = 0) needs m2 > 0, got {m2}"
            )));
        }
        Ok(OscillatorParams { m2, lambda })
    }

    pub fn harmonic(m: f64) -> Self {
        OscillatorParams {
            m2: m * m,
            lambda: 0.0,
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        let x2 = x * x;
        0.5 * self.m2 * x2 + self.lambda * x2 * x2
    }

    /// Natural frequency scale `max(√|m²|, (6λ)^(1/3))`.
    pub fn frequency_scale(&self) -> f64 {
        self.m2.abs().sqrt().max((6.0 * self.lambda).cbrt())
    }
}

/// Endpoints and inverse temperature of an imaginary-time amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanPoint {
    pub x_a: f64,
    pub x_b: f64,
    pub beta: f64,
}

impl EuclideanPoint {
    pub fn new(x_a: f64, x_b: f64, beta: f64) -> Result<Self> {
        if !(x_a.is_finite() && x_b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite endpoints ({x_a}, {x_b})"
            )));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and > 0, got {beta}"
            )));
        }
        Ok(EuclideanPoint { x_a, x_b, beta })
    }

    pub fn diagonal(x: f64, beta: f64) -> Result<Self> {
        Self::new(x, x, beta)
    }

    pub fn swapped(&self) -> Self {
        EuclideanPoint {
            x_a: self.x_b,
            x_b: self.x_a,
            beta: self.beta,
        }
    }
}

/// Endpoints and (real) propagation time of a real-time amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTimePoint {
    pub x_a: f64,
    pub x_b: f64,
    pub time: f64,
}

impl RealTimePoint {
    pub fn new(x_a: f64, x_b: f64, time: f64) -> Result<Self> {
        if !(x_a.is_finite() && x_b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite endpoints ({x_a}, {x_b})"
            )));
        }
        if !(time > 0.0 && time.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "time must be finite and > 0, got {time}"
            )));
        }
        Ok(RealTimePoint { x_a, x_b, time })
    }
}
