//! Result types shared by the approximate methods and the exact oracle.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Exact spectral reference.
    Exact,
    /// Feynman–Kleinert first-order effective classical potential.
    Fk,
    /// Optimized expansion of the free energy (global ω per β).
    Oef,
    /// Optimized expansion of the propagator (local ω per endpoint).
    Oep,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Exact, Method::Fk, Method::Oef, Method::Oep];

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "EXACT",
            Method::Fk => "FK",
            Method::Oef => "OEF",
            Method::Oep => "OEP",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EXACT" => Ok(Method::Exact),
            "FK" => Ok(Method::Fk),
            "OEF" => Ok(Method::Oef),
            "OEP" => Ok(Method::Oep),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

/// Free energy `F = −ln Z / β` from one method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyResult {
    pub beta: f64,
    pub f: f64,
    pub method: Method,
    /// Representative trial frequency: `ω*(β)` for OEF, `ω*(x = 0)` for OEP,
    /// `Ω(x₀ = 0)` for FK, the basis frequency for the exact oracle.
    pub omega_diag: f64,
    /// Quadrature error estimate on `Z` propagated to `F` (OEP, FK), the
    /// gap residual (OEF) or the spectral tail bound (EXACT).
    pub error_estimate: f64,
}

/// Particle density on a position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub beta: f64,
    /// `|∫ρ − 1|` with the integral taken by the trapezoid rule on `grid`.
    pub normalization_error: f64,
}

impl DensityProfile {
    pub fn new(grid: Vec<f64>, rho: Vec<f64>, beta: f64) -> Self {
        let norm = trapezoid(&grid, &rho);
        DensityProfile {
            grid,
            rho,
            beta,
            normalization_error: (norm - 1.0).abs(),
        }
    }

    pub fn max(&self) -> f64 {
        self.rho.iter().cloned().fold(0.0, f64::max)
    }

    /// Indices of strict interior local maxima.
    pub fn local_maxima(&self) -> Vec<usize> {
        (1..self.rho.len().saturating_sub(1))
            .filter(|&i| self.rho[i] > self.rho[i - 1] && self.rho[i] >= self.rho[i + 1])
            .collect()
    }
}

/// One element `ρ(x_a, x_b)` of the normalized density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrixEntry {
    pub x_a: f64,
    pub x_b: f64,
    pub value: f64,
    pub beta: f64,
}

pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `n` points evenly spaced over `[lo, hi]` inclusive; a grid symmetric
/// about zero is exactly antisymmetric.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            let m = (n - 1) as f64;
            (0..n)
                .map(|k| match k {
                    0 => lo,
                    k if k + 1 == n => hi,
                    k => mid + half * ((2 * k) as f64 - m) / m,
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip_and_sort_alphabetically() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        let mut names: Vec<&str> = Method::ALL.iter().map(|m| m.name()).collect();
        let sorted = {
            let mut s = names.clone();
            s.sort();
            s
        };
        assert_eq!(names, sorted);
        names.dedup();
        assert_eq!(names.len(), 4);
        assert!("xyz".parse::<Method>().is_err());
    }

    #[test]
    fn linspace_is_symmetric() {
        let g = linspace(-3.0, 3.0, 201);
        assert_eq!(g[100], 0.0);
        for i in 0..201 {
            assert_eq!(g[i], -g[200 - i]);
        }
    }
}
