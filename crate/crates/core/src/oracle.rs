//! Exact reference: diagonalization of `H = p²/2 + m²x²/2 + λx⁴` in a
//! harmonic-oscillator basis of frequency `Ω`.
//!
//! The Hamiltonian only couples states of equal parity, so the even and odd
//! blocks are diagonalized separately. Only the lower half of the computed
//! spectrum is used in thermal sums; the upper levels of a truncated basis are
//! not converged.

use std::f64::consts::PI;

use crate::eigen::{jacobi, SymMatrix};
use crate::error::{Error, Result};
use crate::exec::pairwise_sum;
use crate::observables::{DensityMatrixEntry, DensityProfile, FreeEnergyResult, Method};
use crate::params::OscillatorParams;

pub const JACOBI_TOL: f64 = 1e-13;
pub const TAIL_LIMIT: f64 = 1e-14;
pub const MIN_BASIS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    pub params: OscillatorParams,
    /// Ascending eigenvalues.
    pub energies: Vec<f64>,
    pub basis_size: usize,
    pub basis_frequency: f64,
    /// `eigenvectors[n][k]`: coefficient of basis state `k` in eigenstate `n`.
    pub eigenvectors: Vec<Vec<f64>>,
}

pub const DEFAULT_BASIS: usize = 256;

/// Default basis frequency `max(√|m²|, (6λ)^(1/3), (λN)^(1/3))`. The last
/// term widens the basis in momentum so that the levels entering thermal sums
/// at small `β` stay converged.
pub fn default_basis_frequency(params: &OscillatorParams, n: usize) -> f64 {
    params
        .frequency_scale()
        .max((params.lambda * n as f64).cbrt())
}

/// Matrix of `x` (tridiagonal) in the oscillator basis, dimension `n`.
fn position_matrix(n: usize, omega: f64) -> Vec<Vec<f64>> {
    let mut x = vec![vec![0.0; n]; n];
    for k in 0..n.saturating_sub(1) {
        let v = ((k + 1) as f64 / (2.0 * omega)).sqrt();
        x[k][k + 1] = v;
        x[k + 1][k] = v;
    }
    x
}

fn banded_product(a: &[Vec<f64>], b: &[Vec<f64>], band: usize) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        let lo = i.saturating_sub(band);
        let hi = (i + band + 1).min(n);
        for j in lo..hi {
            c[i][j] = (lo..hi).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// `(x², x⁴)` restricted to the first `n` states, computed on an enlarged
/// basis so that the truncated blocks are exact.
fn moment_matrices(n: usize, omega: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let x = position_matrix(n + 4, omega);
    let x2 = banded_product(&x, &x, 2);
    let x4 = banded_product(&x2, &x2, 4);
    let cut = |m: Vec<Vec<f64>>| {
        m.into_iter()
            .take(n)
            .map(|row| row.into_iter().take(n).collect())
            .collect()
    };
    (cut(x2), cut(x4))
}

pub fn solve_spectrum(params: &OscillatorParams, n: usize, omega: f64) -> Result<SpectralSolution> {
    if n < MIN_BASIS {
        return Err(Error::InvalidParameter(format!(
            "basis size must be >= {MIN_BASIS}, got {n}"
        )));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "basis frequency must be > 0, got {omega}"
        )));
    }
    let (x2, x4) = moment_matrices(n, omega);
    let shift = 0.5 * (params.m2 - omega * omega);
    let h = |i: usize, j: usize| {
        let diag = if i == j {
            omega * (i as f64 + 0.5)
        } else {
            0.0
        };
        diag + shift * x2[i][j] + params.lambda * x4[i][j]
    };

    let mut levels: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);
    for parity in 0..2 {
        let idx: Vec<usize> = (parity..n).step_by(2).collect();
        let mut block = SymMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate().skip(a) {
                block.set(a, b, h(i, j));
            }
        }
        let eig = jacobi(block, JACOBI_TOL)?;
        for (value, vec) in eig.values.into_iter().zip(eig.vectors) {
            let mut full = vec![0.0; n];
            for (a, &i) in idx.iter().enumerate() {
                full[i] = vec[a];
            }
            // fix the sign so the leading coefficient is positive
            if let Some(lead) = full.iter().find(|c| c.abs() > 1e-8) {
                if *lead < 0.0 {
                    full.iter_mut().for_each(|c| *c = -*c);
                }
            }
            levels.push((value, full));
        }
    }
    levels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (energies, eigenvectors) = levels.into_iter().unzip();
    Ok(SpectralSolution {
        params: *params,
        energies,
        basis_size: n,
        basis_frequency: omega,
        eigenvectors,
    })
}

/// Oscillator basis functions `φ_0(x) … φ_{n−1}(x)` of frequency `Ω` by the
/// normalized Hermite recurrence.
pub fn hermite_functions(x: f64, n: usize, omega: f64) -> Result<Vec<f64>> {
    let xi = omega.sqrt() * x;
    if 0.5 * xi * xi > 700.0 {
        return Err(Error::RecurrenceRange { x, omega });
    }
    let mut phi = vec![0.0; n];
    if n == 0 {
        return Ok(phi);
    }
    phi[0] = (omega / PI).powf(0.25) * (-0.5 * xi * xi).exp();
    if n > 1 {
        phi[1] = 2f64.sqrt() * xi * phi[0];
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        phi[k + 1] =
            (2.0 / (kf + 1.0)).sqrt() * xi * phi[k] - (kf / (kf + 1.0)).sqrt() * phi[k - 1];
    }
    if phi.iter().any(|v| !v.is_finite()) {
        return Err(Error::RecurrenceRange { x, omega });
    }
    Ok(phi)
}

impl SpectralSolution {
    /// Levels trusted in thermal sums (lower half of the computed spectrum).
    pub fn reliable_levels(&self) -> usize {
        self.energies.len() / 2
    }

    /// Tail bound `exp(−β(E_max − E₀))` with `E_max` the first untrusted level.
    pub fn tail_bound(&self, beta: f64) -> f64 {
        (-beta * (self.energies[self.reliable_levels()] - self.energies[0])).exp()
    }

    fn check_tail(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be > 0, got {beta}"
            )));
        }
        let bound = self.tail_bound(beta);
        if bound >= TAIL_LIMIT {
            return Err(Error::Truncation {
                bound,
                limit: TAIL_LIMIT,
            });
        }
        Ok(bound)
    }

    /// Boltzmann weights `exp(−β(E_n − E₀))` over the reliable levels.
    fn weights(&self, beta: f64) -> Vec<f64> {
        let e0 = self.energies[0];
        self.energies[..self.reliable_levels()]
            .iter()
            .map(|e| (-beta * (e - e0)).exp())
            .collect()
    }

    /// Eigenfunctions `ψ_n(x)` for the reliable levels.
    pub fn eigenfunctions(&self, x: f64) -> Result<Vec<f64>> {
        let phi = hermite_functions(x, self.basis_size, self.basis_frequency)?;
        Ok(self.eigenvectors[..self.reliable_levels()]
            .iter()
            .map(|c| c.iter().zip(&phi).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Expectation `⟨n|O|n⟩` for an operator given by its basis matrix.
    fn expectation(&self, level: usize, op: &[Vec<f64>]) -> f64 {
        let c = &self.eigenvectors[level];
        let n = self.basis_size;
        (0..n)
            .map(|i| c[i] * (0..n).map(|j| op[i][j] * c[j]).sum::<f64>())
            .sum()
    }

    /// `(⟨p²⟩, ⟨x V'(x)⟩)` for one eigenstate; equal by the virial theorem.
    pub fn virial_pair(&self, level: usize) -> (f64, f64) {
        let n = self.basis_size;
        let w = self.basis_frequency;
        let mut p2 = vec![vec![0.0; n]; n];
        for k in 0..n {
            p2[k][k] = 0.5 * w * (2 * k + 1) as f64;
            if k + 2 < n {
                let v = -0.5 * w * (((k + 1) * (k + 2)) as f64).sqrt();
                p2[k][k + 2] = v;
                p2[k + 2][k] = v;
            }
        }
        let (x2, x4) = moment_matrices(n, w);
        let xv: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.params.m2 * x2[i][j] + 4.0 * self.params.lambda * x4[i][j])
                    .collect()
            })
            .collect();
        (self.expectation(level, &p2), self.expectation(level, &xv))
    }
}

pub fn exact_free_energy(s: &SpectralSolution, beta: f64) -> Result<FreeEnergyResult> {
    let bound = s.check_tail(beta)?;
    let z_shifted = pairwise_sum(&s.weights(beta));
    Ok(FreeEnergyResult {
        beta,
        f: s.energies[0] - z_shifted.ln() / beta,
        method: Method::Exact,
        omega_diag: s.basis_frequency,
        error_estimate: bound,
    })
}

/// Exact thermal density `Σ e^{−βE_n}|ψ_n(x)|² / Z`.
pub fn exact_density(s: &SpectralSolution, beta: f64, grid: &[f64]) -> Result<DensityProfile> {
    s.check_tail(beta)?;
    let w = s.weights(beta);
    let z = pairwise_sum(&w);
    let rho = grid
        .iter()
        .map(|&x| {
            let psi = s.eigenfunctions(x)?;
            let terms: Vec<f64> = w.iter().zip(&psi).map(|(wn, p)| wn * p * p).collect();
            Ok(pairwise_sum(&terms) / z)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DensityProfile::new(grid.to_vec(), rho, beta))
}

pub fn exact_density_matrix(
    s: &SpectralSolution,
    beta: f64,
    x_a: f64,
    x_b: f64,
) -> Result<DensityMatrixEntry> {
    s.check_tail(beta)?;
    let w = s.weights(beta);
    let z = pairwise_sum(&w);
    let pa = s.eigenfunctions(x_a)?;
    let pb = s.eigenfunctions(x_b)?;
    let terms: Vec<f64> = w
        .iter()
        .zip(pa.iter().zip(&pb))
        .map(|(wn, (a, b))| wn * a * b)
        .collect();
    Ok(DensityMatrixEntry {
        x_a,
        x_b,
        value: pairwise_sum(&terms) / z,
        beta,
    })
}
