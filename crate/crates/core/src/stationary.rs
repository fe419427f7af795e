//! Stationary-point search for one-parameter approximants.
//!
//! The residual `g(ω) = dF/dω` is scanned on a logarithmic grid, the largest
//! sign change is bisected and then polished with Newton steps. When the scan
//! finds no sign change the minimal-sensitivity point (minimum of `|g|/ω`) is
//! returned instead and flagged.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapOptions {
    /// Number of points of the logarithmic scan.
    pub grid_points: usize,
    /// The scan covers `[ω_ref / span, ω_ref · span]`.
    pub span: f64,
    /// Bisection stops once the bracket is narrower than this times `ω`.
    pub bracket_rel_width: f64,
    pub newton_steps: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions {
            grid_points: 200,
            span: 1e2,
            bracket_rel_width: 1e-12,
            newton_steps: 3,
        }
    }
}

/// Optimized trial frequency and how it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSolution {
    pub omega_star: f64,
    /// `|dW/dω|` at `omega_star`.
    pub residual: f64,
    /// Stationary points (sign changes) seen in the scan window.
    pub n_roots: usize,
    pub bracket: (f64, f64),
    pub fallback_used: bool,
}

const MAX_BISECTIONS: usize = 400;

pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k + 1 == n {
                hi
            } else {
                (llo + (lhi - llo) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Real residual on the default logarithmic scan: `eval(ω)` returns `(g, g')`.
pub(crate) fn solve_real<F>(eval: F, omega_ref: f64, opts: &GapOptions) -> Result<GapSolution>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let grid = log_grid(
        omega_ref / opts.span,
        omega_ref * opts.span,
        opts.grid_points.max(3),
    );
    // |g|/ω removes the trivial zero of a residual odd in ω
    solve_on_grid(eval, &grid, |w, g| g.abs() / w, opts)
}

/// Scan `grid` (ascending), bisect the last sign change and polish with
/// Newton steps. Without a sign change, minimize `sensitivity(x, g)`.
pub(crate) fn solve_on_grid<F, S>(
    eval: F,
    grid: &[f64],
    sensitivity: S,
    opts: &GapOptions,
) -> Result<GapSolution>
where
    F: Fn(f64) -> Result<(f64, f64)>,
    S: Fn(f64, f64) -> f64,
{
    let mut vals = Vec::with_capacity(grid.len());
    for &w in grid {
        let (g, _) = eval(w)?;
        if !g.is_finite() {
            return Err(Error::NonFinite("gap residual"));
        }
        vals.push(g);
    }

    // sign changes, including exact zeros on the grid
    let mut roots: Vec<(f64, f64)> = Vec::new();
    for k in 0..grid.len() {
        if vals[k] == 0.0 {
            roots.push((grid[k], grid[k]));
        } else if k + 1 < grid.len() && vals[k + 1] != 0.0 && (vals[k] < 0.0) != (vals[k + 1] < 0.0)
        {
            roots.push((grid[k], grid[k + 1]));
        }
    }

    let Some(&(mut a, mut b)) = roots.last() else {
        let measure = |w: f64| eval(w).map(|(g, _)| sensitivity(w, g));
        let samples: Vec<f64> = vals
            .iter()
            .zip(grid)
            .map(|(g, &w)| sensitivity(w, *g))
            .collect();
        return minimal_sensitivity(
            measure,
            |w| eval(w).map(|(g, _)| g.abs()),
            grid,
            &samples,
            0,
        );
    };
    let n_roots = roots.len();
    let mut ga = eval(a)?.0;
    for _ in 0..MAX_BISECTIONS {
        if b - a <= opts.bracket_rel_width * a.abs().max(b.abs()) {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = eval(m)?.0;
        if gm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    let mut omega = 0.5 * (a + b);
    let (mut g, mut dg) = eval(omega)?;
    for _ in 0..opts.newton_steps {
        if g == 0.0 || dg == 0.0 || !dg.is_finite() {
            break;
        }
        let next = omega - g / dg;
        if !(next >= a && next <= b) {
            break;
        }
        let (gn, dgn) = eval(next)?;
        if gn.abs() >= g.abs() {
            break;
        }
        omega = next;
        g = gn;
        dg = dgn;
    }
    Ok(GapSolution {
        omega_star: omega,
        residual: g.abs(),
        n_roots,
        bracket: (a, b),
        fallback_used: false,
    })
}

/// Minimize the sensitivity `measure` (already sampled on `grid`) by
/// golden-section search around the best grid point.
pub(crate) fn minimal_sensitivity<M, F>(
    measure: M,
    abs_g: F,
    grid: &[f64],
    samples: &[f64],
    n_roots: usize,
) -> Result<GapSolution>
where
    M: Fn(f64) -> Result<f64>,
    F: Fn(f64) -> Result<f64>,
{
    let (k, _) = samples
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|x, y| x.1.total_cmp(y.1))
        .ok_or(Error::NoStationaryPoint {
            lo: grid[0],
            hi: grid[grid.len() - 1],
        })?;
    let mut a = grid[k.saturating_sub(1)];
    let mut b = grid[(k + 1).min(grid.len() - 1)];
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = measure(c)?;
    let mut fd = measure(d)?;
    for _ in 0..200 {
        if b - a <= 1e-13 * a.abs().max(b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = measure(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = measure(d)?;
        }
    }
    let mut omega = 0.5 * (a + b);
    if measure(omega)? > samples[k] {
        omega = grid[k];
    }
    let residual = abs_g(omega)?;
    Ok(GapSolution {
        omega_star: omega,
        residual,
        n_roots,
        bracket: (a.min(omega), b.max(omega)),
        fallback_used: true,
    })
}
