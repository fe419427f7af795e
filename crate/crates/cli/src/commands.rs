use num_complex::Complex64;
use oep_core::fk::free_energy_fk;
use oep_core::observables::linspace;
use oep_core::oef::free_energy_oef;
use oep_core::oep::{
    amplitude_imag_with, gap_residual_real, optimize_omega_complex_time, w1_imag,
    w1_imag_square_derivatives, w1_real, GapSolution,
};
use oep_core::oracle::{
    exact_density, exact_density_matrix, exact_free_energy, solve_spectrum, SpectralSolution,
};
use oep_core::thermo::{
    default_density_grid, density_matrix_with_partition, density_with_partition, initial_cutoff,
    partition_function_oep, PartitionFunction,
};
use oep_core::{Error, EuclideanPoint, Execution, FreeEnergyResult, Method, RealTimePoint};

use crate::args::Command;
use crate::config::{PropagatorConfig, RunConfig};
use crate::output::{emit, num};
use crate::CliError;

const DENSITY_MATRIX_POINTS: usize = 41;

pub fn run(command: &Command) -> Result<(), CliError> {
    match command {
        Command::FreeEnergy(a) => free_energy(&RunConfig::from_args(a, &Method::ALL)?.0),
        Command::Density(a) => density(&RunConfig::from_args(a, &[Method::Exact, Method::Oep])?.0),
        Command::DensityMatrix(a) => {
            density_matrix(&RunConfig::from_args(a, &[Method::Exact, Method::Oep])?.0)
        }
        Command::ExactSpectrum(a) => exact_spectrum(&RunConfig::from_args(a, &[Method::Exact])?.0),
        Command::Propagator(a) => propagator(&PropagatorConfig::from_args(a)?),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<SpectralSolution, Error> {
    solve_spectrum(&cfg.params, cfg.basis_size, cfg.basis_frequency())
}

fn single_beta(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.require_beta()?.values.as_slice() {
        [b] => Ok(*b),
        _ => Err(CliError::Config(
            "this command takes a single --beta value".into(),
        )),
    }
}

fn only_density_methods(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg
        .methods
        .iter()
        .find(|m| !matches!(m, Method::Oep | Method::Exact))
    {
        Some(m) => Err(CliError::Config(format!(
            "method {m} has no density; use OEP or EXACT"
        ))),
        None => Ok(()),
    }
}

fn free_energy(cfg: &RunConfig) -> Result<(), CliError> {
    let betas = &cfg.require_beta()?.values;
    let opts = cfg.thermo_options();
    let gap = cfg.gap_options();
    let exact = cfg.methods.contains(&Method::Exact).then(|| spectrum(cfg));
    let tasks: Vec<(f64, Method)> = betas
        .iter()
        .flat_map(|&b| cfg.methods.iter().map(move |&m| (b, m)))
        .collect();
    let results: Vec<Result<FreeEnergyResult, Error>> =
        Execution::Parallel.map(&tasks, |&(beta, method)| match method {
            Method::Oep => oep_core::thermo::free_energy_oep(&cfg.params, beta, &opts),
            Method::Oef => free_energy_oef(&cfg.params, beta, &gap),
            Method::Fk => free_energy_fk(&cfg.params, beta, &opts),
            Method::Exact => match exact
                .as_ref()
                .expect("spectrum solved when EXACT requested")
            {
                Ok(s) => exact_free_energy(s, beta),
                Err(e) => Err(e.clone()),
            },
        });

    let mut text = cfg.echo("free-energy");
    text.push_str("beta,method,F,omega_diag,err_est,error\n");
    for ((beta, method), r) in tasks.iter().zip(&results) {
        match r {
            Ok(r) => text.push_str(&format!(
                "{},{},{},{},{},\n",
                num(*beta),
                method,
                num(r.f),
                num(r.omega_diag),
                num(r.error_estimate)
            )),
            Err(e) => text.push_str(&format!("{},{},,,,{}\n", num(*beta), method, e.code())),
        }
    }
    emit(&text, cfg.out.as_deref())?;
    if results.iter().all(Result::is_err) {
        return Err(CliError::AllFailed);
    }
    Ok(())
}

/// Grid from `--x-grid`, else `n` points over the OEP partition-function
/// cutoff (or the starting cutoff when `Z` is unavailable).
fn resolve_grid(cfg: &RunConfig, beta: f64, z: Option<&PartitionFunction>, n: usize) -> Vec<f64> {
    if let Some(g) = &cfg.x_grid {
        return g.values.clone();
    }
    let cutoff = z.map_or_else(|| initial_cutoff(&cfg.params, beta), |z| z.cutoff);
    linspace(-cutoff, cutoff, n)
}

fn density(cfg: &RunConfig) -> Result<(), CliError> {
    only_density_methods(cfg)?;
    let beta = single_beta(cfg)?;
    let opts = cfg.thermo_options();
    let z = partition_function_oep(&cfg.params, beta, &opts);
    let grid = match (&cfg.x_grid, &z) {
        (None, Ok(z)) => default_density_grid(z),
        _ => resolve_grid(
            cfg,
            beta,
            z.as_ref().ok(),
            oep_core::thermo::DEFAULT_DENSITY_POINTS,
        ),
    };

    let mut text = cfg.echo("density");
    text.push_str("x,method,rho\n");
    let mut footer = String::new();
    let mut any_ok = false;
    for &method in &cfg.methods {
        let profile = match method {
            Method::Oep => z
                .clone()
                .and_then(|z| density_with_partition(&cfg.params, beta, &z, &grid, &opts)),
            _ => spectrum(cfg).and_then(|s| exact_density(&s, beta, &grid)),
        };
        match profile {
            Ok(d) => {
                any_ok = true;
                for (x, r) in d.grid.iter().zip(&d.rho) {
                    text.push_str(&format!("{},{},{}\n", num(*x), method, num(*r)));
                }
                footer.push_str(&format!(
                    "# normalization method={method} error={}\n",
                    num(d.normalization_error)
                ));
            }
            Err(e) => footer.push_str(&format!("# method={method} error={}: {e}\n", e.code())),
        }
    }
    text.push_str(&footer);
    emit(&text, cfg.out.as_deref())?;
    if any_ok {
        Ok(())
    } else {
        Err(CliError::AllFailed)
    }
}

fn density_matrix(cfg: &RunConfig) -> Result<(), CliError> {
    only_density_methods(cfg)?;
    let beta = single_beta(cfg)?;
    let opts = cfg.thermo_options();
    let z = partition_function_oep(&cfg.params, beta, &opts);
    let grid = resolve_grid(cfg, beta, z.as_ref().ok(), DENSITY_MATRIX_POINTS);
    let pairs: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&a| grid.iter().map(move |&b| (a, b)))
        .collect();

    let mut text = cfg.echo("density-matrix");
    text.push_str("x_a,x_b,method,rho\n");
    let mut footer = String::new();
    let mut any_ok = false;
    for &method in &cfg.methods {
        let entries = match method {
            Method::Oep => z
                .clone()
                .and_then(|z| density_matrix_with_partition(&cfg.params, beta, &z, &pairs, &opts)),
            _ => spectrum(cfg).and_then(|s| {
                Execution::Parallel
                    .map(&pairs, |&(a, b)| exact_density_matrix(&s, beta, a, b))
                    .into_iter()
                    .collect()
            }),
        };
        match entries {
            Ok(entries) => {
                any_ok = true;
                for e in entries {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        num(e.x_a),
                        num(e.x_b),
                        method,
                        num(e.value)
                    ));
                }
            }
            Err(e) => footer.push_str(&format!("# method={method} error={}: {e}\n", e.code())),
        }
    }
    text.push_str(&footer);
    emit(&text, cfg.out.as_deref())?;
    if any_ok {
        Ok(())
    } else {
        Err(CliError::AllFailed)
    }
}

fn exact_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let s = spectrum(cfg)?;
    let mut text = cfg.echo("exact-spectrum");
    text.push_str("n,energy\n");
    for (n, e) in s.energies.iter().take(s.reliable_levels()).enumerate() {
        text.push_str(&format!("{n},{}\n", num(*e)));
    }
    emit(&text, cfg.out.as_deref())
}

struct PropagatorResult {
    w: Complex64,
    gap: GapSolution,
    forced: bool,
}

fn propagate(cfg: &PropagatorConfig) -> Result<PropagatorResult, Error> {
    let params = &cfg.run.params;
    let gap_opts = cfg.run.gap_options();
    if cfg.real {
        let p = RealTimePoint::new(cfg.x_a, cfg.x_b, cfg.time)?;
        let (gap, forced) = match cfg.omega {
            Some(w) => {
                let residual = gap_residual_real(params, &p, w)?.norm();
                (
                    GapSolution {
                        omega_star: w,
                        residual,
                        n_roots: 0,
                        bracket: (w, w),
                        fallback_used: false,
                    },
                    true,
                )
            }
            None => (
                optimize_omega_complex_time(
                    params,
                    p.x_a,
                    p.x_b,
                    Complex64::new(p.time, 0.0),
                    &gap_opts,
                )?,
                false,
            ),
        };
        let w = w1_real(params, &p, gap.omega_star)?;
        Ok(PropagatorResult { w, gap, forced })
    } else {
        let p = EuclideanPoint::new(cfg.x_a, cfg.x_b, cfg.time)?;
        match cfg.omega {
            Some(w) => {
                let value = w1_imag(params, &p, w)?;
                let (_, du, _) = w1_imag_square_derivatives(params, &p, w.signum() * w * w)?;
                let residual = 2.0 * w.abs() * du.abs();
                let gap = GapSolution {
                    omega_star: w,
                    residual,
                    n_roots: 0,
                    bracket: (w, w),
                    fallback_used: false,
                };
                Ok(PropagatorResult {
                    w: Complex64::new(value, 0.0),
                    gap,
                    forced: true,
                })
            }
            None => {
                let a = amplitude_imag_with(params, &p, &gap_opts)?;
                Ok(PropagatorResult {
                    w: Complex64::new(a.w_value, 0.0),
                    gap: a.gap,
                    forced: false,
                })
            }
        }
    }
}

fn propagator(cfg: &PropagatorConfig) -> Result<(), CliError> {
    let r = propagate(cfg)?;
    let mut lines = vec![
        format!("mode={}", if cfg.real { "real" } else { "imag" }),
        format!("m2={}", cfg.run.params.m2),
        format!("lambda={}", cfg.run.params.lambda),
        format!("x_a={}", cfg.x_a),
        format!("x_b={}", cfg.x_b),
        format!("time={}", cfg.time),
        format!("omega_star={}", r.gap.omega_star),
    ];
    if cfg.real {
        let a = r.w.exp();
        lines.push(format!("W_re={}", r.w.re));
        lines.push(format!("W_im={}", r.w.im));
        lines.push(format!("amplitude_re={}", a.re));
        lines.push(format!("amplitude_im={}", a.im));
    } else {
        lines.push(format!("W={}", r.w.re));
        lines.push(format!("amplitude={}", r.w.re.exp()));
    }
    lines.push(format!("residual={}", r.gap.residual));
    lines.push(format!("n_roots={}", r.gap.n_roots));
    lines.push(format!("fallback_used={}", r.gap.fallback_used));
    lines.push(format!("forced_omega={}", r.forced));
    lines.push(format!("version={}", oep_core::VERSION));
    let mut text = lines.join("\n");
    text.push('\n');
    emit(&text, cfg.run.out.as_deref())
}
