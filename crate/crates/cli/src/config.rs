//! Run configuration: flags merged over an optional key=value file.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use oep_core::observables::linspace;
use oep_core::oep::GapOptions;
use oep_core::oracle::DEFAULT_BASIS;
use oep_core::quadrature::QuadOptions;
use oep_core::thermo::ThermoOptions;
use oep_core::{Method, OscillatorParams};

use crate::args::{CommonArgs, PropagatorArgs};
use crate::CliError;

const KNOWN_KEYS: [&str; 16] = [
    "m2",
    "lambda",
    "beta",
    "x-grid",
    "methods",
    "out",
    "tol-root",
    "tol-quad",
    "basis-size",
    "basis-omega",
    "x-a",
    "x-b",
    "time",
    "mode",
    "omega",
    "config",
];

/// Values read from a `--config` file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key=value", n + 1))
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) || key == "config" {
                return Err(CliError::Config(format!(
                    "config line {}: unknown key '{key}'",
                    n + 1
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: Option<&PathBuf>) -> Result<Self, CliError> {
        match path {
            None => Ok(ConfigFile::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                ConfigFile::parse(&text)
            }
        }
    }

    /// Flag value if given, else the file value parsed as `T`.
    fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|e| {
                CliError::Config(format!("config key {key}: cannot parse '{v}': {e}"))
            }),
        }
    }
}

/// Parsed grid together with its source text (echoed in output headers).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub text: String,
    pub values: Vec<f64>,
}

fn parse_number(s: &str, what: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{what}: '{s}' is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{what}: '{s}' is not finite")))
    }
}

/// `v`, `v1,v2,…`, `start:stop:count` or `log:start:stop:count`; endpoints
/// inclusive, result strictly increasing.
pub fn parse_grid(text: &str, what: &str) -> Result<Grid, CliError> {
    let text = text.trim();
    let (log, body) = match text.strip_prefix("log:") {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let values = if body.contains(':') {
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!(
                "{what}: expected start:stop:count, got '{text}'"
            )));
        }
        let start = parse_number(parts[0], what)?;
        let stop = parse_number(parts[1], what)?;
        let count: usize = parts[2].trim().parse().map_err(|_| {
            CliError::Config(format!(
                "{what}: count '{}' is not a positive integer",
                parts[2]
            ))
        })?;
        if count == 0 {
            return Err(CliError::Config(format!("{what}: count must be positive")));
        }
        if log {
            if start <= 0.0 || stop <= 0.0 {
                return Err(CliError::Config(format!(
                    "{what}: log grid needs positive endpoints"
                )));
            }
            linspace(start.ln(), stop.ln(), count)
                .into_iter()
                .enumerate()
                .map(|(k, l)| match k {
                    0 => start,
                    k if k + 1 == count => stop,
                    _ => l.exp(),
                })
                .collect()
        } else {
            linspace(start, stop, count)
        }
    } else if log {
        return Err(CliError::Config(format!(
            "{what}: log: prefix needs start:stop:count"
        )));
    } else {
        body.split(',')
            .map(|s| parse_number(s, what))
            .collect::<Result<Vec<f64>, _>>()?
    };
    if values.is_empty() {
        return Err(CliError::Config(format!("{what}: empty grid")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(format!(
            "{what}: grid must be strictly increasing"
        )));
    }
    Ok(Grid {
        text: text.to_string(),
        values,
    })
}

fn parse_methods(text: &str) -> Result<Vec<Method>, CliError> {
    let mut methods = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.parse::<Method>()
                .map_err(|e| CliError::Config(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    methods.sort();
    methods.dedup();
    if methods.is_empty() {
        return Err(CliError::Config("at least one method is required".into()));
    }
    Ok(methods)
}

fn positive(v: Option<f64>, what: &str) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::Config(format!(
            "{what} must be positive, got {x}"
        ))),
        other => Ok(other),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: OscillatorParams,
    pub methods: Vec<Method>,
    pub beta: Option<Grid>,
    pub x_grid: Option<Grid>,
    pub out: Option<PathBuf>,
    pub tol_root: f64,
    pub tol_quad: f64,
    pub basis_size: usize,
    /// `None`: chosen from the parameters and the basis size.
    pub basis_omega: Option<f64>,
}

impl RunConfig {
    pub fn from_args(
        args: &CommonArgs,
        default_methods: &[Method],
    ) -> Result<(Self, ConfigFile), CliError> {
        let file = ConfigFile::load(args.config.as_ref())?;
        let m2: f64 = file
            .pick(args.m2, "m2")?
            .ok_or_else(|| CliError::Config("--m2 is required".into()))?;
        let lambda: f64 = file
            .pick(args.lambda, "lambda")?
            .ok_or_else(|| CliError::Config("--lambda is required".into()))?;
        let params =
            OscillatorParams::new(m2, lambda).map_err(|e| CliError::Config(e.to_string()))?;
        let methods = match file.pick(args.methods.clone(), "methods")? {
            Some(text) => parse_methods(&text)?,
            None => default_methods.to_vec(),
        };
        let beta = file
            .pick(args.beta.clone(), "beta")?
            .map(|s| parse_grid(&s, "beta"))
            .transpose()?;
        if let Some(b) = &beta {
            if b.values.iter().any(|&v| v <= 0.0) {
                return Err(CliError::Config("beta values must be positive".into()));
            }
        }
        let x_grid = file
            .pick(args.x_grid.clone(), "x-grid")?
            .map(|s| parse_grid(&s, "x-grid"))
            .transpose()?;
        let defaults = ThermoOptions::default();
        let tol_root = positive(file.pick(args.tol_root, "tol-root")?, "tol-root")?
            .unwrap_or(defaults.gap.bracket_rel_width);
        let tol_quad = positive(file.pick(args.tol_quad, "tol-quad")?, "tol-quad")?
            .unwrap_or(defaults.quad.rel_tol);
        let basis_size = file
            .pick(args.basis_size, "basis-size")?
            .unwrap_or(DEFAULT_BASIS);
        if basis_size < oep_core::oracle::MIN_BASIS {
            return Err(CliError::Config(format!(
                "basis-size must be at least {}",
                oep_core::oracle::MIN_BASIS
            )));
        }
        let basis_omega = positive(file.pick(args.basis_omega, "basis-omega")?, "basis-omega")?;
        let out = file
            .pick(args.out.as_ref().map(|p| p.display().to_string()), "out")?
            .map(PathBuf::from);
        Ok((
            RunConfig {
                params,
                methods,
                beta,
                x_grid,
                out,
                tol_root,
                tol_quad,
                basis_size,
                basis_omega,
            },
            file,
        ))
    }

    pub fn gap_options(&self) -> GapOptions {
        GapOptions {
            bracket_rel_width: self.tol_root,
            ..GapOptions::default()
        }
    }

    pub fn thermo_options(&self) -> ThermoOptions {
        let defaults = ThermoOptions::default();
        ThermoOptions {
            quad: QuadOptions {
                rel_tol: self.tol_quad,
                ..defaults.quad
            },
            gap: self.gap_options(),
            ..defaults
        }
    }

    pub fn basis_frequency(&self) -> f64 {
        self.basis_omega.unwrap_or_else(|| {
            oep_core::oracle::default_basis_frequency(&self.params, self.basis_size)
        })
    }

    pub fn require_beta(&self) -> Result<&Grid, CliError> {
        self.beta
            .as_ref()
            .ok_or_else(|| CliError::Config("--beta is required".into()))
    }

    /// `# key=value` lines describing the resolved configuration.
    pub fn echo(&self, command: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!("# oep {command}\n"));
        s.push_str(&format!("# version={}\n", oep_core::VERSION));
        s.push_str(&format!("# m2={}\n", self.params.m2));
        s.push_str(&format!("# lambda={}\n", self.params.lambda));
        if let Some(b) = &self.beta {
            s.push_str(&format!("# beta={}\n", b.text));
        }
        if let Some(g) = &self.x_grid {
            s.push_str(&format!("# x-grid={}\n", g.text));
        }
        let names: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        s.push_str(&format!("# methods={}\n", names.join(",")));
        s.push_str(&format!("# tol-root={}\n", self.tol_root));
        s.push_str(&format!("# tol-quad={}\n", self.tol_quad));
        s.push_str(&format!("# basis-size={}\n", self.basis_size));
        s.push_str(&format!("# basis-omega={}\n", self.basis_frequency()));
        s
    }
}

/// Endpoint, time and mode of a `propagator` run.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorConfig {
    pub run: RunConfig,
    pub x_a: f64,
    pub x_b: f64,
    pub time: f64,
    pub real: bool,
    pub omega: Option<f64>,
}

impl PropagatorConfig {
    pub fn from_args(args: &PropagatorArgs) -> Result<Self, CliError> {
        let (run, file) = RunConfig::from_args(&args.common, &[Method::Oep])?;
        let x_a = file
            .pick(args.x_a, "x-a")?
            .ok_or_else(|| CliError::Config("--x-a is required".into()))?;
        let x_b = file
            .pick(args.x_b, "x-b")?
            .ok_or_else(|| CliError::Config("--x-b is required".into()))?;
        let mode = file
            .pick(args.mode.clone(), "mode")?
            .unwrap_or_else(|| "imag".to_string());
        let real = match mode.as_str() {
            "real" => true,
            "imag" => false,
            other => {
                return Err(CliError::Config(format!(
                    "--mode must be real or imag, got '{other}'"
                )))
            }
        };
        let time = match file.pick(args.time, "time")? {
            Some(t) => t,
            None if !real => match &run.beta {
                Some(b) if b.values.len() == 1 => b.values[0],
                _ => {
                    return Err(CliError::Config(
                        "--time (or a single --beta) is required".into(),
                    ))
                }
            },
            None => return Err(CliError::Config("--time is required".into())),
        };
        if !(time > 0.0 && time.is_finite()) {
            return Err(CliError::Config(format!(
                "time must be positive, got {time}"
            )));
        }
        let omega = file.pick(args.omega, "omega")?;
        if let Some(w) = omega {
            if !w.is_finite() || (real && w <= 0.0) || w == 0.0 {
                return Err(CliError::Config(format!(
                    "invalid forced trial frequency {w}"
                )));
            }
        }
        for v in [x_a, x_b] {
            if !v.is_finite() {
                return Err(CliError::Config("endpoints must be finite".into()));
            }
        }
        Ok(PropagatorConfig {
            run,
            x_a,
            x_b,
            time,
            real,
            omega,
        })
    }
}
