use std::collections::HashMap;
use std::process::{Command, Output};

use oep_core::oep::amplitude_imag;
use oep_core::{EuclideanPoint, OscillatorParams};

fn oep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn oep_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oep"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows (non-comment, non-header) split on commas.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn key_values(text: &str) -> HashMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

#[test]
fn free_energy_sweep_has_one_row_per_beta_and_method() {
    let text = stdout(&oep(&[
        "free-energy",
        "--m2",
        "0",
        "--lambda",
        "1",
        "--beta",
        "0.1:10:50",
    ]));
    assert!(text
        .lines()
        .any(|l| l == "beta,method,F,omega_diag,err_est,error"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 200);
    let mut by_beta: HashMap<String, HashMap<String, f64>> = HashMap::new();
    for r in &rows {
        assert_eq!(r.len(), 6);
        if r[5].is_empty() {
            by_beta
                .entry(r[0].clone())
                .or_default()
                .insert(r[1].clone(), r[2].parse().unwrap());
        }
    }
    // every approximate free energy is an upper bound on the exact one
    for (beta, m) in &by_beta {
        if let Some(&exact) = m.get("EXACT") {
            for method in ["OEP", "OEF", "FK"] {
                if let Some(&f) = m.get(method) {
                    assert!(
                        f >= exact - 1e-9 * exact.abs(),
                        "beta {beta} {method}: {f} < {exact}"
                    );
                }
            }
        }
    }
}

#[test]
fn harmonic_limit_all_methods_agree() {
    let text = stdout(&oep(&[
        "free-energy",
        "--m2",
        "1",
        "--lambda",
        "0",
        "--beta",
        "0.5,1,5",
    ]));
    let rows = rows(&text);
    assert_eq!(rows.len(), 12);
    for r in rows {
        let beta: f64 = r[0].parse().unwrap();
        let exact = (2.0 * (beta / 2.0).sinh()).ln() / beta;
        let f: f64 = r[2].parse().unwrap();
        assert!((f - exact).abs() < 1e-7, "{r:?} vs {exact}");
    }
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = [
        "free-energy",
        "--m2",
        "-1",
        "--lambda",
        "0.1",
        "--beta",
        "0.5:5:4",
    ];
    let one = oep_threads(&args, "1");
    let four = oep_threads(&args, "4");
    assert_eq!(stdout(&one), stdout(&four));
    let dargs = ["density", "--m2", "-1", "--lambda", "0.1", "--beta", "2"];
    assert_eq!(
        stdout(&oep_threads(&dargs, "1")),
        stdout(&oep_threads(&dargs, "4"))
    );
}

#[test]
fn propagator_imaginary_time_harmonic() {
    let kv = key_values(&stdout(&oep(&[
        "propagator",
        "--m2",
        "1",
        "--lambda",
        "0",
        "--x-a",
        "0",
        "--x-b",
        "0",
        "--time",
        "1",
    ])));
    let w: f64 = kv["W"].parse().unwrap();
    let omega: f64 = kv["omega_star"].parse().unwrap();
    assert!((w - (-0.999_658_213_990_270_7)).abs() < 1e-6, "{w}");
    assert!((omega - 1.0).abs() < 1e-8);
    assert_eq!(kv["mode"], "imag");
}

#[test]
fn propagator_matches_library_bit_for_bit() {
    let kv = key_values(&stdout(&oep(&[
        "propagator",
        "--m2",
        "0",
        "--lambda",
        "1",
        "--x-a",
        "0",
        "--x-b",
        "0",
        "--time",
        "5",
    ])));
    let p = OscillatorParams::new(0.0, 1.0).unwrap();
    let a = amplitude_imag(&p, &EuclideanPoint::diagonal(0.0, 5.0).unwrap()).unwrap();
    assert_eq!(
        kv["W"].parse::<f64>().unwrap().to_bits(),
        a.w_value.to_bits()
    );
    assert_eq!(
        kv["omega_star"].parse::<f64>().unwrap().to_bits(),
        a.gap.omega_star.to_bits()
    );
}

#[test]
fn propagator_at_caustic_fails() {
    let o = oep(&[
        "propagator",
        "--m2",
        "1",
        "--lambda",
        "0",
        "--x-a",
        "0.2",
        "--x-b",
        "0.1",
        "--time",
        "3.141592653589793",
        "--mode",
        "real",
        "--omega",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Caustic"));
}

#[test]
fn propagator_real_time_reports_complex_phase() {
    let kv = key_values(&stdout(&oep(&[
        "propagator",
        "--m2",
        "1",
        "--lambda",
        "0",
        "--x-a",
        "0.3",
        "--x-b",
        "-0.4",
        "--time",
        "1.1",
        "--mode",
        "real",
    ])));
    let (re, im): (f64, f64) = (kv["W_re"].parse().unwrap(), kv["W_im"].parse().unwrap());
    // Mehler kernel: W = −½ln(2πi sin T) + i((x_a² + x_b²)cos T − 2x_a x_b)/(2 sin T)
    let (t, xa, xb) = (1.1f64, 0.3f64, -0.4f64);
    let expect_re = -0.5 * (2.0 * std::f64::consts::PI * t.sin()).ln();
    let expect_im = -std::f64::consts::FRAC_PI_4
        + ((xa * xa + xb * xb) * t.cos() - 2.0 * xa * xb) / (2.0 * t.sin());
    assert!((re - expect_re).abs() < 1e-10, "{re} vs {expect_re}");
    assert!((im - expect_im).abs() < 1e-10, "{im} vs {expect_im}");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# harmonic sweep\nm2 = 4\nlambda = 0\nbeta = 1\nmethods = OEF\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = rows(&stdout(&oep(&["free-energy", "--config", cfg])));
    assert_eq!(from_file.len(), 1);
    let f: f64 = from_file[0][2].parse().unwrap();
    assert!((f - (2.0 * 1f64.sinh()).ln()).abs() < 1e-9, "{f}");

    let out = dir.path().join("out.csv");
    let o = oep(&[
        "free-energy",
        "--config",
        cfg,
        "--m2",
        "1",
        "--beta",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# m2=1\n"));
    let f: f64 = rows(&text)[0][2].parse().unwrap();
    assert!((f - (2.0 * 1f64.sinh()).ln() / 2.0).abs() < 1e-9, "{f}");
}

#[test]
fn bad_configuration_exits_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "m2 = 0\ncolour = blue\n").unwrap();
    let o = oep(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--lambda",
        "1",
        "--beta",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    for args in [
        vec!["free-energy", "--m2", "0", "--lambda", "-1", "--beta", "1"],
        vec!["free-energy", "--m2", "0", "--lambda", "1", "--beta", "2,1"],
        vec![
            "free-energy",
            "--m2",
            "0",
            "--lambda",
            "1",
            "--beta",
            "1",
            "--methods",
            "WKB",
        ],
        vec![
            "density",
            "--m2",
            "0",
            "--lambda",
            "1",
            "--beta",
            "1",
            "--methods",
            "FK",
        ],
        vec!["density", "--m2", "0", "--lambda", "1", "--beta", "1,2"],
        vec![
            "propagator",
            "--m2",
            "0",
            "--lambda",
            "1",
            "--x-a",
            "0",
            "--time",
            "1",
        ],
    ] {
        assert_eq!(oep(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn density_is_even_and_normalized() {
    let text = stdout(&oep(&[
        "density", "--m2", "-1", "--lambda", "0.1", "--beta", "1", "--x-grid", "-6:6:121",
    ]));
    for method in ["OEP", "EXACT"] {
        let rho: Vec<f64> = rows(&text)
            .iter()
            .filter(|r| r[1] == method)
            .map(|r| r[2].parse().unwrap())
            .collect();
        assert_eq!(rho.len(), 121);
        for i in 0..rho.len() {
            assert!(
                (rho[i] - rho[120 - i]).abs() <= 1e-12 * rho[60].max(rho[i]),
                "{method} {i}"
            );
        }
    }
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("# normalization"))
            .count(),
        2
    );
}

#[test]
fn density_matrix_is_symmetric() {
    let text = stdout(&oep(&[
        "density-matrix",
        "--m2",
        "0",
        "--lambda",
        "1",
        "--beta",
        "1",
        "--x-grid",
        "-1,0.5,2",
        "--methods",
        "OEP",
    ]));
    let rows = rows(&text);
    assert_eq!(rows.len(), 9);
    let value = |a: &str, b: &str| -> f64 {
        rows.iter().find(|r| r[0] == a && r[1] == b).unwrap()[3]
            .parse()
            .unwrap()
    };
    let xs: Vec<String> = rows.iter().take(3).map(|r| r[1].clone()).collect();
    for a in &xs {
        for b in &xs {
            assert!((value(a, b) - value(b, a)).abs() <= 1e-10 * value(a, b));
        }
    }
}

#[test]
fn exact_spectrum_lists_reliable_levels() {
    let text = stdout(&oep(&[
        "exact-spectrum",
        "--m2",
        "0",
        "--lambda",
        "1",
        "--basis-size",
        "64",
    ]));
    let rows = rows(&text);
    assert_eq!(rows.len(), 32);
    let e0: f64 = rows[0][1].parse().unwrap();
    assert!((e0 - 0.667_986_259).abs() < 1e-8);
}
