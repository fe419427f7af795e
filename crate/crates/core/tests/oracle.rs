use oep_core::observables::linspace;
use oep_core::oracle::{
    default_basis_frequency, exact_density, exact_density_matrix, exact_free_energy, solve_spectrum,
};
use oep_core::OscillatorParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn quartic() -> OscillatorParams {
    OscillatorParams::new(0.0, 1.0).unwrap()
}

/// Lowest eigenvalue of the three-point finite-difference Hamiltonian on
/// `[−len, len]`, by Sturm-sequence bisection.
fn finite_difference_ground_state(params: &OscillatorParams, len: f64, n: usize) -> f64 {
    let h = 2.0 * len / (n + 1) as f64;
    let diag: Vec<f64> = (1..=n)
        .map(|i| 1.0 / (h * h) + params.potential(-len + i as f64 * h))
        .collect();
    let off = -0.5 / (h * h);
    let count_below = |e: f64| {
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in diag.iter().enumerate() {
            q = d - e - if i == 0 { 0.0 } else { off * off / q };
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    let (mut lo, mut hi) = (-10.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn ground_state_agrees_with_finite_differences() {
    let p = quartic();
    // Richardson extrapolation of the O(h²) scheme
    let coarse = finite_difference_ground_state(&p, 6.0, 1999);
    let fine = finite_difference_ground_state(&p, 6.0, 3999);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let s = solve_spectrum(&p, 128, default_basis_frequency(&p, 128)).unwrap();
    assert!(
        (s.energies[0] - extrapolated).abs() < 1e-7,
        "{} vs {extrapolated}",
        s.energies[0]
    );
    assert!((s.energies[0] - 0.667986).abs() < 1e-6);
}

#[test]
fn ground_state_stable_in_basis_size_and_frequency() {
    let p = quartic();
    let e64 = solve_spectrum(&p, 64, 2.0).unwrap().energies[0];
    let e128 = solve_spectrum(&p, 128, 2.0).unwrap().energies[0];
    assert!((e64 - e128).abs() < 1e-9);
    for omega in [1.5, 2.0, 3.0] {
        let e = solve_spectrum(&p, 128, omega).unwrap().energies[0];
        assert!((e - e128).abs() < 1e-9, "omega {omega}: {e}");
    }
}

#[test]
fn ground_state_decreases_with_basis_size() {
    let p = OscillatorParams::new(1.0, 10.0).unwrap();
    let energies: Vec<f64> = [16, 32, 64, 128]
        .iter()
        .map(|&n| solve_spectrum(&p, n, 1.0).unwrap().energies[0])
        .collect();
    assert!(
        energies.windows(2).all(|w| w[1] <= w[0] + 1e-12),
        "{energies:?}"
    );
}

#[test]
fn virial_theorem_holds() {
    for p in [
        quartic(),
        OscillatorParams::new(-1.0, 0.1).unwrap(),
        OscillatorParams::new(1.0, 10.0).unwrap(),
    ] {
        let s = solve_spectrum(&p, 128, default_basis_frequency(&p, 128)).unwrap();
        for level in 0..5 {
            let (p2, xv) = s.virial_pair(level);
            assert!(
                (p2 - xv).abs() < 1e-8 * p2.abs().max(1.0),
                "level {level}: {p2} vs {xv}"
            );
        }
    }
}

#[test]
fn eigenfunctions_are_orthonormal() {
    let p = OscillatorParams::new(-1.0, 0.1).unwrap();
    let s = solve_spectrum(&p, 64, default_basis_frequency(&p, 64)).unwrap();
    let grid = linspace(-12.0, 12.0, 4001);
    let h = grid[1] - grid[0];
    let psi: Vec<Vec<f64>> = grid.iter().map(|&x| s.eigenfunctions(x).unwrap()).collect();
    for a in 0..6 {
        for b in 0..6 {
            let dot: f64 = psi.iter().map(|v| v[a] * v[b]).sum::<f64>() * h;
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((dot - expect).abs() < 1e-10, "{a},{b}: {dot}");
        }
    }
}

#[test]
fn high_temperature_free_energy_converged_in_basis() {
    let p = quartic();
    let f = |n: usize| {
        exact_free_energy(
            &solve_spectrum(&p, n, default_basis_frequency(&p, n)).unwrap(),
            0.1,
        )
        .unwrap()
        .f
    };
    let (f256, f512) = (f(256), f(512));
    assert!((f256 - f512).abs() < 1e-10 * f512.abs(), "{f256} vs {f512}");
}

#[test]
fn harmonic_density_is_thermal_gaussian() {
    let s = solve_spectrum(&OscillatorParams::harmonic(1.0), 128, 1.0).unwrap();
    let grid = linspace(-5.0, 5.0, 101);
    let beta = 3.0;
    let d = exact_density(&s, beta, &grid).unwrap();
    let t = (beta / 2.0f64).tanh();
    for (x, r) in grid.iter().zip(&d.rho) {
        let exact = (t / std::f64::consts::PI).sqrt() * (-t * x * x).exp();
        assert!((r - exact).abs() < 1e-12);
    }
    assert!(d.normalization_error < 1e-8);
}

#[test]
fn density_matrix_is_symmetric_and_bounded() {
    let p = OscillatorParams::new(-1.0, 0.1).unwrap();
    let s = solve_spectrum(&p, 128, default_basis_frequency(&p, 128)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let (xa, xb) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let beta = rng.gen_range(0.5..5.0);
        let ab = exact_density_matrix(&s, beta, xa, xb).unwrap().value;
        let ba = exact_density_matrix(&s, beta, xb, xa).unwrap().value;
        let aa = exact_density_matrix(&s, beta, xa, xa).unwrap().value;
        let bb = exact_density_matrix(&s, beta, xb, xb).unwrap().value;
        assert!((ab - ba).abs() < 1e-14);
        assert!(ab * ab <= aa * bb * (1.0 + 1e-12));
        let diag = exact_density(&s, beta, &[xa]).unwrap().rho[0];
        assert!((aa - diag).abs() < 1e-14);
    }
}
