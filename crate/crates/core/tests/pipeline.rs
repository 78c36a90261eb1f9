mod common;

use common::{c, random_complex, random_model};
use discstat::conformal::{self, theodorsen_solve};
use discstat::hypersurface::PreparedDefiningFunction;
use discstat::slice_polar::SliceSolver;
use discstat::spectral;
use discstat::stationarity::{self, fourier_gamma, obstruction_solver};
use discstat::{fitted_order, geometric_grid, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn sphere_map_is_a_dilation() {
    let f = PreparedDefiningFunction::heisenberg();
    for n in [64, 256] {
        let curve = SliceSolver::new(&f).curve(0.15, n).unwrap();
        let cd = theodorsen_solve(&curve).unwrap();
        for (r, s) in cd.boundary_r.iter().zip(&cd.sigma_grid) {
            assert!((r - Complex64::from_polar(0.15, *s)).norm() < 1e-13);
        }
        let wm = stationarity::analyze_slice(&f, 0.15, n, 8).unwrap();
        assert!(wm.max_moment_residual() <= 1e-12);
    }
}

#[test]
fn weight_and_correspondence_tend_to_identity() {
    let f = PreparedDefiningFunction::with_umbilic(c(0.6, 0.8));
    let ts = geometric_grid(0.02, 0.2, 6);
    let solver = SliceSolver::new(&f);
    let mut dev_c = Vec::new();
    let mut dev_theta = Vec::new();
    for &t in &ts {
        let curve = solver.curve(t, 128).unwrap();
        let cd = theodorsen_solve(&curve).unwrap();
        dev_theta.push(cd.max_correspondence_deviation());
        let w = stationarity::pang_weight(&f, &cd, &curve).unwrap();
        dev_c.push(
            w.c_samples
                .iter()
                .map(|x| (x - 1.0).abs())
                .fold(0.0, f64::max),
        );
    }
    assert!(fitted_order(&ts, &dev_theta) > 3.8);
    assert!(fitted_order(&ts, &dev_c) > 3.8);
    assert!(dev_c[0] < 1e-6);
}

#[test]
fn random_models_give_consistent_weights() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..5 {
        let a = random_complex(&mut rng, 0.7);
        let f = random_model(&mut rng, a);
        let t = rng.gen_range(0.05..0.2);
        let curve = SliceSolver::new(&f).curve(t, 128).unwrap();
        let cd = theodorsen_solve(&curve).unwrap();
        let mean_log = cd.boundary_dr.iter().map(|d| d.norm().ln()).sum::<f64>() / cd.len() as f64;
        assert!((mean_log - cd.capacity.ln()).abs() < 1e-10);
        assert!(conformal::boundary_residual_model(&cd, &f) < 1e-10);
        let w = stationarity::pang_weight(&f, &cd, &curve).unwrap();
        assert!(w.imag_leak <= 1e-8);
        assert!(w.c_samples.iter().all(|x| *x > 0.0));
        let gamma = fourier_gamma(&w.c_samples).unwrap();
        let k_max = gamma.len() / 2;
        assert!((gamma[k_max] - 1.0).norm() < 1e-14);
        for k in 1..=k_max {
            assert!((gamma[k_max - k] - gamma[k_max + k].conj()).norm() < 1e-13);
        }
    }
}

#[test]
fn gamma_roundtrip_reproduces_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let theta = spectral::uniform_grid(64);
    let modes: Vec<Complex64> = (1..=6).map(|_| random_complex(&mut rng, 0.05)).collect();
    let samples: Vec<f64> = theta
        .iter()
        .map(|th| {
            1.0 + modes
                .iter()
                .enumerate()
                .map(|(k, g)| 2.0 * (g * Complex64::from_polar(1.0, (k + 1) as f64 * th)).re)
                .sum::<f64>()
        })
        .collect();
    let gamma = fourier_gamma(&samples).unwrap();
    let k_max = gamma.len() as i64 / 2;
    for (j, th) in theta.iter().enumerate() {
        let v: Complex64 = (-k_max..=k_max)
            .map(|k| gamma[(k + k_max) as usize] * Complex64::from_polar(1.0, k as f64 * th))
            .sum();
        assert!((v.re - samples[j]).abs() < 1e-13 && v.im.abs() < 1e-13);
    }
}

#[test]
fn obstruction_vanishes_exactly_when_a_does() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..20 {
        let a = if i % 2 == 0 {
            c(0.0, 0.0)
        } else {
            random_complex(&mut rng, 1.0)
        };
        let rep = obstruction_solver(&random_model(&mut rng, a), 5).unwrap();
        assert_eq!(rep.obstruction.norm() > 1e-12, a.norm() > 0.0, "A = {a}");
        if a.norm() == 0.0 {
            assert!(rep.solvable_through(4));
            let low = rep
                .gamma_series
                .terms()
                .filter(|(_, m, _)| (1..=3).contains(m))
                .map(|(_, _, g)| g.norm())
                .fold(0.0, f64::max);
            assert!(low < 1e-12);
        }
    }
}

#[test]
fn moment_csv_is_deterministic() {
    let f = PreparedDefiningFunction::with_umbilic(c(0.5, 0.5));
    let ts = [0.05, 0.1, 0.15];
    let a = stationarity::moments_csv(&stationarity::scan(&f, &ts, 64, 4).unwrap());
    let b = stationarity::moments_csv(&stationarity::scan(&f, &ts, 64, 4).unwrap());
    assert_eq!(a, b);
}
