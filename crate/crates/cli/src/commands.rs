use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;

use discstat::hypersurface::PreparedDefiningFunction;
use discstat::slice_polar::{lemma_polar_report, SliceCurve, SliceSolver};
use discstat::stationarity::{
    self, estimate_a, extension_test, fit_leading_coefficient, obstruction_constant,
    obstruction_solver_with, SolverOptions,
};
use discstat::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, Spacing};
use crate::CliError;

/// Verdict of a command plus its human-readable summary.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

fn write_output(cfg: &ExperimentConfig, name: &str, contents: &str) -> Result<(), CliError> {
    let dir = &cfg.output.dir;
    fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn line(s: &mut String, text: impl AsRef<str>) {
    s.push_str(text.as_ref());
    s.push('\n');
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn sphere_check(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = cfg.model()?;
    let slices = stationarity::scan(&f, &cfg.t_grid(), cfg.grid.n, cfg.truncation.j_max)?;
    write_output(cfg, "moments.csv", &stationarity::moments_csv(&slices))?;
    let mut s = String::new();
    line(
        &mut s,
        format!("model A = {}, N = {}", f.umbilic(), cfg.grid.n),
    );
    let mut worst: f64 = 0.0;
    for wm in &slices {
        let dc = wm
            .c_samples
            .iter()
            .map(|c| (c - 1.0).abs())
            .fold(0.0, f64::max);
        worst = worst.max(wm.max_moment_residual());
        line(
            &mut s,
            format!(
                "t = {:.4e}  max|mu| = {:.3e}  max|c - 1| = {dc:.3e}",
                wm.t,
                wm.max_moment_residual()
            ),
        );
    }
    let passed = worst <= cfg.tolerances.moment;
    line(
        &mut s,
        format!(
            "sphere-check {}: max moment residual {worst:.3e} (tolerance {:.1e})",
            verdict(passed),
            cfg.tolerances.moment
        ),
    );
    Ok(Outcome { passed, summary: s })
}

pub fn lemma_polar(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = cfg.model()?;
    let m = cfg.truncation.m_max;
    let rep = lemma_polar_report(&f, &cfg.t_grid(), cfg.grid.n, cfg.truncation.k_max, m)?;
    write_output(cfg, "lemma_polar.csv", &rep.to_csv())?;
    let tol = &cfg.tolerances;
    let coeff_ok = rep.k_mismatch <= tol.coefficient && rep.low_order_max <= tol.coefficient;
    let rem_ok = rep.fitted_remainder_order >= 5.0 - tol.order_slack;
    let dev_ok = rep.fitted_deviation_order >= m as f64 + 1.0 - tol.order_slack;
    let mut s = String::new();
    line(
        &mut s,
        format!("t^1..t^3 coefficients: max {:.3e}", rep.low_order_max),
    );
    line(
        &mut s,
        format!(
            "t^4 coefficient vs Re(A e^(-2i theta)): max difference {:.3e}",
            rep.k_mismatch
        ),
    );
    line(
        &mut s,
        format!(
            "fitted order of r - 1 - k t^4: {:.3}",
            rep.fitted_remainder_order
        ),
    );
    line(
        &mut s,
        format!(
            "fitted order of r_num - r_sym (M = {m}): {:.3}",
            rep.fitted_deviation_order
        ),
    );
    let passed = coeff_ok && rem_ok && dev_ok;
    line(&mut s, format!("lemma-polar {}", verdict(passed)));
    Ok(Outcome { passed, summary: s })
}

pub fn moment_scan(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = cfg.model()?;
    let ts = cfg.t_grid();
    let slices = stationarity::scan(&f, &ts, cfg.grid.n, cfg.truncation.j_max)?;
    write_output(cfg, "moments.csv", &stationarity::moments_csv(&slices))?;
    let mut csv = String::from("t,Re_mu2Z,Im_mu2Z\n");
    let mut s = String::new();
    line(&mut s, format!("model A = {}", f.umbilic()));
    for wm in &slices {
        let mu = wm.obstruction_moment;
        writeln!(csv, "{:e},{:e},{:e}", wm.t, mu.re, mu.im).expect("write to string");
        let w = wm.mu_w.iter().map(|m| m.norm()).fold(0.0, f64::max);
        let z = wm.mu_z.iter().map(|m| m.norm()).fold(0.0, f64::max);
        line(
            &mut s,
            format!(
                "t = {:.4e}  max|muW| = {w:.3e}  max|muZ| = {z:.3e}  mu2Z/t^4 = {:.6}",
                wm.t,
                mu / wm.t.powi(4)
            ),
        );
    }
    write_output(cfg, "obstruction_moment.csv", &csv)?;
    if ts.len() >= 2 {
        let values: Vec<Complex64> = slices.iter().map(|w| w.obstruction_moment).collect();
        let (lead, _, _) = fit_leading_coefficient(&ts, &values)?;
        line(&mut s, format!("fitted t^4 coefficient of mu2Z: {lead:.6}"));
        line(
            &mut s,
            format!("implied A = {:.6}", lead / obstruction_constant()?),
        );
    }
    Ok(Outcome {
        passed: true,
        summary: s,
    })
}

pub fn obstruction(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let f = cfg.model()?;
    let opts = SolverOptions {
        j_max: cfg.truncation.j_max,
        ..SolverOptions::default()
    };
    let order = cfg.truncation.m_max;
    let rep = obstruction_solver_with(&f, order, opts)?;
    write_output(cfg, "obstruction.txt", &rep.to_text())?;
    let tol = &cfg.tolerances;
    let zero = rep.obstruction.norm() <= tol.obstruction;
    let a = f.umbilic();

    let mut table = String::from("A_re,A_im,obstruction_re,obstruction_im,ratio_re,ratio_im\n");
    let mut ratios = Vec::new();
    for probe in [
        Complex64::new(1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 1.0),
    ] {
        let obs = obstruction_solver_with(&f.replace_umbilic(probe), 4, opts)?.obstruction;
        let ratio = obs / probe;
        writeln!(
            table,
            "{:e},{:e},{:e},{:e},{:e},{:e}",
            probe.re, probe.im, obs.re, obs.im, ratio.re, ratio.im
        )
        .expect("write to string");
        ratios.push(ratio);
    }
    write_output(cfg, "linearity.csv", &table)?;
    let linearity = ratios
        .iter()
        .map(|r| (r - ratios[0]).norm() / ratios[0].norm())
        .fold(0.0, f64::max);

    let mut s = String::new();
    line(&mut s, format!("model A = {a}, order {order}"));
    line(&mut s, format!("obstruction = {:.12}", rep.obstruction));
    line(
        &mut s,
        format!("solvable orders: {:?}", rep.solvable_orders),
    );
    for (probe, r) in ["1", "2", "i"].iter().zip(&ratios) {
        line(&mut s, format!("A = {probe}: obstruction / A = {r:.12}"));
    }
    line(&mut s, format!("linearity deviation {linearity:.3e}"));
    line(
        &mut s,
        if zero {
            "verdict: stationary-compatible (obstruction vanishes)"
        } else {
            "verdict: obstructed (A != 0, slice discs cannot all be stationary)"
        },
    );
    let consistent = zero == (a == Complex64::new(0.0, 0.0)) && (!zero || rep.solvable_through(4));
    let passed = consistent && linearity <= tol.linearity;
    line(&mut s, format!("obstruction {}", verdict(passed)));
    Ok(Outcome { passed, summary: s })
}

pub fn estimate(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = &cfg.grid;
    if g.spacing != Spacing::Geometric
        || g.t_points < 6
        || g.t_min < 0.02 - 1e-12
        || g.t_max > 0.2 + 1e-12
    {
        return Err(CliError::Config(
            "estimate-a needs a geometric grid of at least 6 points in [0.02, 0.2]".into(),
        ));
    }
    let f = cfg.model()?;
    let ts = cfg.t_grid();
    let rep = estimate_a(&f, &ts, g.n, cfg.truncation.j_max)?;
    let mut csv = String::from("t,Re_mu2Z,Im_mu2Z\n");
    for (t, mu) in &rep.samples {
        writeln!(csv, "{t:e},{:e},{:e}", mu.re, mu.im).expect("write to string");
    }
    write_output(cfg, "estimate.csv", &csv)?;
    let a = f.umbilic();
    let (passed, err) = if a == Complex64::new(0.0, 0.0) {
        (rep.a_hat.norm() <= 1e-6, rep.a_hat.norm())
    } else {
        let rel = (rep.a_hat - a).norm() / a.norm();
        (rel <= cfg.tolerances.estimate, rel)
    };
    let mut s = String::new();
    line(
        &mut s,
        format!("obstruction constant = {:.12}", rep.constant),
    );
    line(
        &mut s,
        format!(
            "fitted t^4 coefficient = {:.9}, relative fit residual {:.3e}",
            rep.leading, rep.relative_residual
        ),
    );
    line(&mut s, format!("A_hat = {:.9} (model A = {a})", rep.a_hat));
    line(
        &mut s,
        format!("estimate-a {}: error {err:.3e}", verdict(passed)),
    );
    Ok(Outcome { passed, summary: s })
}

/// Seeded trigonometric boundary data: a holomorphic polynomial plus, for
/// the non-extendable half, up to three antiholomorphic modes.
pub fn cauchy_oracle(cfg: &ExperimentConfig, seed: u64) -> Result<Outcome, CliError> {
    const TRIALS: usize = 100;
    let n = cfg.grid.n;
    let f: PreparedDefiningFunction = cfg.model()?;
    let circle = SliceCurve::from_radius(1.0, vec![1.0; n])?;
    let slice = SliceSolver::new(&f).curve(cfg.grid.t_max, n)?;
    let scale = slice.r_samples.iter().copied().fold(0.0, f64::max);
    // probes far enough out for the n-point rule to resolve 1e-15
    let reach = 1.3f64.max(10f64.powf(15.0 / n as f64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("trial,curve,degree,expected,verdict,max_moment,max_cauchy\n");
    let mut agree = 0;
    let mut correct = 0;
    for trial in 0..TRIALS {
        let (curve, name, radius) = if trial % 2 == 0 {
            (&circle, "circle", reach)
        } else {
            (&slice, "slice", reach * scale)
        };
        let probes: Vec<Complex64> = (0..8)
            .map(|k| Complex64::from_polar(radius, 0.4 + 0.8 * k as f64))
            .collect();
        let degree: usize = rng.gen_range(0..=20);
        let hol: Vec<Complex64> = (0..=degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let expected = trial % 4 < 2;
        let anti: Vec<(u32, Complex64)> = if expected {
            Vec::new()
        } else {
            (0..rng.gen_range(1..=3))
                .map(|_| {
                    let k = rng.gen_range(1..=20u32);
                    (
                        k,
                        Complex64::from_polar(
                            rng.gen_range(0.5..1.0),
                            rng.gen_range(0.0..2.0 * PI),
                        ),
                    )
                })
                .collect()
        };
        let samples: Vec<Complex64> = (0..n)
            .map(|j| {
                let z = curve.point(j);
                let h = hol
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                h + anti
                    .iter()
                    .map(|(k, c)| c * z.conj().powu(*k))
                    .sum::<Complex64>()
            })
            .collect();
        let (verdict_str, max_m, max_c) =
            match extension_test(curve, &samples, 24, &probes, cfg.tolerances.extension) {
                Ok(rep) => {
                    agree += 1;
                    correct += usize::from(rep.extendable == expected);
                    (
                        if rep.extendable {
                            "extendable"
                        } else {
                            "not-extendable"
                        },
                        rep.max_moment,
                        rep.max_cauchy,
                    )
                }
                Err(Error::OracleMismatch(_)) => ("mismatch", f64::NAN, f64::NAN),
                Err(e) => return Err(e.into()),
            };
        writeln!(
            csv,
            "{trial},{name},{degree},{},{verdict_str},{max_m:e},{max_c:e}",
            if expected {
                "extendable"
            } else {
                "not-extendable"
            }
        )
        .expect("write to string");
    }
    write_output(cfg, "cauchy_oracle.csv", &csv)?;
    let passed = agree == TRIALS && correct == TRIALS;
    let mut s = String::new();
    line(
        &mut s,
        format!(
            "seed {seed}, {TRIALS} trials, threshold {:.1e}",
            cfg.tolerances.extension
        ),
    );
    line(
        &mut s,
        format!("moment/Cauchy agreement {agree}/{TRIALS}, correct verdicts {correct}/{TRIALS}"),
    );
    line(&mut s, format!("cauchy-oracle {}", verdict(passed)));
    Ok(Outcome { passed, summary: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Overrides;

    fn config(dir: &std::path::Path, text: &str) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::parse(text).unwrap();
        cfg.apply(&Overrides {
            out: Some(dir.to_path_buf()),
            ..Default::default()
        });
        cfg.validate().unwrap();
        cfg
    }

    #[test]
    fn obstruction_verdicts() {
        let dir = tempfile::tempdir().unwrap();
        let sphere = obstruction(&config(dir.path(), "")).unwrap();
        assert!(sphere.passed);
        assert!(sphere.summary.contains("stationary-compatible"));
        let bumped = obstruction(&config(dir.path(), "[model]\na_re = 1.0\n")).unwrap();
        assert!(bumped.passed);
        assert!(bumped.summary.contains("obstructed"));
        let text = fs::read_to_string(dir.path().join("obstruction.txt")).unwrap();
        assert!(text.contains("solvable_orders = [0, 1, 2, 3, 5, 6]"));
    }

    #[test]
    fn estimate_rejects_linear_grid() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = config(dir.path(), "[grid]\nspacing = \"linear\"\n");
        assert!(matches!(estimate(&cfg), Err(CliError::Config(_))));
    }
}
