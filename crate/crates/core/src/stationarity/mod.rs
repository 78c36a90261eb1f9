//! Stationarity of the slice discs `ζ ↦ (R_t(ζ), t²)`.
//!
//! A slice disc is stationary iff some real weight `c(θ, t) > 0` makes both
//! lift components extend holomorphically, i.e. all moments
//!
//! ```text
//! μⱼᵂ = ∫ z̃ʲ c (1/2 − (i/2) h(t z̃, ·, 0)) dz̃,    μⱼᶻ = ∫ z̃ʲ c ρ_z(t z̃, t²)/(−t) dz̃
//! ```
//!
//! vanish, `z̃ = r(θ, t) e^{iθ}`. The only candidate weight is the Pang
//! weight `c ∝ 1/(ζ ρ_z(R_t(ζ)) R_t'(ζ))`.

mod cauchy;
mod estimate;
mod obstruction;

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::conformal::{self, ConformalData};
use crate::error::{Error, Result};
use crate::hypersurface::PreparedDefiningFunction;
use crate::series::{HermitianSeries, Variable};
use crate::slice_polar::{SliceCurve, SliceSolver};
use crate::spectral::{self, TrigInterpolant};

pub use cauchy::{cauchy_transform, curve_moment, extension_test, ExtensionReport};
pub use estimate::{estimate_a, fit_leading_coefficient, obstruction_constant, EstimateReport};
pub use obstruction::{
    obstruction_solver, obstruction_solver_with, ObstructionReport, SolverOptions,
};

pub const DEFAULT_J_MAX: usize = 8;
pub const IMAG_LEAK_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PangWeight {
    /// Normalized weight on the `θ` grid, mean 1.
    pub c_samples: Vec<f64>,
    /// `max |Im(1/â)| / max |1/â|` before projection.
    pub imag_leak: f64,
    /// Common sign of `t⁻²/â` (−1 for the sphere).
    pub sign: f64,
}

/// Pang weight transported to the `θ` grid of `curve`.
pub fn pang_weight(
    f: &PreparedDefiningFunction,
    cd: &ConformalData,
    curve: &SliceCurve,
) -> Result<PangWeight> {
    let t = cd.t;
    if t == 0.0 {
        return Err(Error::Domain("Pang weight needs t ≠ 0".into()));
    }
    let pz = f.slice_potential().partial(Variable::Z);
    let inv_a: Vec<Complex64> = cd
        .sigma_grid
        .iter()
        .zip(cd.boundary_r.iter().zip(&cd.boundary_dr))
        .map(|(s, (r, dr))| {
            Complex64::from_polar(1.0, *s) * pz.eval_complex(*r, 0.0) * dr / (t * t)
        })
        .collect();
    let scale = inv_a.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let imag_leak = inv_a.iter().map(|x| x.im.abs()).fold(0.0, f64::max) / scale;
    if imag_leak > IMAG_LEAK_THRESHOLD {
        return Err(Error::Inconsistent {
            leak: imag_leak,
            threshold: IMAG_LEAK_THRESHOLD,
        });
    }
    let sign = inv_a[0].re.signum();
    if let Some(bad) = inv_a.iter().find(|x| x.re * sign <= 1e-12 * scale) {
        return Err(Error::DegenerateWeight(format!(
            "1/â = {bad} vanishes or changes sign on the circle"
        )));
    }
    let a_sigma: Vec<f64> = inv_a.iter().map(|x| 1.0 / x.re.abs()).collect();
    let a_sigma = TrigInterpolant::from_real(&a_sigma);
    let sigma_of_theta = conformal::invert_correspondence_many(cd, &curve.theta_grid)?;
    let mut c: Vec<f64> = sigma_of_theta.iter().map(|s| a_sigma.eval(*s).re).collect();
    let mean = c.iter().sum::<f64>() / c.len() as f64;
    c.iter_mut().for_each(|x| *x /= mean);
    if let Some(bad) = c.iter().find(|x| x.is_nan() || **x <= 0.0) {
        return Err(Error::DegenerateWeight(format!(
            "transported weight {bad} is not positive"
        )));
    }
    Ok(PangWeight {
        c_samples: c,
        imag_leak,
        sign,
    })
}

/// Fourier coefficients `γ_k`, `k = −K..K` with `K = N/2 − 1`, stored at
/// index `k + K`.
pub fn fourier_gamma(c_samples: &[f64]) -> Result<Vec<Complex64>> {
    let coeffs = spectral::forward_real(c_samples);
    let k_max = (c_samples.len() as i64 - 1) / 2;
    let gamma: Vec<Complex64> = (-k_max..=k_max)
        .map(|k| spectral::coefficient(&coeffs, k))
        .collect();
    let scale = gamma.iter().map(|g| g.norm()).fold(1.0, f64::max);
    for k in 1..=k_max as usize {
        let (neg, pos) = (gamma[k_max as usize - k], gamma[k_max as usize + k]);
        if (neg - pos.conj()).norm() > 1e-13 * scale {
            return Err(Error::Inconsistent {
                leak: (neg - pos.conj()).norm(),
                threshold: 1e-13 * scale,
            });
        }
    }
    Ok(gamma)
}

/// Integrand kernels of both moment families on the `θ` grid, so that
/// `μⱼ = (2π/N) Σ_θ c(θ) K_j(θ)`.
#[derive(Debug, Clone)]
pub struct MomentKernels {
    pub t: f64,
    pub w: Vec<Vec<Complex64>>,
    pub z: Vec<Vec<Complex64>>,
}

impl MomentKernels {
    pub fn new(f: &PreparedDefiningFunction, curve: &SliceCurve, j_max: usize) -> Self {
        let t = curve.t;
        let h0 = f.h().restrict_s0();
        let pz: HermitianSeries = f.slice_potential().partial(Variable::Z);
        let n = curve.len();
        let mut w = vec![Vec::with_capacity(n); j_max];
        let mut z = vec![Vec::with_capacity(n); j_max];
        for i in 0..n {
            let p = curve.point(i);
            let dz = curve.tangent(i);
            let kw = (0.5 - 0.5 * Complex64::i() * h0.eval_complex(t * p, 0.0)) * dz;
            let kz = pz.eval_complex(t * p, 0.0) / (-t) * dz;
            let mut pj = p;
            for j in 0..j_max {
                w[j].push(pj * kw);
                z[j].push(pj * kz);
                pj *= p;
            }
        }
        Self { t, w, z }
    }

    pub fn j_max(&self) -> usize {
        self.w.len()
    }

    fn integrate(kernel: &[Complex64], c: &[f64]) -> Complex64 {
        let n = kernel.len() as f64;
        kernel.iter().zip(c).map(|(k, c)| k * *c).sum::<Complex64>() * (2.0 * PI / n)
    }

    /// `(μⱼᵂ, μⱼᶻ)` for `j = 1..j_max`.
    pub fn moments(&self, c: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        (
            self.w.iter().map(|k| Self::integrate(k, c)).collect(),
            self.z.iter().map(|k| Self::integrate(k, c)).collect(),
        )
    }

    /// `μ₂ᶻ` of the weight `c + δc`, where the trigonometric correction
    /// `δc` (modes `1..=j_max + 1`, mean zero) least-squares-satisfies every
    /// other moment equation.
    pub fn corrected_mu2z(&self, c: &[f64]) -> Result<Complex64> {
        let j_max = self.j_max();
        if j_max < 2 {
            return Err(Error::Domain("the corrected moment needs j_max ≥ 2".into()));
        }
        let n = c.len();
        let theta = spectral::uniform_grid(n);
        let modes = j_max + 1;
        let basis: Vec<Vec<f64>> = (1..=modes)
            .flat_map(|k| {
                let cos = theta
                    .iter()
                    .map(|th| 2.0 * (k as f64 * th).cos())
                    .collect::<Vec<_>>();
                let sin = theta
                    .iter()
                    .map(|th| -2.0 * (k as f64 * th).sin())
                    .collect::<Vec<_>>();
                [cos, sin]
            })
            .collect();
        let rows: Vec<&Vec<Complex64>> = self
            .w
            .iter()
            .chain(
                self.z
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != 1)
                    .map(|(_, k)| k),
            )
            .collect();
        let mut a = DMatrix::zeros(2 * rows.len(), basis.len());
        let mut b = DVector::zeros(2 * rows.len());
        for (r, kernel) in rows.iter().enumerate() {
            let base = Self::integrate(kernel, c);
            b[2 * r] = -base.re;
            b[2 * r + 1] = -base.im;
            for (col, phi) in basis.iter().enumerate() {
                let v = Self::integrate(kernel, phi);
                a[(2 * r, col)] = v.re;
                a[(2 * r + 1, col)] = v.im;
            }
        }
        let x = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::Structural(format!("weight correction solve failed: {e}")))?;
        let mut mu = Self::integrate(&self.z[1], c);
        for (col, phi) in basis.iter().enumerate() {
            mu += Self::integrate(&self.z[1], phi) * x[col];
        }
        Ok(mu)
    }
}

pub fn moment_integrals(
    f: &PreparedDefiningFunction,
    curve: &SliceCurve,
    c_samples: &[f64],
    j_max: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    MomentKernels::new(f, curve, j_max).moments(c_samples)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightAndMoments {
    pub t: f64,
    pub c_samples: Vec<f64>,
    pub gamma: Vec<Complex64>,
    pub mu_w: Vec<Complex64>,
    pub mu_z: Vec<Complex64>,
    pub imag_leak: f64,
    /// `μ₂ᶻ` after the trigonometric weight correction.
    pub obstruction_moment: Complex64,
    pub conformal_iterations: usize,
}

impl WeightAndMoments {
    pub fn gamma_k(&self, k: i64) -> Complex64 {
        let k_max = (self.gamma.len() as i64 - 1) / 2;
        if k.abs() > k_max {
            return Complex64::new(0.0, 0.0);
        }
        self.gamma[(k + k_max) as usize]
    }

    pub fn max_moment_residual(&self) -> f64 {
        self.mu_w
            .iter()
            .chain(&self.mu_z)
            .map(|m| m.norm())
            .fold(0.0, f64::max)
    }
}

/// Slice curve, Riemann map, Pang weight and moments at one `t`.
pub fn analyze_slice(
    f: &PreparedDefiningFunction,
    t: f64,
    n: usize,
    j_max: usize,
) -> Result<WeightAndMoments> {
    analyze_with(f, &SliceSolver::new(f), t, n, j_max)
}

fn analyze_with(
    f: &PreparedDefiningFunction,
    solver: &SliceSolver,
    t: f64,
    n: usize,
    j_max: usize,
) -> Result<WeightAndMoments> {
    let curve = solver.curve(t, n)?;
    let cd = conformal::theodorsen_solve(&curve)?;
    let weight = pang_weight(f, &cd, &curve)?;
    let gamma = fourier_gamma(&weight.c_samples)?;
    let kernels = MomentKernels::new(f, &curve, j_max);
    let (mu_w, mu_z) = kernels.moments(&weight.c_samples);
    let obstruction_moment = kernels.corrected_mu2z(&weight.c_samples)?;
    Ok(WeightAndMoments {
        t,
        c_samples: weight.c_samples,
        gamma,
        mu_w,
        mu_z,
        imag_leak: weight.imag_leak,
        obstruction_moment,
        conformal_iterations: cd.iterations,
    })
}

/// [`analyze_slice`] over a grid of `t`, in parallel, results in grid order.
pub fn scan(
    f: &PreparedDefiningFunction,
    t_grid: &[f64],
    n: usize,
    j_max: usize,
) -> Result<Vec<WeightAndMoments>> {
    let solver = SliceSolver::new(f);
    t_grid
        .par_iter()
        .map(|&t| analyze_with(f, &solver, t, n, j_max))
        .collect()
}

/// CSV with header `t,j,Re_muW,Im_muW,Re_muZ,Im_muZ`.
pub fn moments_csv(slices: &[WeightAndMoments]) -> String {
    let mut s = String::from("t,j,Re_muW,Im_muW,Re_muZ,Im_muZ\n");
    for wm in slices {
        for (j, (mw, mz)) in wm.mu_w.iter().zip(&wm.mu_z).enumerate() {
            writeln!(
                s,
                "{:e},{},{:e},{:e},{:e},{:e}",
                wm.t,
                j + 1,
                mw.re,
                mw.im,
                mz.re,
                mz.im
            )
            .expect("write to string");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sphere_weight_is_constant_and_stationary() {
        let f = PreparedDefiningFunction::heisenberg();
        for t in [0.05, 0.2] {
            let wm = analyze_slice(&f, t, 64, 8).unwrap();
            assert!(wm.c_samples.iter().all(|x| (x - 1.0).abs() < 1e-12));
            assert!(wm.max_moment_residual() < 1e-12);
            assert!(wm.obstruction_moment.norm() < 1e-12);
            assert_eq!(wm.gamma_k(0), c(1.0, 0.0));
        }
    }

    #[test]
    fn pang_weight_sign_for_sphere() {
        let f = PreparedDefiningFunction::heisenberg();
        let curve = SliceSolver::new(&f).curve(0.1, 32).unwrap();
        let cd = conformal::theodorsen_solve(&curve).unwrap();
        let w = pang_weight(&f, &cd, &curve).unwrap();
        assert_eq!(w.sign, -1.0);
        assert!(w.imag_leak < 1e-14);
    }

    #[test]
    fn gamma_of_simple_weights() {
        let th = spectral::uniform_grid(32);
        let g = fourier_gamma(&th.iter().map(|x| 1.0 + 0.2 * x.cos()).collect::<Vec<_>>()).unwrap();
        let k_max = 15;
        assert!((g[k_max] - 1.0).norm() < 1e-15);
        assert!((g[k_max + 1] - 0.1).norm() < 1e-15);
        assert!((g[k_max - 1] - 0.1).norm() < 1e-15);
    }

    #[test]
    fn umbilic_pang_moments_match_expansion() {
        // Pang weight kills every Z-moment; the W_1 moment carries πi A t⁴.
        let a = c(0.6, -0.3);
        let f = PreparedDefiningFunction::with_umbilic(a);
        let t = 0.1;
        let wm = analyze_slice(&f, t, 128, 4).unwrap();
        assert!(wm.imag_leak < 1e-12);
        assert!(wm.mu_z.iter().all(|m| m.norm() < 1e-11));
        let lead = wm.mu_w[0] / t.powi(4);
        assert!((lead - Complex64::i() * PI * a).norm() < 1e-2 * a.norm());
        let corrected = wm.obstruction_moment / t.powi(4);
        assert!((corrected + 2.0 * PI * Complex64::i() * a).norm() < 1e-2 * a.norm());
    }

    #[test]
    fn csv_layout() {
        let f = PreparedDefiningFunction::heisenberg();
        let rows = scan(&f, &[0.1, 0.2], 16, 3).unwrap();
        let csv = moments_csv(&rows);
        assert!(csv.starts_with("t,j,Re_muW,Im_muW,Re_muZ,Im_muZ\n"));
        assert_eq!(csv.lines().count(), 7);
    }
}
