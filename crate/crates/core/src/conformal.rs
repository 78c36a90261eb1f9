//! Riemann map `R_t: Δ → Ω_t` of a slice domain by Theodorsen's
//! boundary-correspondence iteration.
//!
//! With `R_t(e^{iσ}) = t·r(θ(σ))·e^{iθ(σ)}`, `log(R_t(ζ)/ζ)` is holomorphic
//! in the disc, so `θ(σ) − σ` is the periodic conjugate of `log r(θ(σ))`.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hypersurface::PreparedDefiningFunction;
use crate::slice_polar::SliceCurve;
use crate::spectral::{self, TrigInterpolant};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheodorsenOptions {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub relaxation: f64,
}

impl Default for TheodorsenOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            tolerance: 1e-13,
            relaxation: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConformalData {
    pub t: f64,
    pub sigma_grid: Vec<f64>,
    pub theta_of_sigma: Vec<f64>,
    pub dtheta_dsigma: Vec<f64>,
    /// `R_t(e^{iσ})` in unscaled coordinates.
    pub boundary_r: Vec<Complex64>,
    /// `R_t'(e^{iσ})`.
    pub boundary_dr: Vec<Complex64>,
    /// `R_t'(0) = t·exp(mean log r(θ(σ)))`.
    pub capacity: f64,
    pub iterations: usize,
    pub relaxation: f64,
}

impl ConformalData {
    pub fn len(&self) -> usize {
        self.sigma_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma_grid.is_empty()
    }

    /// Capacity of the rescaled domain `Ω_t/t`.
    pub fn scaled_capacity(&self) -> f64 {
        self.capacity / self.t.abs()
    }

    /// `θ(σ) − σ` as a periodic interpolant.
    pub fn correspondence_interpolant(&self) -> TrigInterpolant {
        let v: Vec<f64> = self
            .theta_of_sigma
            .iter()
            .zip(&self.sigma_grid)
            .map(|(th, s)| th - s)
            .collect();
        TrigInterpolant::from_real(&v)
    }

    pub fn max_correspondence_deviation(&self) -> f64 {
        self.theta_of_sigma
            .iter()
            .zip(&self.sigma_grid)
            .map(|(th, s)| (th - s).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `sigma,theta,Re_R,Im_R,Re_dR,Im_dR`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("sigma,theta,Re_R,Im_R,Re_dR,Im_dR\n");
        for j in 0..self.len() {
            let (r, dr) = (self.boundary_r[j], self.boundary_dr[j]);
            writeln!(
                s,
                "{:e},{:e},{:e},{:e},{:e},{:e}",
                self.sigma_grid[j], self.theta_of_sigma[j], r.re, r.im, dr.re, dr.im
            )
            .expect("write to string");
        }
        s
    }
}

pub fn theodorsen_solve(curve: &SliceCurve) -> Result<ConformalData> {
    theodorsen_solve_with(curve, TheodorsenOptions::default())
}

pub fn theodorsen_solve_with(curve: &SliceCurve, opts: TheodorsenOptions) -> Result<ConformalData> {
    let n = curve.len();
    if n < 4 {
        return Err(Error::Mapping(format!("grid of {n} points is too coarse")));
    }
    let log_r: Vec<f64> = curve.r_samples.iter().map(|r| r.ln()).collect();
    let steepness = curve
        .r_samples
        .iter()
        .zip(&curve.dr_dtheta)
        .map(|(r, dr)| (dr / r).abs())
        .fold(0.0, f64::max);
    if steepness >= 1.0 {
        return Err(Error::Mapping(format!(
            "curve too far from a circle: max |d log r/dθ| = {steepness}"
        )));
    }
    let log_r = TrigInterpolant::from_real(&log_r);
    let sigma = spectral::uniform_grid(n);

    let iterate = |relaxation: f64| -> Option<(Vec<f64>, usize)> {
        let mut v = vec![0.0; n];
        let mut last_update = f64::INFINITY;
        let mut growth = 0;
        for it in 1..=opts.max_iterations {
            let samples: Vec<f64> = sigma
                .iter()
                .zip(&v)
                .map(|(s, d)| log_r.eval(s + d).re)
                .collect();
            let target = spectral::conjugate(&samples);
            let mut update: f64 = 0.0;
            for (vi, ti) in v.iter_mut().zip(&target) {
                let next = (1.0 - relaxation) * *vi + relaxation * ti;
                update = update.max((next - *vi).abs());
                *vi = next;
            }
            if !update.is_finite() {
                return None;
            }
            if update < opts.tolerance {
                return Some((v, it));
            }
            growth = if update > last_update { growth + 1 } else { 0 };
            if growth >= 3 {
                return None;
            }
            last_update = update;
        }
        None
    };
    let (v, iterations, relaxation) = match iterate(opts.relaxation) {
        Some((v, it)) => (v, it, opts.relaxation),
        None if opts.relaxation > 0.5 => match iterate(0.5) {
            Some((v, it)) => (v, it, 0.5),
            None => return Err(non_contraction(opts)),
        },
        None => return Err(non_contraction(opts)),
    };

    let dv = spectral::differentiate_real(&v);
    let dtheta_dsigma: Vec<f64> = dv.iter().map(|d| 1.0 + d).collect();
    if let Some(bad) = dtheta_dsigma.iter().find(|d| d.is_nan() || **d <= 0.0) {
        return Err(Error::Mapping(format!(
            "non-monotone correspondence: dθ/dσ = {bad}"
        )));
    }
    let theta_of_sigma: Vec<f64> = sigma.iter().zip(&v).map(|(s, d)| s + d).collect();
    let log_r_on: Vec<f64> = theta_of_sigma.iter().map(|th| log_r.eval(*th).re).collect();
    let mean_log = log_r_on.iter().sum::<f64>() / n as f64;
    let boundary_r: Vec<Complex64> = theta_of_sigma
        .iter()
        .zip(&log_r_on)
        .map(|(th, lr)| Complex64::from_polar(curve.t * lr.exp(), *th))
        .collect();
    let mut cd = ConformalData {
        t: curve.t,
        sigma_grid: sigma,
        theta_of_sigma,
        dtheta_dsigma,
        boundary_r,
        boundary_dr: Vec::new(),
        capacity: curve.t * mean_log.exp(),
        iterations,
        relaxation,
    };
    cd.boundary_dr = boundary_derivative(&cd);
    Ok(cd)
}

fn non_contraction(opts: TheodorsenOptions) -> Error {
    Error::Mapping(format!(
        "Theodorsen iteration did not reach {:e} within {} iterations",
        opts.tolerance, opts.max_iterations
    ))
}

/// `R_t'(e^{iσ}) = (d/dσ R_t(e^{iσ}))/(i e^{iσ})` by spectral differentiation.
pub fn boundary_derivative(cd: &ConformalData) -> Vec<Complex64> {
    spectral::differentiate(&cd.boundary_r)
        .iter()
        .zip(&cd.sigma_grid)
        .map(|(d, s)| d / (Complex64::i() * Complex64::from_polar(1.0, *s)))
        .collect()
}

/// Solves `θ(σ) = theta` by bracketed Newton on the monotone correspondence.
pub fn invert_correspondence(cd: &ConformalData, theta: f64) -> Result<f64> {
    invert_with(cd, &cd.correspondence_interpolant(), theta)
}

/// [`invert_correspondence`] at every point of `thetas`.
pub fn invert_correspondence_many(cd: &ConformalData, thetas: &[f64]) -> Result<Vec<f64>> {
    let v = cd.correspondence_interpolant();
    thetas.iter().map(|th| invert_with(cd, &v, *th)).collect()
}

fn invert_with(cd: &ConformalData, v: &TrigInterpolant, theta: f64) -> Result<f64> {
    if let Some(bad) = cd.dtheta_dsigma.iter().find(|d| d.is_nan() || **d <= 0.0) {
        return Err(Error::Mapping(format!(
            "non-monotone correspondence: dθ/dσ = {bad}"
        )));
    }
    let g = |s: f64| s + v.eval(s).re - theta;
    let spread = cd.max_correspondence_deviation() + 1e-3;
    let (mut lo, mut hi) = (theta - spread, theta + spread);
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Mapping(format!("cannot bracket θ = {theta}")));
    }
    let mut s = theta - v.eval(theta).re;
    for _ in 0..100 {
        let val = g(s);
        if val.abs() <= 1e-14 {
            return Ok(s);
        }
        if val < 0.0 {
            lo = s
        } else {
            hi = s
        }
        let next = s - val / (1.0 + v.eval_derivative(s).re);
        s = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    let val = g(s);
    if val.abs() <= 1e-12 {
        Ok(s)
    } else {
        Err(Error::Mapping(format!(
            "inversion at θ = {theta} stalled, residual {val:e}"
        )))
    }
}

/// Largest negative-frequency Fourier coefficient of `R_t(e^{iσ})`,
/// relative to the largest coefficient.
pub fn negative_frequency_leakage(cd: &ConformalData) -> f64 {
    let n = cd.len();
    let c = spectral::forward(&cd.boundary_r);
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let neg = c
        .iter()
        .enumerate()
        .filter(|(idx, _)| spectral::frequency(*idx, n) < 0 && !spectral::is_nyquist(*idx, n))
        .map(|(_, x)| x.norm())
        .fold(0.0, f64::max);
    neg / scale
}

/// `|Taylor coefficient 0|` of the boundary samples, relative to the capacity.
pub fn center_offset(cd: &ConformalData) -> f64 {
    spectral::forward(&cd.boundary_r)[0].norm() / cd.capacity.abs()
}

/// Holomorphic projection of the boundary samples: modes `k ≥ 0` only.
fn holomorphic_part(cd: &ConformalData) -> Vec<Complex64> {
    let n = cd.len();
    let mut c = spectral::forward(&cd.boundary_r);
    for (idx, x) in c.iter_mut().enumerate() {
        if spectral::frequency(idx, n) < 0 || spectral::is_nyquist(idx, n) {
            *x = Complex64::new(0.0, 0.0);
        }
    }
    spectral::inverse(&c)
}

/// `max | |R̃|/t − r(arg R̃) |` over the holomorphic projection `R̃` of the
/// boundary samples.
pub fn boundary_residual_polar(cd: &ConformalData, curve: &SliceCurve) -> f64 {
    let r = curve.radius_interpolant();
    holomorphic_part(cd)
        .iter()
        .map(|z| (z.norm() / cd.t.abs() - r.eval(z.arg()).re).abs())
        .fold(0.0, f64::max)
}

/// `max |ρ(R̃, t²)|/t²` over the holomorphic projection `R̃`.
pub fn boundary_residual_model(cd: &ConformalData, f: &PreparedDefiningFunction) -> f64 {
    let w = Complex64::new(cd.t * cd.t, 0.0);
    holomorphic_part(cd)
        .iter()
        .map(|z| f.rho_eval(*z, w).abs() / (cd.t * cd.t))
        .fold(0.0, f64::max)
}
