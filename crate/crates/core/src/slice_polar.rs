//! Polar parametrization `θ ↦ r(θ, t) e^{iθ}` of the rescaled slice curve
//! `S̃_t = Λ_t(S_t)`, `Λ_t(z) = z/t`, of the hypersurface over `w = t²`.
//!
//! On the slice, `ρ(t r e^{iθ}, t²) = t² + P(t r e^{iθ}, 0)`, so `r` solves
//!
//! ```text
//! 1 − r² + 2k(θ) t⁴ r⁶ + g(t r e^{iθ})/t² = 0,     k(θ) = Re(A e^{−2iθ}).
//! ```
//!
//! [`SliceSolver`] solves it pointwise with Newton's method and
//! [`solve_r_symbolic`] order by order in `t`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypersurface::PreparedDefiningFunction;
use crate::series::{FourierTaylorSeries, HermitianSeries, Variable, DEFAULT_K_MAX, DEFAULT_M_MAX};
use crate::spectral::{self, TrigInterpolant};

pub const DEFAULT_T_MAX: f64 = 0.3;
pub const DEFAULT_GRID: usize = 256;
const MAX_NEWTON: usize = 50;

/// Samples of the rescaled slice curve on a uniform `θ` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceCurve {
    pub t: f64,
    pub theta_grid: Vec<f64>,
    pub r_samples: Vec<f64>,
    pub dr_dtheta: Vec<f64>,
}

impl SliceCurve {
    /// Builds a curve from radius samples on the uniform grid, with the
    /// spectral derivative. `t` only records which slice the curve belongs to.
    pub fn from_radius(t: f64, r_samples: Vec<f64>) -> Result<Self> {
        if r_samples.is_empty() {
            return Err(Error::Domain("empty curve".into()));
        }
        if let Some(bad) = r_samples.iter().find(|r| r.is_nan() || **r <= 0.0) {
            return Err(Error::Domain(format!(
                "curve is not star-shaped: r = {bad}"
            )));
        }
        Ok(Self {
            t,
            theta_grid: spectral::uniform_grid(r_samples.len()),
            dr_dtheta: spectral::differentiate_real(&r_samples),
            r_samples,
        })
    }

    pub fn len(&self) -> usize {
        self.r_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_samples.is_empty()
    }

    /// Point `r e^{iθ}` of the rescaled curve.
    pub fn point(&self, j: usize) -> Complex64 {
        Complex64::from_polar(self.r_samples[j], self.theta_grid[j])
    }

    /// `d/dθ (r e^{iθ}) = (∂r/∂θ + i r) e^{iθ}`.
    pub fn tangent(&self, j: usize) -> Complex64 {
        Complex64::new(self.dr_dtheta[j], self.r_samples[j])
            * Complex64::from_polar(1.0, self.theta_grid[j])
    }

    pub fn radius_interpolant(&self) -> TrigInterpolant {
        TrigInterpolant::from_real(&self.r_samples)
    }

    /// CSV with header `theta,r,dr_dtheta`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,r,dr_dtheta\n");
        for j in 0..self.len() {
            writeln!(
                s,
                "{:e},{:e},{:e}",
                self.theta_grid[j], self.r_samples[j], self.dr_dtheta[j]
            )
            .expect("write to string");
        }
        s
    }
}

/// Pointwise Newton solver for `r(θ, t)` started at `r = 1`.
#[derive(Debug, Clone)]
pub struct SliceSolver {
    potential: HermitianSeries,
    potential_z: HermitianSeries,
    t_max: f64,
}

impl SliceSolver {
    pub fn new(f: &PreparedDefiningFunction) -> Self {
        Self::with_t_max(f, DEFAULT_T_MAX)
    }

    pub fn with_t_max(f: &PreparedDefiningFunction, t_max: f64) -> Self {
        let potential = f.slice_potential();
        let potential_z = potential.partial(Variable::Z);
        Self {
            potential,
            potential_z,
            t_max,
        }
    }

    /// `ρ(t r e^{iθ}, t²)/t²`.
    fn scaled_rho(&self, r: f64, theta: f64, t: f64) -> f64 {
        let z = Complex64::from_polar(t * r, theta);
        1.0 + self.potential.eval(z, 0.0) / (t * t)
    }

    pub fn solve(&self, theta: f64, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(1.0);
        }
        if t.abs() > self.t_max {
            return Err(Error::Domain(format!(
                "|t| = {} exceeds t_max = {}",
                t.abs(),
                self.t_max
            )));
        }
        let dir = Complex64::from_polar(t, theta);
        let mut r = 1.0;
        let mut residual = self.scaled_rho(r, theta, t);
        for _ in 0..MAX_NEWTON {
            let deriv = 2.0 * (self.potential_z.eval_complex(r * dir, 0.0) * dir).re / (t * t);
            let step = residual / deriv;
            r -= step;
            residual = self.scaled_rho(r, theta, t);
            if step.abs() <= 1e-16 * r || residual == 0.0 {
                break;
            }
        }
        if residual.abs() > 1e-14 || !r.is_finite() || (r - 1.0).abs() > 0.5 {
            return Err(Error::Solver {
                theta,
                t,
                iterations: MAX_NEWTON,
                residual,
            });
        }
        Ok(r)
    }

    pub fn curve(&self, t: f64, n: usize) -> Result<SliceCurve> {
        let grid = spectral::uniform_grid(n);
        let r = grid
            .iter()
            .map(|&th| self.solve(th, t))
            .collect::<Result<Vec<_>>>()?;
        SliceCurve::from_radius(t, r)
    }
}

pub fn solve_r_numeric(f: &PreparedDefiningFunction, theta: f64, t: f64) -> Result<f64> {
    SliceSolver::new(f).solve(theta, t)
}

pub fn curve_samples(f: &PreparedDefiningFunction, t: f64, n: usize) -> Result<SliceCurve> {
    SliceSolver::new(f).curve(t, n)
}

/// `Σ c t^{a+b−shift} rᵃ⁺ᵇ e^{i(a−b)θ}` for a series in `(z, z̄)` evaluated
/// at `z = t r e^{iθ}` and divided by `t^shift`.
pub(crate) fn substitute_polar(
    series: &HermitianSeries,
    r: &FourierTaylorSeries,
    shift: u32,
) -> FourierTaylorSeries {
    let (k_max, m_max) = (r.k_max(), r.m_max());
    let max_deg = series.max_total_degree();
    let mut powers = vec![FourierTaylorSeries::constant(1.0, k_max, m_max)];
    for n in 1..=max_deg as usize {
        powers.push(powers[n - 1].mul(r));
    }
    let mut out = FourierTaylorSeries::zeros(k_max, m_max);
    for ((a, b, m), c) in series.terms() {
        if m != 0 || c == Complex64::default() {
            continue;
        }
        let deg = a + b;
        assert!(
            deg >= shift,
            "term z^{a} zbar^{b} not divisible by t^{shift}"
        );
        let mono = FourierTaylorSeries::monomial(
            a as i64 - b as i64,
            (deg - shift) as usize,
            c,
            k_max,
            m_max,
        );
        out = out.add(&mono.mul(&powers[deg as usize]));
    }
    out
}

/// Order-by-order solution `r(θ, t) = 1 + Σ_m r_m(θ) t^m` with the default
/// truncation box.
pub fn solve_r_symbolic(f: &PreparedDefiningFunction) -> FourierTaylorSeries {
    solve_r_symbolic_with(f, DEFAULT_K_MAX, DEFAULT_M_MAX)
}

pub fn solve_r_symbolic_with(
    f: &PreparedDefiningFunction,
    k_max: usize,
    m_max: usize,
) -> FourierTaylorSeries {
    let potential = f.slice_potential();
    let one = FourierTaylorSeries::constant(1.0, k_max, m_max);
    let mut r = one.clone();
    // Newton with the frozen derivative −2 gains at least one order per pass.
    for _ in 0..=m_max {
        let eq = one.add(&substitute_polar(&potential, &r, 2));
        r = r.add(&eq.scale_real(0.5)).real_part();
    }
    r
}

/// `k(θ) = Re(A e^{−2iθ})` as a series.
pub fn k_series(a: Complex64, k_max: usize, m_max: usize) -> FourierTaylorSeries {
    FourierTaylorSeries::real_mode(-2, 0, a * 0.5, k_max, m_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaPolarRow {
    pub t: f64,
    /// `max_θ |r_num − r_sym|` with `r_sym` truncated at `t^truncation`.
    pub max_dev: f64,
    /// `max_θ |r_num − 1 − k(θ) t⁴|`.
    pub remainder: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaPolarReport {
    pub rows: Vec<LemmaPolarRow>,
    pub truncation: usize,
    /// Max coefficient difference between the symbolic `t⁴` term and `k(θ)`.
    pub k_mismatch: f64,
    /// Largest `t¹..t³` coefficient of the symbolic solution.
    pub low_order_max: f64,
    pub fitted_deviation_order: f64,
    pub fitted_remainder_order: f64,
}

impl LemmaPolarReport {
    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.max_dev).fold(0.0, f64::max)
    }

    /// CSV `t,max_dev,remainder` followed by `fitted_order=<x>` (the remainder's).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,max_dev,remainder\n");
        for row in &self.rows {
            writeln!(s, "{:e},{:e},{:e}", row.t, row.max_dev, row.remainder)
                .expect("write to string");
        }
        writeln!(s, "fitted_order={}", self.fitted_remainder_order).expect("write to string");
        s
    }
}

/// Compares the Newton solution on a `t` grid with the symbolic expansion
/// (Fourier box `k_max`) truncated at `t^truncation`.
pub fn lemma_polar_report(
    f: &PreparedDefiningFunction,
    t_grid: &[f64],
    n: usize,
    k_max: usize,
    truncation: usize,
) -> Result<LemmaPolarReport> {
    let m_max = DEFAULT_M_MAX.max(truncation);
    let r_sym = solve_r_symbolic_with(f, k_max, m_max);
    if r_sym.truncation_loss() {
        return Err(Error::Structural(format!(
            "symbolic radius needs Fourier modes beyond k_max = {k_max}"
        )));
    }
    let r_trunc = r_sym.truncate_t(truncation);
    let k = k_series(f.umbilic(), k_max, m_max);
    let k_mismatch = (-(k_max as i64)..=k_max as i64)
        .map(|kk| (r_sym.get(kk, 4) - k.get(kk, 0)).norm())
        .fold(0.0, f64::max);
    let low_order_max = r_sym
        .terms()
        .filter(|(_, m, _)| (1..=3).contains(m))
        .map(|(_, _, c)| c.norm())
        .fold(0.0, f64::max);

    let solver = SliceSolver::new(f);
    let rows = t_grid
        .par_iter()
        .map(|&t| {
            let curve = solver.curve(t, n)?;
            let mut max_dev: f64 = 0.0;
            let mut remainder: f64 = 0.0;
            for (th, r) in curve.theta_grid.iter().zip(&curve.r_samples) {
                max_dev = max_dev.max((r - r_trunc.eval(*th, t).re).abs());
                remainder = remainder.max((r - 1.0 - k.eval(*th, 0.0).re * t.powi(4)).abs());
            }
            Ok(LemmaPolarRow {
                t,
                max_dev,
                remainder,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let devs: Vec<f64> = rows.iter().map(|r| r.max_dev).collect();
    let rems: Vec<f64> = rows.iter().map(|r| r.remainder).collect();
    Ok(LemmaPolarReport {
        truncation,
        k_mismatch,
        low_order_max,
        fitted_deviation_order: crate::fitted_order(&ts, &devs),
        fitted_remainder_order: crate::fitted_order(&ts, &rems),
        rows,
    })
}

/// Central 9-point weights for the fourth derivative (offsets −4..4,
/// exact on polynomials of degree ≤ 9).
pub const FOURTH_DERIVATIVE_STENCIL: [f64; 9] = [
    7.0 / 240.0,
    -2.0 / 5.0,
    169.0 / 60.0,
    -122.0 / 15.0,
    91.0 / 8.0,
    -122.0 / 15.0,
    169.0 / 60.0,
    -2.0 / 5.0,
    7.0 / 240.0,
];

/// `∂⁴r/∂t⁴(θ, 0)` by the 9-point stencil at step `h` and `h/2`, combined
/// by one Richardson step (the stencil error is `O(h⁶)`).
pub fn fourth_t_derivative_at_zero(solver: &SliceSolver, theta: f64, h: f64) -> Result<f64> {
    let stencil = |step: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (i, w) in FOURTH_DERIVATIVE_STENCIL.iter().enumerate() {
            acc += w * solver.solve(theta, (i as f64 - 4.0) * step)?;
        }
        Ok(acc / step.powi(4))
    };
    let coarse = stencil(h)?;
    let fine = stencil(h / 2.0)?;
    Ok((64.0 * fine - coarse) / 63.0)
}
