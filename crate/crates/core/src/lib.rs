//! Numerical and symbolic verification that the slice discs `{w = t²}` of a
//! prepared strictly pseudoconvex hypersurface
//!
//! ```text
//! ρ = Re w − |z|² + A z²z̄⁴ + Ā z⁴z̄² + Im w·h(z, z̄, Im w) + g(z, z̄),   g = O(|z|⁷)
//! ```
//!
//! can only be stationary when the umbilic coefficient `A` vanishes.
//!
//! The crate is organised bottom-up:
//!
//! * [`series`]: truncated Fourier–Taylor series in `(θ, t)` and Hermitian
//!   power series in `(z, z̄, s)`.
//! * [`hypersurface`]: prepared defining functions, Heisenberg automorphisms,
//!   the bordered-Hessian certificate and Segre graphs.
//! * [`slice_polar`]: the polar radius `r(θ, t)` of the rescaled slice curve,
//!   numerically (Newton) and symbolically (order by order).
//! * [`conformal`]: Theodorsen's boundary-correspondence iteration for the
//!   Riemann map of each slice.
//! * [`stationarity`]: Pang weight, moment conditions, Cauchy transform,
//!   the symbolic obstruction solver and the estimator for `A`.

pub mod conformal;
pub mod error;
pub mod hypersurface;
pub mod series;
pub mod slice_polar;
pub mod spectral;
pub mod stationarity;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Fitted log–log slope of `values` against `ts`.
///
/// Points whose value is below `1e-14` carry no slope information and are
/// dropped; with fewer than three usable points the result is `+∞`.
pub fn fitted_order(ts: &[f64], values: &[f64]) -> f64 {
    const FLOOR: f64 = 1e-14;
    let pts: Vec<(f64, f64)> = ts
        .iter()
        .zip(values)
        .filter(|(_, v)| **v > FLOOR)
        .map(|(t, v)| (t.ln(), v.ln()))
        .collect();
    if pts.len() < 3 {
        return f64::INFINITY;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Geometric grid of `points` values from `min` to `max` inclusive.
pub fn geometric_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let ratio = (max / min).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| min * ratio.powi(i as i32)).collect()
}

/// Linear grid of `points` values from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![min];
    }
    let step = (max - min) / (points - 1) as f64;
    (0..points).map(|i| min + step * i as f64).collect()
}
