//! Recovery of the umbilic coefficient from the numeric moment pipeline.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{obstruction_solver, scan};
use crate::error::{Error, Result};
use crate::hypersurface::PreparedDefiningFunction;

const DATA_FLOOR: f64 = 1e-11;
const MAX_RELATIVE_RESIDUAL: f64 = 0.1;

/// The factor `κ` in `obstruction = κ·A`, from the solver at `A = 1`.
pub fn obstruction_constant() -> Result<Complex64> {
    let f = PreparedDefiningFunction::with_umbilic(Complex64::new(1.0, 0.0));
    Ok(obstruction_solver(&f, 4)?.obstruction)
}

/// Least-squares fit `values ≈ C t⁴ + D t⁵`, done as `values/t⁴ ≈ C + D t`.
/// Returns `(C, D, relative residual)`.
pub fn fit_leading_coefficient(
    ts: &[f64],
    values: &[Complex64],
) -> Result<(Complex64, Complex64, f64)> {
    if ts.len() != values.len() || ts.len() < 2 {
        return Err(Error::Estimation(format!("cannot fit {} points", ts.len())));
    }
    let a = DMatrix::from_fn(ts.len(), 2, |i, j| if j == 0 { 1.0 } else { ts[i] });
    let b = DMatrix::from_fn(ts.len(), 2, |i, j| {
        let y = values[i] / ts[i].powi(4);
        if j == 0 {
            y.re
        } else {
            y.im
        }
    });
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Estimation(e.to_string()))?;
    let fit = &a * &x;
    let resid = (&fit - &b).norm();
    let scale = b.norm();
    let relative = if scale > 0.0 { resid / scale } else { 0.0 };
    Ok((
        Complex64::new(x[(0, 0)], x[(0, 1)]),
        Complex64::new(x[(1, 0)], x[(1, 1)]),
        relative,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub a_hat: Complex64,
    /// Fitted `t⁴` coefficient of the corrected `μ₂ᶻ`.
    pub leading: Complex64,
    pub next: Complex64,
    pub relative_residual: f64,
    pub constant: Complex64,
    pub samples: Vec<(f64, Complex64)>,
}

/// `Â = C/κ` from the corrected `μ₂ᶻ(t)` on a geometric grid of at least six
/// points in `[0.02, 0.2]`.
pub fn estimate_a(
    f: &PreparedDefiningFunction,
    t_grid: &[f64],
    n: usize,
    j_max: usize,
) -> Result<EstimateReport> {
    let inside = t_grid
        .iter()
        .filter(|t| (0.02 - 1e-12..=0.2 + 1e-12).contains(*t))
        .count();
    if inside < 6 || inside != t_grid.len() {
        return Err(Error::Domain(format!(
            "need at least 6 grid points, all in [0.02, 0.2]; got {inside} of {}",
            t_grid.len()
        )));
    }
    let ratios: Vec<f64> = t_grid.windows(2).map(|w| w[1] / w[0]).collect();
    if ratios
        .iter()
        .any(|q| (q - ratios[0]).abs() > 1e-9 * ratios[0] || *q <= 1.0)
    {
        return Err(Error::Domain("t grid is not increasing geometric".into()));
    }
    let slices = scan(f, t_grid, n, j_max)?;
    let samples: Vec<(f64, Complex64)> =
        slices.iter().map(|s| (s.t, s.obstruction_moment)).collect();
    let values: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    let (leading, next, relative_residual) = fit_leading_coefficient(t_grid, &values)?;
    let data_max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if data_max > DATA_FLOOR && relative_residual > MAX_RELATIVE_RESIDUAL {
        return Err(Error::Estimation(format!(
            "C t⁴ + D t⁵ fit leaves relative residual {relative_residual:.3}"
        )));
    }
    let constant = obstruction_constant()?;
    Ok(EstimateReport {
        a_hat: leading / constant,
        leading,
        next,
        relative_residual,
        constant,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_planted_polynomial() {
        let ts = crate::geometric_grid(0.02, 0.2, 7);
        let (c0, d0) = (Complex64::new(1.5, -2.0), Complex64::new(0.3, 0.7));
        let v: Vec<Complex64> = ts.iter().map(|t| c0 * t.powi(4) + d0 * t.powi(5)).collect();
        let (c, d, rel) = fit_leading_coefficient(&ts, &v).unwrap();
        assert!((c - c0).norm() < 1e-12 && (d - d0).norm() < 1e-10 && rel < 1e-12);
    }

    #[test]
    fn grid_preconditions() {
        let f = PreparedDefiningFunction::heisenberg();
        assert!(matches!(
            estimate_a(&f, &crate::geometric_grid(0.02, 0.2, 5), 32, 4),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            estimate_a(&f, &crate::linear_grid(0.02, 0.2, 8), 32, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sphere_estimate_is_zero() {
        let f = PreparedDefiningFunction::heisenberg();
        let rep = estimate_a(&f, &crate::geometric_grid(0.02, 0.2, 6), 32, 4).unwrap();
        assert!(rep.a_hat.norm() <= 1e-6);
    }
}
