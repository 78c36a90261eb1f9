//! Order-by-order solution of the moment equations for an unknown real
//! weight `c(θ, t) = Σ γ_k(t) e^{ikθ}`, `γ₀ ≡ 1`.
//!
//! At order `tⁿ` the new coefficients `γ_k⁽ⁿ⁾` enter only through the `t = 0`
//! kernels, where `Wⱼ` sees `γ̄ⱼ₊₁` and `Zⱼ` sees `γ̄ⱼ`. The system without
//! the `Z₂` row therefore has full column rank, and the `Z₂` residual at
//! order `t⁴` is the obstruction to stationarity.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::DEFAULT_J_MAX;
use crate::error::{Error, Result};
use crate::hypersurface::PreparedDefiningFunction;
use crate::series::{FourierTaylorSeries, Variable};
use crate::slice_polar::{solve_r_symbolic_with, substitute_polar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub j_max: usize,
    /// Fourier box of the internal kernel series.
    pub k_internal: usize,
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            j_max: DEFAULT_J_MAX,
            k_internal: 48,
            tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObstructionReport {
    /// `Z₂` residual at order `t⁴`, in units of `μ₂ᶻ`.
    pub obstruction: Complex64,
    /// Orders at which the full moment system was consistent.
    pub solvable_orders: Vec<usize>,
    /// Max residual of the system without the `Z₂` row, per order.
    pub reduced_residuals: Vec<f64>,
    pub gamma_series: FourierTaylorSeries,
    pub order: usize,
}

impl ObstructionReport {
    pub fn solvable_through(&self, order: usize) -> bool {
        (0..=order).all(|n| self.solvable_orders.contains(&n))
    }

    /// `key = value` block with `obstruction_re`, `obstruction_im` and
    /// `solvable_orders`.
    pub fn to_text(&self) -> String {
        let orders: Vec<String> = self.solvable_orders.iter().map(|n| n.to_string()).collect();
        let mut s = String::new();
        writeln!(s, "obstruction_re = {:e}", self.obstruction.re).expect("write to string");
        writeln!(s, "obstruction_im = {:e}", self.obstruction.im).expect("write to string");
        writeln!(s, "solvable_orders = [{}]", orders.join(", ")).expect("write to string");
        s
    }
}

pub fn obstruction_solver(f: &PreparedDefiningFunction, order: usize) -> Result<ObstructionReport> {
    obstruction_solver_with(f, order, SolverOptions::default())
}

/// `(W_1..W_J, Z_1..Z_J)` kernel series, moments being `2π Σ_k γ_k P_{−k}`.
fn kernels(
    f: &PreparedDefiningFunction,
    order: usize,
    opts: SolverOptions,
) -> Result<Vec<FourierTaylorSeries>> {
    let (k, m) = (opts.k_internal, order);
    let r = solve_r_symbolic_with(f, k, m);
    let i = Complex64::i();
    let z = r.shift_mode(1);
    let tangent = r.diff_theta().add(&r.scale(i)).shift_mode(1);
    let w_factor = FourierTaylorSeries::constant(0.5, k, m)
        .sub(&substitute_polar(&f.h().restrict_s0(), &r, 0).scale(i * 0.5))
        .mul(&tangent);
    let pz = f.slice_potential().partial(Variable::Z);
    let z_factor = substitute_polar(&pz, &r, 1).scale_real(-1.0).mul(&tangent);
    let mut w_rows = Vec::with_capacity(opts.j_max);
    let mut z_rows = Vec::with_capacity(opts.j_max);
    let mut zj = z.clone();
    for _ in 0..opts.j_max {
        w_rows.push(zj.mul(&w_factor));
        z_rows.push(zj.mul(&z_factor));
        zj = zj.mul(&z);
    }
    let rows: Vec<FourierTaylorSeries> = w_rows.into_iter().chain(z_rows).collect();
    if rows.iter().any(|p| p.truncation_loss()) {
        return Err(Error::Structural(format!(
            "kernel modes exceed the internal box k_max = {}",
            opts.k_internal
        )));
    }
    Ok(rows)
}

pub fn obstruction_solver_with(
    f: &PreparedDefiningFunction,
    order: usize,
    opts: SolverOptions,
) -> Result<ObstructionReport> {
    if order < 4 {
        return Err(Error::Domain(format!(
            "order {order} < 4 does not reach the obstruction"
        )));
    }
    if opts.j_max < 2 {
        return Err(Error::Domain("j_max must be at least 2".into()));
    }
    let rows = kernels(f, order, opts)?;
    let z2 = opts.j_max + 1;
    let modes = opts.j_max + 1;
    let mut gamma = FourierTaylorSeries::constant(1.0, modes, order);

    // Columns act on (Re γ_k, Im γ_k), with γ_{−k} = conj(γ_k).
    let column = |p: &FourierTaylorSeries, k: i64, imag: bool| {
        let (minus, plus) = (p.get(-k, 0), p.get(k, 0));
        if imag {
            Complex64::i() * (minus - plus)
        } else {
            minus + plus
        }
    };
    let n_cols = 2 * modes;
    let reduced: Vec<usize> = (0..rows.len()).filter(|r| *r != z2).collect();
    let mut a_full = DMatrix::zeros(2 * rows.len(), n_cols);
    for (r, p) in rows.iter().enumerate() {
        for k in 1..=modes as i64 {
            for (slot, imag) in [(0, false), (1, true)] {
                let v = column(p, k, imag);
                let col = 2 * (k as usize - 1) + slot;
                a_full[(2 * r, col)] = v.re;
                a_full[(2 * r + 1, col)] = v.im;
            }
        }
    }
    let a_red = DMatrix::from_fn(2 * reduced.len(), n_cols, |i, j| {
        a_full[(2 * reduced[i / 2] + i % 2, j)]
    });
    let svd = a_red.clone().svd(true, true);
    let (s_max, s_min) = (svd.singular_values.max(), svd.singular_values.min());
    if s_min <= 1e-10 * s_max {
        return Err(Error::Structural(format!(
            "reduced moment operator is rank deficient (σ_min/σ_max = {:e})",
            s_min / s_max
        )));
    }

    let mut solvable_orders = Vec::new();
    let mut reduced_residuals = Vec::new();
    let mut obstruction = Complex64::new(0.0, 0.0);
    for n in 0..=order {
        // Contribution of the already known coefficients γ⁽ᵐ⁾, m < n, and γ₀.
        let known: Vec<Complex64> = rows
            .iter()
            .map(|p| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, m, g) in gamma.terms() {
                    if m < n || (k == 0 && m == 0) {
                        acc += g * p.get(-k, n - m);
                    }
                }
                acc
            })
            .collect();
        let b = DVector::from_fn(2 * reduced.len(), |i, _| {
            let v = known[reduced[i / 2]];
            -if i % 2 == 0 { v.re } else { v.im }
        });
        let x = svd
            .solve(&b, 0.0)
            .map_err(|e| Error::Structural(format!("order {n} solve failed: {e}")))?;
        let fitted = &a_full * &x;
        let residual =
            |r: usize| Complex64::new(fitted[2 * r] + known[r].re, fitted[2 * r + 1] + known[r].im);
        let red_res = reduced
            .iter()
            .map(|r| residual(*r).norm())
            .fold(0.0, f64::max);
        let z2_res = residual(z2);
        if red_res > opts.tolerance && n <= 4 {
            return Err(Error::Structural(format!(
                "moment system inconsistent outside the Z₂ direction at order {n} (residual {red_res:e})"
            )));
        }
        reduced_residuals.push(red_res);
        if red_res.max(z2_res.norm()) <= opts.tolerance {
            solvable_orders.push(n);
        }
        if n == 4 {
            obstruction = z2_res * (2.0 * std::f64::consts::PI);
        }
        for k in 1..=modes as i64 {
            let g = Complex64::new(x[2 * (k as usize - 1)], x[2 * (k as usize - 1) + 1]);
            gamma.set(k, n, g);
            gamma.set(-k, n, g.conj());
        }
    }
    if !gamma.check_real(1e-14) {
        return Err(Error::Structural("solved weight is not real".into()));
    }

    let low_order = gamma
        .terms()
        .filter(|(k, m, _)| (1..=3).contains(m) || (*m == 4 && k.abs() == 2))
        .map(|(_, _, g)| g.norm())
        .fold(0.0, f64::max);
    if low_order > 1e-12 {
        return Err(Error::Structural(format!(
            "solved weight has coefficients {low_order:e} where γ̄ⱼ₊₁ = O(t⁴), γ₂ = O(t⁵) force zeros"
        )));
    }

    Ok(ObstructionReport {
        obstruction,
        solvable_orders,
        reduced_residuals,
        gamma_series: gamma,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::HermitianSeries;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sphere_is_unobstructed() {
        let rep = obstruction_solver(&PreparedDefiningFunction::heisenberg(), 6).unwrap();
        assert_eq!(rep.obstruction, c(0.0, 0.0));
        assert_eq!(rep.solvable_orders, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(
            rep.gamma_series.terms().collect::<Vec<_>>(),
            vec![(0, 0, c(1.0, 0.0))]
        );
    }

    #[test]
    fn umbilic_obstruction_matches_hand_expansion() {
        // Z₂ ⊃ 2πi(γ̄₂ − (A γ̄₀ + Ā γ̄₄) t⁴) with γ₂⁽⁴⁾ = γ₄⁽⁰⁾ = 0
        let a = c(0.3, 0.4);
        let rep = obstruction_solver(&PreparedDefiningFunction::with_umbilic(a), 4).unwrap();
        assert!((rep.obstruction + 2.0 * PI * Complex64::i() * a).norm() < 1e-12);
        assert_eq!(rep.solvable_orders, vec![0, 1, 2, 3]);
        // W_{j} at order 4 fixes γ̄_{j+1} = −((j−1) A γ̄_{j−1} + (j+3) Ā γ̄_{j+3})/2
        assert!(rep.gamma_series.get(2, 4).norm() < 1e-13);
    }

    #[test]
    fn report_text_block() {
        let rep =
            obstruction_solver(&PreparedDefiningFunction::with_umbilic(c(1.0, 0.0)), 4).unwrap();
        let text = rep.to_text();
        assert!(text.contains("obstruction_re = "));
        assert!(text.contains("obstruction_im = -6.28318530717958"));
        assert!(text.contains("solvable_orders = [0, 1, 2, 3]"));
    }

    #[test]
    fn zero_umbilic_with_higher_terms() {
        let mut g = HermitianSeries::new(7);
        g.add_real_term(5, 2, 0, c(0.3, -0.2));
        let mut h = HermitianSeries::new(6);
        h.add_real_term(4, 2, 0, c(0.1, 0.05));
        h.add_real_term(1, 1, 1, c(0.4, 0.0));
        let f = PreparedDefiningFunction::new(c(0.0, 0.0), h, g).unwrap();
        let rep = obstruction_solver(&f, 6).unwrap();
        assert!(rep.obstruction.norm() < 1e-12);
        assert!(rep.solvable_through(4));
    }

    #[test]
    fn rejects_low_order() {
        assert!(matches!(
            obstruction_solver(&PreparedDefiningFunction::heisenberg(), 3),
            Err(Error::Domain(_))
        ));
    }
}
