//! Prepared defining functions
//!
//! ```text
//! ρ(z, w) = Re w − |z|² + A z²z̄⁴ + Ā z⁴z̄² + Im w·h(z, z̄, Im w) + g(z, z̄)
//! ```
//!
//! with `g = O(|z|⁷)` and `h(z, z̄, 0) = O(|z|⁶)`. Everything except `Re w` is
//! collected into a single potential `P(z, z̄, s)` with `s = Im w`, so that
//! `ρ = Re w + P(z, z̄, Im w)` and all complex derivatives of `ρ` reduce to
//! formal derivatives of `P`.

mod heisenberg;
mod io;
mod segre;

pub use heisenberg::HeisenbergAut;
pub use io::{parse_model, write_model};
pub use segre::{segre_graph, SegreGraph};

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{HermitianSeries, Variable};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PreparedDefiningFunction {
    a: Complex64,
    h: HermitianSeries,
    g: HermitianSeries,
    potential: HermitianSeries,
}

impl PreparedDefiningFunction {
    /// Validates the order and reality constraints on `h` and `g`.
    pub fn new(a: Complex64, h: HermitianSeries, g: HermitianSeries) -> Result<Self> {
        if let Some(((a_, b_, m_), _)) = g
            .terms()
            .find(|((a, b, m), c)| (*m != 0 || a + b < 7) && *c != Complex64::default())
        {
            return Err(Error::Domain(format!(
                "g term z^{a_} zbar^{b_} s^{m_} violates g = O(|z|^7) with no s-dependence"
            )));
        }
        if let Some(((a_, b_, _), _)) = h
            .terms()
            .find(|((a, b, m), c)| *m == 0 && a + b < 6 && *c != Complex64::default())
        {
            return Err(Error::Domain(format!(
                "h term z^{a_} zbar^{b_} violates h(z, zbar, 0) = O(|z|^6)"
            )));
        }
        for (name, s) in [("h", &h), ("g", &g)] {
            if !s.is_hermitian(1e-12) {
                return Err(Error::Domain(format!(
                    "{name} is not a real-valued (Hermitian) series"
                )));
            }
        }
        let mut g = g;
        g.set_min_total_degree(7);
        let mut potential = HermitianSeries::new(2);
        potential.add_term(1, 1, 0, Complex64::new(-1.0, 0.0));
        potential.add_real_term(2, 4, 0, a);
        potential = potential.add(&h.times_s()).add(&g);
        potential.set_min_total_degree(2);
        Ok(Self { a, h, g, potential })
    }

    /// The model `Re w = |z|²`.
    pub fn heisenberg() -> Self {
        Self::with_umbilic(Complex64::default())
    }

    /// `h = g = 0` with the given umbilic coefficient.
    pub fn with_umbilic(a: Complex64) -> Self {
        Self::new(a, HermitianSeries::new(6), HermitianSeries::new(7))
            .expect("valid by construction")
    }

    pub fn umbilic(&self) -> Complex64 {
        self.a
    }

    pub fn h(&self) -> &HermitianSeries {
        &self.h
    }

    pub fn g(&self) -> &HermitianSeries {
        &self.g
    }

    /// Same `h` and `g` with a different umbilic coefficient.
    pub fn replace_umbilic(&self, a: Complex64) -> Self {
        Self::new(a, self.h.clone(), self.g.clone()).expect("constraints unchanged")
    }

    /// `P(z, z̄, s)` with `ρ = Re w + P(z, z̄, Im w)`.
    pub fn potential(&self) -> &HermitianSeries {
        &self.potential
    }

    /// `P(z, z̄, 0)`, the part of `ρ − Re w` seen on the slices `w = t²`.
    pub fn slice_potential(&self) -> HermitianSeries {
        self.potential.restrict_s0()
    }

    pub fn rho_eval(&self, z: Complex64, w: Complex64) -> f64 {
        w.re + self.potential.eval(z, w.im)
    }

    /// `(∂ρ/∂z, ∂ρ/∂w)`.
    pub fn rho_grad(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        let s = w.im;
        let pz = self.potential.partial(Variable::Z).eval_complex(z, s);
        let ps = self.potential.partial(Variable::S).eval_complex(z, s);
        (pz, 0.5 - 0.5 * I * ps)
    }

    /// Complexified `ρ(Z, W̄)` with `z̄ → zeta`, `w̄ → omega`:
    /// `(w + ω)/2 + P(z, ζ, (w − ω)/(2i))`.
    pub fn rho_complexified(
        &self,
        z: Complex64,
        w: Complex64,
        zeta: Complex64,
        omega: Complex64,
    ) -> Complex64 {
        (w + omega) * 0.5
            + self
                .potential
                .eval_complexified(z, zeta, (w - omega) / (2.0 * I))
    }

    /// Determinant of the bordered complex Hessian
    ///
    /// ```text
    /// | 0     ρ_z     ρ_w   |
    /// | ρ_z̄   ρ_zz̄    ρ_wz̄  |
    /// | ρ_w̄   ρ_zw̄    ρ_ww̄  |
    /// ```
    ///
    /// Nonzero certifies strict pseudoconvexity at `(z, w)`.
    pub fn pseudoconvexity_certificate(&self, z: Complex64, w: Complex64) -> f64 {
        let s = w.im;
        let p = &self.potential;
        let ev = |ser: &HermitianSeries| ser.eval_complex(z, s);
        let pz = p.partial(Variable::Z);
        let ps = p.partial(Variable::S);
        let rho_z = ev(&pz);
        let rho_zbar = ev(&p.partial(Variable::ZBar));
        let rho_w = 0.5 - 0.5 * I * ev(&ps);
        let rho_wbar = 0.5 + 0.5 * I * ev(&ps);
        let rho_zzbar = ev(&pz.partial(Variable::ZBar));
        let rho_wzbar = -0.5 * I * ev(&ps.partial(Variable::ZBar));
        let rho_zwbar = 0.5 * I * ev(&pz.partial(Variable::S));
        let rho_wwbar = 0.25 * ev(&ps.partial(Variable::S));
        let m = Matrix3::new(
            Complex64::default(),
            rho_z,
            rho_w,
            rho_zbar,
            rho_zzbar,
            rho_wzbar,
            rho_wbar,
            rho_zwbar,
            rho_wwbar,
        );
        m.determinant().re
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rho_on_heisenberg_and_origin() {
        let f = PreparedDefiningFunction::heisenberg();
        assert_eq!(f.rho_eval(c(1.0, 0.0), c(2.0, 5.0)), 1.0);
        assert_eq!(f.rho_eval(c(0.0, 0.0), c(0.0, 0.0)), 0.0);
        let f1 = PreparedDefiningFunction::with_umbilic(c(1.0, 0.0));
        assert!((f1.rho_eval(c(1.0, 0.0), c(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gradient_of_heisenberg() {
        let f = PreparedDefiningFunction::heisenberg();
        let z0 = c(0.3, -0.7);
        let (dz, dw) = f.rho_grad(z0, c(0.1, 0.4));
        assert_eq!(dw, c(0.5, 0.0));
        assert!((dz + z0.conj()).norm() < 1e-15);
    }

    #[test]
    fn gradient_with_umbilic_on_unit_circle() {
        let f = PreparedDefiningFunction::with_umbilic(c(1.0, 0.0));
        for th in [0.0, 0.4, 2.1] {
            let e = |k: f64| Complex64::from_polar(1.0, k * th);
            let (dz, _) = f.rho_grad(e(1.0), c(0.3, 0.0));
            let expected = -e(-1.0) + 2.0 * e(-3.0) + 4.0 * e(1.0);
            assert!((dz - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn dw_on_slice_is_half_minus_i_half_h() {
        let mut h = HermitianSeries::new(6);
        h.add_real_term(3, 3, 0, c(0.7, 0.0));
        h.add_real_term(1, 0, 1, c(0.2, 0.1));
        let f =
            PreparedDefiningFunction::new(c(0.0, 0.0), h.clone(), HermitianSeries::new(7)).unwrap();
        let z = c(0.2, 0.1);
        let (_, dw) = f.rho_grad(z, c(0.04, 0.0));
        let expected = 0.5 - 0.5 * I * h.eval_complex(z, 0.0);
        assert_eq!(dw, expected);
    }

    #[test]
    fn bordered_hessian_at_origin() {
        let f = PreparedDefiningFunction::heisenberg();
        let d = f.pseudoconvexity_certificate(c(0.0, 0.0), c(0.0, 0.0));
        assert!((d - 0.25).abs() < 1e-15);
        assert_eq!(d, f.pseudoconvexity_certificate(c(0.0, 0.0), c(0.0, 0.0)));
        let f = PreparedDefiningFunction::with_umbilic(c(0.1, 0.0));
        assert!((f.pseudoconvexity_certificate(c(0.0, 0.0), c(0.0, 0.0)) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_low_order_terms() {
        let mut g = HermitianSeries::new(7);
        g.add_real_term(3, 3, 0, c(1.0, 0.0));
        assert!(PreparedDefiningFunction::new(c(0.0, 0.0), HermitianSeries::new(6), g).is_err());
        let mut h = HermitianSeries::new(6);
        h.add_real_term(2, 2, 0, c(1.0, 0.0));
        assert!(PreparedDefiningFunction::new(c(0.0, 0.0), h, HermitianSeries::new(7)).is_err());
        let mut g = HermitianSeries::new(7);
        g.add_term(4, 3, 0, c(1.0, 0.0));
        assert!(PreparedDefiningFunction::new(c(0.0, 0.0), HermitianSeries::new(6), g).is_err());
    }
}
