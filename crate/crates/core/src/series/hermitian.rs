use std::collections::BTreeMap;

use num_complex::Complex64;

/// Variable of a [`HermitianSeries`] monomial `z^a z̄^b s^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Z,
    ZBar,
    S,
}

/// Polynomial `Σ c_{a,b,m} z^a z̄^b s^m` with a declared vanishing order in
/// `(z, z̄)`.
///
/// Real-valued series satisfy `c_{a,b,m} = conj(c_{b,a,m})`; formal partial
/// derivatives generally do not, so the reality condition is checked with
/// [`HermitianSeries::is_hermitian`] rather than enforced on every value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HermitianSeries {
    coeffs: BTreeMap<(u32, u32, u32), Complex64>,
    min_total_degree: u32,
}

impl HermitianSeries {
    pub fn new(min_total_degree: u32) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            min_total_degree,
        }
    }

    pub fn min_total_degree(&self) -> u32 {
        self.min_total_degree
    }

    pub fn set_min_total_degree(&mut self, degree: u32) {
        self.min_total_degree = degree;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn get(&self, a: u32, b: u32, m: u32) -> Complex64 {
        self.coeffs.get(&(a, b, m)).copied().unwrap_or_default()
    }

    /// Adds `c z^a z̄^b s^m`.
    pub fn add_term(&mut self, a: u32, b: u32, m: u32, c: Complex64) {
        *self.coeffs.entry((a, b, m)).or_default() += c;
    }

    /// Adds `c z^a z̄^b s^m + c̄ z^b z̄^a s^m`, a real-valued term.
    pub fn add_real_term(&mut self, a: u32, b: u32, m: u32, c: Complex64) {
        self.add_term(a, b, m, c);
        self.add_term(b, a, m, c.conj());
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32, u32), Complex64)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, *v))
    }

    pub fn max_total_degree(&self) -> u32 {
        self.coeffs.keys().map(|(a, b, _)| a + b).max().unwrap_or(0)
    }

    /// `c_{a,b,m} = conj(c_{b,a,m})` to `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .all(|(&(a, b, m), c)| (c - self.get(b, a, m).conj()).norm() <= tol)
    }

    /// First `(a, b, m)` with a nonzero coefficient below the declared order.
    pub fn degree_violation(&self) -> Option<(u32, u32, u32)> {
        self.coeffs
            .iter()
            .find(|(&(a, b, _), c)| a + b < self.min_total_degree && **c != Complex64::default())
            .map(|(k, _)| *k)
    }

    /// `Σ c z^a ζ^b s^m` with `ζ` standing for `z̄` independently (the
    /// complexified series).
    pub fn eval_complexified(&self, z: Complex64, zeta: Complex64, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&(a, b, m), c)| c * z.powu(a) * zeta.powu(b) * s.powu(m))
            .sum()
    }

    pub fn eval_complex(&self, z: Complex64, s: f64) -> Complex64 {
        self.eval_complexified(z, z.conj(), Complex64::new(s, 0.0))
    }

    /// Real value at `(z, z̄, s)`; the imaginary part is roundoff for a
    /// Hermitian series and is discarded.
    pub fn eval(&self, z: Complex64, s: f64) -> f64 {
        self.eval_complex(z, s).re
    }

    /// Formal partial derivative with respect to one variable.
    pub fn partial(&self, var: Variable) -> Self {
        let mut out = Self::new(match var {
            Variable::S => self.min_total_degree,
            _ => self.min_total_degree.saturating_sub(1),
        });
        for (&(a, b, m), c) in &self.coeffs {
            let (factor, key) = match var {
                Variable::Z if a > 0 => (a, (a - 1, b, m)),
                Variable::ZBar if b > 0 => (b, (a, b - 1, m)),
                Variable::S if m > 0 => (m, (a, b, m - 1)),
                _ => continue,
            };
            out.add_term(key.0, key.1, key.2, c * factor as f64);
        }
        out
    }

    /// Terms with `s`-order 0, i.e. the restriction to `s = 0`.
    pub fn restrict_s0(&self) -> Self {
        let mut out = Self::new(self.min_total_degree);
        for (&(a, b, m), c) in &self.coeffs {
            if m == 0 {
                out.add_term(a, b, 0, *c);
            }
        }
        out
    }

    /// Multiplies by `s`.
    pub fn times_s(&self) -> Self {
        let mut out = Self::new(self.min_total_degree);
        for (&(a, b, m), c) in &self.coeffs {
            out.add_term(a, b, m + 1, *c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.min_total_degree = self.min_total_degree.min(other.min_total_degree);
        for (&(a, b, m), c) in &other.coeffs {
            out.add_term(a, b, m, *c);
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|c| *c *= factor);
        out
    }
}
