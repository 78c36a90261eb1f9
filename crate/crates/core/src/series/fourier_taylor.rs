use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_K_MAX: usize = 16;
pub const DEFAULT_M_MAX: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated double series `Σ c_{k,m} e^{ikθ} t^m`, `|k| ≤ k_max`, `m ≤ m_max`.
///
/// Terms beyond `t^m_max` are dropped as ordinary truncation. Nonzero terms
/// with `|k| > k_max` are dropped too but set `truncation_loss`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTaylorSeries {
    k_max: usize,
    m_max: usize,
    coeffs: Vec<Complex64>,
    is_real: bool,
    truncation_loss: bool,
}

impl FourierTaylorSeries {
    pub fn zeros(k_max: usize, m_max: usize) -> Self {
        Self {
            k_max,
            m_max,
            coeffs: vec![ZERO; (2 * k_max + 1) * (m_max + 1)],
            is_real: true,
            truncation_loss: false,
        }
    }

    pub fn constant(value: f64, k_max: usize, m_max: usize) -> Self {
        let mut s = Self::zeros(k_max, m_max);
        s.set(0, 0, Complex64::new(value, 0.0));
        s
    }

    /// `c · e^{ikθ} t^m`. Not real unless `k = 0` and `c` is real.
    pub fn monomial(k: i64, m: usize, c: Complex64, k_max: usize, m_max: usize) -> Self {
        let mut s = Self::zeros(k_max, m_max);
        s.set(k, m, c);
        s.is_real = k == 0 && c.im == 0.0;
        s
    }

    /// Real series `c e^{ikθ} t^m + c̄ e^{−ikθ} t^m` (`2 Re c` when `k = 0`).
    pub fn real_mode(k: i64, m: usize, c: Complex64, k_max: usize, m_max: usize) -> Self {
        let mut s = Self::zeros(k_max, m_max);
        s.add_to(k, m, c);
        s.add_to(-k, m, c.conj());
        s
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn truncation_loss(&self) -> bool {
        self.truncation_loss
    }

    fn index(&self, k: i64, m: usize) -> Option<usize> {
        if k.unsigned_abs() as usize > self.k_max || m > self.m_max {
            return None;
        }
        Some((k + self.k_max as i64) as usize * (self.m_max + 1) + m)
    }

    pub fn get(&self, k: i64, m: usize) -> Complex64 {
        self.index(k, m).map_or(ZERO, |i| self.coeffs[i])
    }

    /// Sets a coefficient; out-of-box nonzero values are dropped and flagged.
    /// Clears the reality flag; use [`Self::check_real`] to re-establish it.
    pub fn set(&mut self, k: i64, m: usize, c: Complex64) {
        match self.index(k, m) {
            Some(i) => self.coeffs[i] = c,
            None => self.truncation_loss |= m <= self.m_max && c != ZERO,
        }
        if k != 0 || c.im != 0.0 {
            self.is_real = false;
        }
    }

    fn add_to(&mut self, k: i64, m: usize, c: Complex64) {
        match self.index(k, m) {
            Some(i) => self.coeffs[i] += c,
            None => self.truncation_loss |= m <= self.m_max && c != ZERO,
        }
    }

    /// Iterator over `(k, m, c)` for the nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, usize, Complex64)> + '_ {
        let width = self.m_max + 1;
        let k_max = self.k_max as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != ZERO)
            .map(move |(i, c)| ((i / width) as i64 - k_max, i % width, *c))
    }

    /// Re-checks `c_{−k,m} = conj(c_{k,m})` to `tol` and sets the flag.
    pub fn check_real(&mut self, tol: f64) -> bool {
        let k_max = self.k_max as i64;
        let ok = (0..=k_max).all(|k| {
            (0..=self.m_max).all(|m| (self.get(-k, m) - self.get(k, m).conj()).norm() <= tol)
        });
        self.is_real = ok;
        ok
    }

    /// Projects onto real series: `(x + conj x)/2` coefficientwise.
    pub fn real_part(&self) -> Self {
        let mut out = Self::zeros(self.k_max, self.m_max);
        for (k, m, c) in self.terms() {
            out.add_to(k, m, c * 0.5);
            out.add_to(-k, m, c.conj() * 0.5);
        }
        out.truncation_loss = self.truncation_loss;
        out.is_real = true;
        out
    }

    /// Pointwise complex conjugate of the function.
    pub fn conj(&self) -> Self {
        let mut out = Self::zeros(self.k_max, self.m_max);
        for (k, m, c) in self.terms() {
            out.add_to(-k, m, c.conj());
        }
        out.is_real = self.is_real;
        out.truncation_loss = self.truncation_loss;
        out
    }

    fn with_bounds_of(&self, other: &Self) -> Self {
        Self::zeros(self.k_max.max(other.k_max), self.m_max.max(other.m_max))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.with_bounds_of(other);
        for (k, m, c) in self.terms().chain(other.terms()) {
            out.add_to(k, m, c);
        }
        out.is_real = self.is_real && other.is_real;
        out.truncation_loss = self.truncation_loss || other.truncation_loss;
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out.is_real = self.is_real && factor.im == 0.0;
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Convolution in `k`, Cauchy product in `m`, truncated to the larger box.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.with_bounds_of(other);
        let rhs: Vec<_> = other.terms().collect();
        for (k1, m1, c1) in self.terms() {
            for &(k2, m2, c2) in &rhs {
                out.add_to(k1 + k2, m1 + m2, c1 * c2);
            }
        }
        out.is_real = self.is_real && other.is_real;
        out.truncation_loss |= self.truncation_loss || other.truncation_loss;
        out
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0, self.k_max, self.m_max);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Multiplies by `e^{ipθ}`.
    pub fn shift_mode(&self, p: i64) -> Self {
        let mut out = Self::zeros(self.k_max, self.m_max);
        for (k, m, c) in self.terms() {
            out.add_to(k + p, m, c);
        }
        out.is_real = self.is_real && p == 0;
        out.truncation_loss |= self.truncation_loss;
        out
    }

    /// Multiplies by `t^p`.
    pub fn shift_t(&self, p: usize) -> Self {
        let mut out = Self::zeros(self.k_max, self.m_max);
        for (k, m, c) in self.terms() {
            out.add_to(k, m + p, c);
        }
        out.is_real = self.is_real;
        out.truncation_loss |= self.truncation_loss;
        out
    }

    /// Drops every order above `t^order`.
    pub fn truncate_t(&self, order: usize) -> Self {
        let mut out = self.clone();
        for k in -(self.k_max as i64)..=self.k_max as i64 {
            for m in order + 1..=self.m_max {
                if let Some(i) = out.index(k, m) {
                    out.coeffs[i] = ZERO;
                }
            }
        }
        out
    }

    /// `∂/∂θ`: multiplies `c_{k,m}` by `ik`.
    pub fn diff_theta(&self) -> Self {
        let mut out = self.clone();
        for (k, m, c) in self.terms() {
            let i = out.index(k, m).expect("in range");
            out.coeffs[i] = c * Complex64::new(0.0, k as f64);
        }
        out
    }

    /// `∂/∂t`: `m·c_{k,m}` moves to order `m − 1`.
    pub fn diff_t(&self) -> Self {
        let mut out = Self::zeros(self.k_max, self.m_max);
        for (k, m, c) in self.terms() {
            if m > 0 {
                out.add_to(k, m - 1, c * m as f64);
            }
        }
        out.is_real = self.is_real;
        out.truncation_loss = self.truncation_loss;
        out
    }

    /// Series `y` with `self · y = 1` up to truncation.
    ///
    /// Orders are solved one at a time; within each order the Fourier modes
    /// come from the (Galerkin-truncated) Toeplitz system of the `t⁰` part.
    pub fn reciprocal(&self) -> Result<Self> {
        let c00 = self.get(0, 0);
        if c00 == ZERO {
            return Err(Error::Domain(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let k_max = self.k_max as i64;
        let dim = 2 * self.k_max + 1;
        let toeplitz = DMatrix::from_fn(dim, dim, |r, c| self.get(r as i64 - c as i64, 0));
        let lu = toeplitz.lu();
        let mut out = Self::zeros(self.k_max, self.m_max);
        for m in 0..=self.m_max {
            let mut rhs = nalgebra::DVector::from_element(dim, ZERO);
            if m == 0 {
                rhs[self.k_max] = Complex64::new(1.0, 0.0);
            }
            for (k1, m1, c1) in self.terms().filter(|&(_, m1, _)| m1 >= 1 && m1 <= m) {
                for k2 in -k_max..=k_max {
                    let kk = k1 + k2;
                    if kk.abs() <= k_max {
                        rhs[(kk + k_max) as usize] -= c1 * out.get(k2, m - m1);
                    }
                }
            }
            let sol = lu
                .solve(&rhs)
                .ok_or_else(|| Error::Domain("singular t⁰ part in reciprocal".into()))?;
            for (i, c) in sol.iter().enumerate() {
                out.set(i as i64 - k_max, m, *c);
            }
        }
        if self.is_real {
            out = out.real_part();
        } else {
            out.is_real = false;
        }
        out.truncation_loss = self.truncation_loss;
        Ok(out)
    }

    /// Coefficients `[c_{k,0}, …, c_{k,m_max}]` of the Fourier mode `k`.
    pub fn mode_series(&self, k: i64) -> Vec<Complex64> {
        (0..=self.m_max).map(|m| self.get(k, m)).collect()
    }

    pub fn eval(&self, theta: f64, t: f64) -> Complex64 {
        self.terms()
            .map(|(k, m, c)| c * Complex64::from_polar(1.0, k as f64 * theta) * t.powi(m as i32))
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let k = self.k_max.max(other.k_max) as i64;
        let mm = self.m_max.max(other.m_max);
        (-k..=k)
            .flat_map(|k| (0..=mm).map(move |m| (k, m)))
            .map(|(k, m)| (self.get(k, m) - other.get(k, m)).norm())
            .fold(0.0, f64::max)
    }

    /// Plain-text coefficient table: header `k,m,re,im`, one row per nonzero
    /// coefficient, ordered by `k` then `m`.
    pub fn to_table(&self) -> String {
        let mut s = String::from("k,m,re,im\n");
        for (k, m, c) in self.terms() {
            writeln!(s, "{k},{m},{:e},{:e}", c.re, c.im).expect("write to string");
        }
        s
    }

    pub fn from_table(text: &str, k_max: usize, m_max: usize) -> Result<Self> {
        let mut out = Self::zeros(k_max, m_max);
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line == "k,m,re,im" {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(Error::parse(no + 1, "expected 4 fields k,m,re,im"));
            }
            let bad = || Error::parse(no + 1, format!("malformed row `{line}`"));
            let k: i64 = f[0].parse().map_err(|_| bad())?;
            let m: usize = f[1].parse().map_err(|_| bad())?;
            let re: f64 = f[2].parse().map_err(|_| bad())?;
            let im: f64 = f[3].parse().map_err(|_| bad())?;
            if out.index(k, m).is_none() {
                return Err(Error::parse(
                    no + 1,
                    format!("({k},{m}) outside the truncation box"),
                ));
            }
            out.set(k, m, Complex64::new(re, im));
        }
        out.check_real(0.0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K: usize = DEFAULT_K_MAX;
    const M: usize = DEFAULT_M_MAX;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn add_disjoint_supports() {
        let x = FourierTaylorSeries::constant(1.0, K, M);
        let y = FourierTaylorSeries::monomial(1, 1, c(1.0, 0.0), K, M);
        let s = x.add(&y);
        assert_eq!(s.get(0, 0), c(1.0, 0.0));
        assert_eq!(s.get(1, 1), c(1.0, 0.0));
        assert_eq!(s.terms().count(), 2);
        assert_eq!(x.add(&FourierTaylorSeries::zeros(K, M)), x);
    }

    #[test]
    fn add_cancels_modes() {
        let one = c(1.0, 0.0);
        let a = FourierTaylorSeries::monomial(1, 0, one, K, M)
            .add(&FourierTaylorSeries::monomial(-1, 0, one, K, M));
        let b = FourierTaylorSeries::monomial(1, 0, one, K, M)
            .add(&FourierTaylorSeries::monomial(-1, 0, -one, K, M));
        let s = a.add(&b);
        assert_eq!(s.get(1, 0), c(2.0, 0.0));
        assert_eq!(s.get(-1, 0), c(0.0, 0.0));
    }

    #[test]
    fn product_of_conjugate_monomials() {
        let x = FourierTaylorSeries::monomial(1, 1, c(1.0, 0.0), K, M);
        let y = FourierTaylorSeries::monomial(-1, 1, c(1.0, 0.0), K, M);
        let p = x.mul(&y);
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(0, 2, c(1.0, 0.0))]);
        assert_eq!(x.mul(&FourierTaylorSeries::constant(1.0, K, M)), x);
    }

    #[test]
    fn difference_of_squares_and_truncation_flag() {
        let one = FourierTaylorSeries::constant(1.0, K, M);
        let e = FourierTaylorSeries::monomial(2, 4, c(1.0, 0.0), K, M);
        let p = one.add(&e).mul(&one.sub(&e));
        assert_eq!(p.get(0, 0), c(1.0, 0.0));
        assert_eq!(p.get(4, 8), c(-1.0, 0.0));
        assert!(!p.truncation_loss());

        let one7 = FourierTaylorSeries::constant(1.0, K, 7);
        let e7 = FourierTaylorSeries::monomial(2, 4, c(1.0, 0.0), K, 7);
        let p7 = one7.add(&e7).mul(&one7.sub(&e7));
        assert_eq!(p7.terms().collect::<Vec<_>>(), vec![(0, 0, c(1.0, 0.0))]);
        assert!(!p7.truncation_loss());

        let narrow = FourierTaylorSeries::monomial(2, 1, c(1.0, 0.0), 3, M);
        assert!(narrow.mul(&narrow).truncation_loss());
    }

    #[test]
    fn derivatives() {
        let e2 = FourierTaylorSeries::monomial(2, 0, c(1.0, 0.0), K, M);
        assert_eq!(e2.diff_theta().get(2, 0), c(0.0, 2.0));

        let mut t4 = FourierTaylorSeries::monomial(0, 4, c(1.0, 0.0), K, M);
        for _ in 0..4 {
            t4 = t4.diff_t();
        }
        assert_eq!(t4.terms().collect::<Vec<_>>(), vec![(0, 0, c(24.0, 0.0))]);

        // Re(A e^{-2iθ}) with A = 1
        let k = FourierTaylorSeries::real_mode(-2, 0, c(0.5, 0.0), K, M);
        let dk = k.diff_theta();
        assert_eq!(dk.get(-2, 0), c(0.0, -1.0));
        assert_eq!(dk.get(2, 0), c(0.0, 1.0));
        assert!(dk.clone().check_real(0.0));
    }

    #[test]
    fn reciprocal_of_constant_and_geometric() {
        let two = FourierTaylorSeries::constant(2.0, K, M);
        assert_eq!(two.reciprocal().unwrap().get(0, 0), c(0.5, 0.0));

        let x = FourierTaylorSeries::constant(1.0, K, M).sub(&FourierTaylorSeries::monomial(
            1,
            1,
            c(1.0, 0.0),
            K,
            M,
        ));
        let y = x.reciprocal().unwrap();
        for m in 0..=M {
            assert!((y.get(m as i64, m) - c(1.0, 0.0)).norm() < 1e-15);
        }
        assert_eq!(y.terms().count(), M + 1);
    }

    #[test]
    fn reciprocal_rejects_zero_constant() {
        let x = FourierTaylorSeries::monomial(1, 1, c(1.0, 0.0), K, M);
        assert!(matches!(x.reciprocal(), Err(Error::Domain(_))));
    }

    #[test]
    fn table_roundtrip() {
        let x = FourierTaylorSeries::real_mode(3, 2, c(0.25, -1.5), K, M)
            .add(&FourierTaylorSeries::constant(1.0, K, M));
        let text = x.to_table();
        assert!(text.starts_with("k,m,re,im\n"));
        let back = FourierTaylorSeries::from_table(&text, K, M).unwrap();
        assert_eq!(back, x);
        assert!(back.is_real());
    }

    #[test]
    fn table_rejects_out_of_box_row() {
        let err = FourierTaylorSeries::from_table("k,m,re,im\n0,0,1,0\n40,0,1,0\n", K, M);
        assert!(matches!(err, Err(Error::Parse { line: 3, .. })));
    }
}
