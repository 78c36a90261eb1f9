use num_complex::Complex64;

use crate::error::{Error, Result};

/// Univariate truncated complex power series `Σ_{n ≤ degree} c_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn zeros(degree: usize) -> Self {
        Self {
            coeffs: vec![Complex64::default(); degree + 1],
        }
    }

    pub fn constant(c: Complex64, degree: usize) -> Self {
        let mut s = Self::zeros(degree);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn variable(degree: usize) -> Self {
        let mut s = Self::zeros(degree);
        if degree >= 1 {
            s.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Complex64>, degree: usize) -> Self {
        coeffs.resize(degree + 1, Complex64::default());
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.degree();
        let mut out = Self::zeros(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::default() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut out = Self::constant(Complex64::new(1.0, 0.0), self.degree());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(Error::Domain(
                "reciprocal of series with zero constant term".into(),
            ));
        }
        let d = self.degree();
        let mut out = Self::zeros(d);
        out.coeffs[0] = c0.inv();
        for n in 1..=d {
            let acc: Complex64 = (1..=n).map(|i| self.coeffs[i] * out.coeffs[n - i]).sum();
            out.coeffs[n] = -acc / c0;
        }
        Ok(out)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, c| acc * z + c)
    }

    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
