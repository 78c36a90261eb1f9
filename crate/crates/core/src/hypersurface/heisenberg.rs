use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Origin-fixing automorphism of `Re w = |z|²`:
///
/// ```text
/// (z, w) ↦ ( λ(z + a w)/D, |λ|² w/D ),   D = 1 + 2āz + (|a|² + i s) w
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergAut {
    lambda: Complex64,
    a: Complex64,
    s: f64,
}

impl HeisenbergAut {
    pub fn new(lambda: Complex64, a: Complex64, s: f64) -> Result<Self> {
        if lambda.norm() == 0.0 {
            return Err(Error::Domain("lambda must be nonzero".into()));
        }
        Ok(Self { lambda, a, s })
    }

    pub fn identity() -> Self {
        Self {
            lambda: Complex64::new(1.0, 0.0),
            a: Complex64::default(),
            s: 0.0,
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn apply(&self, z: Complex64, w: Complex64) -> Result<(Complex64, Complex64)> {
        let den = 1.0 + 2.0 * self.a.conj() * z + Complex64::new(self.a.norm_sqr(), self.s) * w;
        if den.norm() < 1e-14 {
            return Err(Error::Domain(format!(
                "vanishing denominator at ({z}, {w})"
            )));
        }
        Ok((
            self.lambda * (z + self.a * w) / den,
            self.lambda.norm_sqr() * w / den,
        ))
    }

    /// Recovers the parameters of an automorphism from its 2-jet at the
    /// origin: `λ = f_z(0)`, `a = f_w(0)/λ`, `s = −Im g_ww(0)/(2|λ|²)`.
    ///
    /// Derivatives come from Cauchy integrals over a circle of `radius`.
    pub fn from_jet_of<F>(map: F, radius: f64) -> Result<Self>
    where
        F: Fn(Complex64, Complex64) -> Result<(Complex64, Complex64)>,
    {
        const N: usize = 64;
        let zero = Complex64::default();
        let mut fz = zero;
        let mut fw = zero;
        let mut gww = zero;
        for j in 0..N {
            let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / N as f64);
            let p = radius * e;
            let (f1, _) = map(p, zero)?;
            let (f2, g2) = map(zero, p)?;
            fz += f1 / e;
            fw += f2 / e;
            gww += g2 / (e * e);
        }
        let n = N as f64;
        fz /= n * radius;
        fw /= n * radius;
        gww *= 2.0 / (n * radius * radius);
        Self::new(fz, fw / fz, -gww.im / (2.0 * fz.norm_sqr()))
    }
}
