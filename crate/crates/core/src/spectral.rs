//! FFT helpers on uniform periodic grids `θ_j = 2πj/N`.
//!
//! Coefficients follow the convention `c_k = (1/N) Σ_j x_j e^{−ikθ_j}`, so a
//! band-limited function is reproduced by `Σ_k c_k e^{ikθ}`. The Nyquist mode
//! of an even-length grid is dropped by differentiation and conjugation and
//! enters interpolation as a cosine.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Uniform grid `2πj/n`, `j = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Signed frequency of FFT slot `idx` on an `n`-point grid.
pub fn frequency(idx: usize, n: usize) -> i64 {
    if idx <= n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Whether FFT slot `idx` holds the Nyquist mode of an even grid.
pub fn is_nyquist(idx: usize, n: usize) -> bool {
    n.is_multiple_of(2) && idx == n / 2
}

/// Normalised discrete Fourier coefficients in FFT order.
pub fn forward(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward`].
pub fn inverse(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

pub fn forward_real(samples: &[f64]) -> Vec<Complex64> {
    let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward(&c)
}

/// Coefficient of `e^{ikθ}` (zero for `|k|` beyond the grid's band).
pub fn coefficient(coeffs: &[Complex64], k: i64) -> Complex64 {
    let n = coeffs.len() as i64;
    if k.abs() > n / 2 || (n % 2 == 0 && k.abs() == n / 2) {
        return Complex64::new(0.0, 0.0);
    }
    coeffs[k.rem_euclid(n) as usize]
}

/// Spectral derivative `d/dθ` of complex samples.
pub fn differentiate(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut c = forward(samples);
    for (idx, v) in c.iter_mut().enumerate() {
        if is_nyquist(idx, n) {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, frequency(idx, n) as f64);
        }
    }
    inverse(&c)
}

pub fn differentiate_real(samples: &[f64]) -> Vec<f64> {
    let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    differentiate(&c).iter().map(|z| z.re).collect()
}

/// Periodic conjugation operator: `e^{ikθ} ↦ −i·sgn(k)·e^{ikθ}`.
///
/// For a real `u` this returns the zero-mean `v` with `u + iv` the boundary
/// values of a holomorphic function in the unit disc.
pub fn conjugate(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut c = forward_real(samples);
    for (idx, v) in c.iter_mut().enumerate() {
        let k = frequency(idx, n);
        if k == 0 || is_nyquist(idx, n) {
            *v = Complex64::new(0.0, 0.0);
        } else {
            *v *= Complex64::new(0.0, -(k.signum() as f64));
        }
    }
    inverse(&c).iter().map(|z| z.re).collect()
}

/// Trigonometric interpolant of samples on a uniform grid, evaluable anywhere.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(samples: &[Complex64]) -> Self {
        Self {
            coeffs: forward(samples),
        }
    }

    pub fn from_real(samples: &[f64]) -> Self {
        Self {
            coeffs: forward_real(samples),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_with(x, |_| Complex64::new(1.0, 0.0))
    }

    pub fn eval_derivative(&self, x: f64) -> Complex64 {
        self.eval_with(x, |k| Complex64::new(0.0, k as f64))
    }

    fn eval_with(&self, x: f64, factor: impl Fn(i64) -> Complex64) -> Complex64 {
        let n = self.coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = frequency(idx, n);
            if is_nyquist(idx, n) {
                // cos(kx) split evenly between ±k
                let kf = k as f64;
                acc += c
                    * 0.5
                    * (factor(k) * Complex64::from_polar(1.0, kf * x)
                        + factor(-k) * Complex64::from_polar(1.0, -kf * x));
            } else {
                acc += c * factor(k) * Complex64::from_polar(1.0, k as f64 * x);
            }
        }
        acc
    }
}

/// Trapezoidal rule for `∫_0^{2π} f dθ` from uniform samples.
pub fn periodic_integral(samples: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let mut n = 0usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for s in samples {
        sum += s;
        n += 1;
    }
    sum * (2.0 * PI / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_trig_polynomial() {
        let n = 32;
        let th = uniform_grid(n);
        let f: Vec<f64> = th.iter().map(|t| (3.0 * t).sin() + 0.5 * t.cos()).collect();
        let df = differentiate_real(&f);
        for (t, d) in th.iter().zip(&df) {
            assert!((d - (3.0 * (3.0 * t).cos() - 0.5 * t.sin())).abs() < 1e-13);
        }
    }

    #[test]
    fn conjugate_maps_cos_to_sin() {
        let th = uniform_grid(64);
        let u: Vec<f64> = th.iter().map(|t| (2.0 * t).cos() + 1.0).collect();
        let v = conjugate(&u);
        for (t, v) in th.iter().zip(&v) {
            assert!((v - (2.0 * t).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolant_reproduces_off_grid() {
        let th = uniform_grid(16);
        let f: Vec<f64> = th
            .iter()
            .map(|t| 1.0 + (5.0 * t).cos() - (2.0 * t).sin())
            .collect();
        let p = TrigInterpolant::from_real(&f);
        for x in [0.1f64, 1.3, 4.0] {
            let exact = 1.0 + (5.0 * x).cos() - (2.0 * x).sin();
            assert!((p.eval(x).re - exact).abs() < 1e-13);
            let dexact = -5.0 * (5.0 * x).sin() - 2.0 * (2.0 * x).cos();
            assert!((p.eval_derivative(x).re - dexact).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficient_convention() {
        let th = uniform_grid(8);
        let f: Vec<f64> = th.iter().map(|t| 1.0 + 0.2 * t.cos()).collect();
        let c = forward_real(&f);
        assert!((coefficient(&c, 0).re - 1.0).abs() < 1e-15);
        assert!((coefficient(&c, 1).re - 0.1).abs() < 1e-15);
        assert!((coefficient(&c, -1).re - 0.1).abs() < 1e-15);
    }
}
