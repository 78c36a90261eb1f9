#![allow(dead_code)]

use discstat::hypersurface::PreparedDefiningFunction;
use discstat::series::HermitianSeries;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// A few real terms `c z^a z̄^b s^m + conj` with `deg_min ≤ a + b ≤ deg_max`.
pub fn random_terms(
    rng: &mut impl Rng,
    deg_min: u32,
    deg_max: u32,
    m: u32,
    count: usize,
    scale: f64,
) -> HermitianSeries {
    let mut out = HermitianSeries::new(deg_min);
    for _ in 0..count {
        let deg = rng.gen_range(deg_min..=deg_max);
        let a = rng.gen_range(0..=deg);
        let b = deg - a;
        // a diagonal term is added to its own partner, so keep it real and halve it
        let coef = if a == b {
            c(rng.gen_range(-scale..scale) * 0.5, 0.0)
        } else {
            random_complex(rng, scale)
        };
        out.add_real_term(a, b, m, coef);
    }
    out
}

/// Random prepared model with umbilic coefficient `a`: `h` has slice terms
/// of degree 6–7 and one `s`-dependent term, `g` has degree 7–8.
pub fn random_model(rng: &mut impl Rng, a: Complex64) -> PreparedDefiningFunction {
    let h = random_terms(rng, 6, 7, 0, 2, 0.3).add(&random_terms(rng, 2, 4, 1, 1, 0.3));
    let g = random_terms(rng, 7, 8, 0, 2, 0.3);
    PreparedDefiningFunction::new(a, h, g).expect("random model satisfies the order constraints")
}

/// `g = q z⁴ z̄³ + conj`, a pure degree-7 perturbation.
pub fn degree7_g(q: Complex64) -> HermitianSeries {
    let mut g = HermitianSeries::new(7);
    g.add_real_term(4, 3, 0, q);
    g
}

pub fn model_with_g(a: Complex64, q: Complex64) -> PreparedDefiningFunction {
    PreparedDefiningFunction::new(a, HermitianSeries::new(6), degree7_g(q)).unwrap()
}
