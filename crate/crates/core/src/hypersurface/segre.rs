use num_complex::Complex64;

use super::PreparedDefiningFunction;
use crate::error::{Error, Result};
use crate::series::{HermitianSeries, PowerSeries, Variable};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Holomorphic graph `w = S(z) = Σ s_n zⁿ` of the Segre variety of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegreGraph {
    pub base: (Complex64, Complex64),
    pub taylor: PowerSeries,
}

impl SegreGraph {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.taylor.eval(z)
    }

    /// Coefficients of `ρ(z, S(z), q̄_z, q̄_w)` as a series in `z`.
    pub fn residual(&self, f: &PreparedDefiningFunction) -> PowerSeries {
        complexified_on_graph(f.potential(), self.base, &self.taylor).0
    }
}

/// `(F, ∂F/∂w)` for `F(z, w) = (w + q̄_w)/2 + P(z, q̄_z, (w − q̄_w)/(2i))`
/// along `w = graph(z)`.
fn complexified_on_graph(
    potential: &HermitianSeries,
    q: (Complex64, Complex64),
    graph: &PowerSeries,
) -> (PowerSeries, PowerSeries) {
    let deg = graph.degree();
    let zeta = q.0.conj();
    let omega = q.1.conj();
    let s = graph
        .sub(&PowerSeries::constant(omega, deg))
        .scale(1.0 / (2.0 * I));
    let eval = |p: &HermitianSeries| {
        let mut out = PowerSeries::zeros(deg);
        for ((a, b, m), c) in p.terms() {
            let a = a as usize;
            if a > deg {
                continue;
            }
            let sm = s.powu(m);
            let scale = c * zeta.powu(b);
            let shifted: Vec<Complex64> = std::iter::repeat_n(Complex64::default(), a)
                .chain(sm.coeffs().iter().map(|x| x * scale))
                .collect();
            out = out.add(&PowerSeries::from_coeffs(shifted[..=deg].to_vec(), deg));
        }
        out
    };
    let f = graph
        .add(&PowerSeries::constant(omega, deg))
        .scale(Complex64::new(0.5, 0.0))
        .add(&eval(potential));
    let fw = PowerSeries::constant(Complex64::new(0.5, 0.0), deg)
        .add(&eval(&potential.partial(Variable::S)).scale(1.0 / (2.0 * I)));
    (f, fw)
}

/// Solves `ρ(z, w, q̄) = 0` for `w = S(z)` to degree `degree` by Newton's
/// method on power series (each step doubles the number of correct terms).
pub fn segre_graph(
    f: &PreparedDefiningFunction,
    q: (Complex64, Complex64),
    degree: usize,
) -> Result<SegreGraph> {
    let mut graph = PowerSeries::constant(-q.1.conj(), degree);
    for _ in 0..60 {
        let (res, fw) = complexified_on_graph(f.potential(), q, &graph);
        let lead = fw.coeffs()[0];
        if lead.norm() < 1e-12 {
            return Err(Error::SingularSegre(lead.norm()));
        }
        let step = res.mul(&fw.reciprocal()?);
        graph = graph.sub(&step);
        if step.max_norm() <= 1e-16 * (1.0 + graph.max_norm()) {
            break;
        }
    }
    Ok(SegreGraph {
        base: q,
        taylor: graph,
    })
}
