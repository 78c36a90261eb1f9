//! Moment and Cauchy-transform tests for holomorphic extendability of
//! boundary data on a star-shaped curve.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::slice_polar::SliceCurve;

/// `∫ zᵐ f(z) dz` over the curve by the trapezoid rule.
pub fn curve_moment(curve: &SliceCurve, f_samples: &[Complex64], m: u32) -> Complex64 {
    let n = curve.len();
    (0..n)
        .map(|j| curve.point(j).powu(m) * f_samples[j] * curve.tangent(j))
        .sum::<Complex64>()
        * (2.0 * PI / n as f64)
}

/// `Cf(z) = (1/2πi) ∫ f(ζ)/(ζ − z) dζ` at a point outside the curve.
///
/// Fails with an accuracy error when the probe is within `0.1·scale` of the
/// curve or too close for the trapezoid rule on `N` points.
pub fn cauchy_transform(
    curve: &SliceCurve,
    f_samples: &[Complex64],
    z_ext: Complex64,
) -> Result<Complex64> {
    let n = curve.len();
    let scale = curve.r_samples.iter().copied().fold(0.0, f64::max);
    let dist = (0..n)
        .map(|j| (curve.point(j) - z_ext).norm())
        .fold(f64::INFINITY, f64::min);
    if dist < 0.1 * scale {
        return Err(Error::Accuracy(format!(
            "probe {z_ext} lies {dist:e} from the curve (scale {scale:e})"
        )));
    }
    if z_ext.norm() <= curve.radius_interpolant().eval(z_ext.arg()).re {
        return Err(Error::Domain(format!("probe {z_ext} is inside the curve")));
    }
    // the N-point rule converges like (scale/|z|)^N
    let rule_error = (scale / z_ext.norm()).powi(n as i32);
    if rule_error > 1e-13 {
        return Err(Error::Accuracy(format!(
            "probe {z_ext} needs more than {n} points (rule error ~{rule_error:.1e})"
        )));
    }
    let sum: Complex64 = (0..n)
        .map(|j| f_samples[j] / (curve.point(j) - z_ext) * curve.tangent(j))
        .sum();
    Ok(sum * (2.0 * PI / n as f64) / (2.0 * PI * Complex64::i()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub extendable: bool,
    pub moments: Vec<Complex64>,
    pub cauchy_values: Vec<Complex64>,
    pub max_moment: f64,
    pub max_cauchy: f64,
}

/// Declares `f` extendable iff the moments `m = 0..=m_max` vanish to
/// `threshold`, and requires the exterior Cauchy probes to agree.
pub fn extension_test(
    curve: &SliceCurve,
    f_samples: &[Complex64],
    m_max: u32,
    probes: &[Complex64],
    threshold: f64,
) -> Result<ExtensionReport> {
    if f_samples.len() != curve.len() {
        return Err(Error::Domain(format!(
            "{} samples for a curve of {} points",
            f_samples.len(),
            curve.len()
        )));
    }
    let moments: Vec<Complex64> = (0..=m_max)
        .map(|m| curve_moment(curve, f_samples, m))
        .collect();
    let cauchy_values = probes
        .iter()
        .map(|z| cauchy_transform(curve, f_samples, *z))
        .collect::<Result<Vec<_>>>()?;
    let max_moment = moments.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let max_cauchy = cauchy_values.iter().map(|m| m.norm()).fold(0.0, f64::max);
    let by_moments = max_moment <= threshold;
    let by_cauchy = max_cauchy <= threshold;
    if by_moments != by_cauchy {
        return Err(Error::OracleMismatch(format!(
            "moments say {by_moments} (max {max_moment:e}), Cauchy probes say {by_cauchy} (max {max_cauchy:e})"
        )));
    }
    Ok(ExtensionReport {
        extendable: by_moments,
        moments,
        cauchy_values,
        max_moment,
        max_cauchy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize) -> SliceCurve {
        SliceCurve::from_radius(1.0, vec![1.0; n]).unwrap()
    }

    fn on_circle(n: usize, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        let c = circle(n);
        (0..n).map(|j| f(c.point(j))).collect()
    }

    #[test]
    fn witnesses() {
        let c = circle(64);
        let two = Complex64::new(2.0, 0.0);
        let zbar = on_circle(64, |z| z.conj());
        assert!((curve_moment(&c, &zbar, 0) - 2.0 * PI * Complex64::i()).norm() < 1e-13);
        assert!((cauchy_transform(&c, &zbar, two).unwrap() + 0.5).norm() < 1e-14);
        let cube = on_circle(64, |z| z.powu(3));
        assert!(cauchy_transform(&c, &cube, two).unwrap().norm() < 1e-14);
        let probes = [two, Complex64::new(0.0, 2.5), Complex64::new(-1.5, -1.5)];
        assert!(
            extension_test(&c, &cube, 8, &probes, 1e-10)
                .unwrap()
                .extendable
        );
        assert!(
            !extension_test(&c, &zbar, 8, &probes, 1e-10)
                .unwrap()
                .extendable
        );
    }

    #[test]
    fn pole_outside_is_extendable() {
        let c = circle(128);
        let f = on_circle(128, |z| 1.0 / (z - 3.0));
        let probes: Vec<Complex64> = (0..6)
            .map(|k| Complex64::from_polar(2.0, 0.7 + k as f64))
            .collect();
        assert!(
            extension_test(&c, &f, 12, &probes, 1e-10)
                .unwrap()
                .extendable
        );
    }

    #[test]
    fn probe_guards() {
        let c = circle(32);
        let f = on_circle(32, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(
            cauchy_transform(&c, &f, Complex64::new(1.05, 0.0)),
            Err(Error::Accuracy(_))
        ));
        assert!(matches!(
            cauchy_transform(&c, &f, Complex64::new(0.2, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            cauchy_transform(&c, &f, Complex64::new(1.5, 0.0)),
            Err(Error::Accuracy(_))
        ));
    }
}
