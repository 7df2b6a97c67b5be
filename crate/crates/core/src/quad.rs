//! Adaptive bisection around a tanh-sinh panel rule.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 24;

/// Panels are accepted once the estimate is within this many ulps of the
/// panel value; below that the estimate is rounding noise.
const ROUNDING_ULPS: f64 = 64.0;

/// `∫_a^b f` to an absolute error of roughly `tol`.
///
/// Each panel is integrated by the double-exponential rule; panels whose
/// error estimate exceeds their share of the tolerance are split in half.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut worst = 0.0f64;
    panel(&f, a, b, tol, 0, &mut total, &mut worst);
    if !total.is_finite() || worst > tol.max(ROUNDING_ULPS * f64::EPSILON * total.abs()) {
        return Err(Error::IntegrationFailed { estimate: total });
    }
    Ok(total)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32, total: &mut f64, worst: &mut f64) {
    let out = quadrature::double_exponential::integrate(f, a, b, tol);
    let floor = ROUNDING_ULPS * f64::EPSILON * out.integral.abs();
    if out.error_estimate <= tol.max(floor) && out.integral.is_finite() {
        *total += out.integral;
        return;
    }
    if depth >= MAX_DEPTH {
        *total += out.integral;
        *worst = worst.max(out.error_estimate);
        return;
    }
    let mid = 0.5 * (a + b);
    panel(f, a, mid, 0.5 * tol, depth + 1, total, worst);
    panel(f, mid, b, 0.5 * tol, depth + 1, total, worst);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_trig() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-11);
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn sharp_peak_needs_splitting() {
        // ∫ 1/(x² + ε²) over [-1, 1] = (2/ε) atan(1/ε).
        let e: f64 = 1e-3;
        let v = integrate(|x| 1.0 / (x * x + e * e), -1.0, 1.0, 1e-9).unwrap();
        let exact = 2.0 / e * (1.0 / e).atan();
        assert!((v - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn endpoint_singularity() {
        let v = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_interval_and_bad_bounds() {
        assert_eq!(integrate(|x| x, 1.0, 1.0, 1e-9).unwrap(), 0.0);
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-9).is_err());
    }
}
