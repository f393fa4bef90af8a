//! Special functions: Bessel functions of the first kind and the
//! gamma / chi-square cumulative distribution functions.

use std::f64::consts::PI;

use statrs::function::gamma::checked_gamma_lr;

use crate::error::{Error, Result};

/// Largest |order| accepted by [`bessel_j`].
pub const BESSEL_MAX_ORDER: i64 = 60;
/// Largest |argument| accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 100.0;

/// Bessel function of the first kind `J_l(x)` for integer order.
///
/// Evaluates the integral representation
/// `J_l(x) = (1/2pi) int_0^2pi cos(l t - x sin t) dt` with the trapezoidal
/// rule. The integrand is periodic and entire, so an `n`-point rule is exact
/// up to the aliased terms `J_{l +- n}(x)`; choosing `n` well above
/// `|l| + |x|` pushes those below double precision.
pub fn bessel_j(order: i64, x: f64) -> Result<f64> {
    if order.abs() > BESSEL_MAX_ORDER {
        return Err(Error::Domain(format!(
            "Bessel order {order} exceeds {BESSEL_MAX_ORDER}"
        )));
    }
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(Error::Domain(format!("Bessel argument {x} exceeds {BESSEL_MAX_ARG}")));
    }
    if x == 0.0 {
        return Ok(if order == 0 { 1.0 } else { 0.0 });
    }
    let points = 2 * (order.unsigned_abs() as usize + x.abs().ceil() as usize) + 64;
    let step = 2.0 * PI / points as f64;
    let l = order as f64;
    let sum: f64 = (0..points)
        .map(|i| {
            let t = step * i as f64;
            (l * t - x * t.sin()).cos()
        })
        .sum();
    Ok(sum / points as f64)
}

/// Regularized lower incomplete gamma `P(a, x) = gamma(a, x) / Gamma(a)`.
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("gamma shape {a} must be positive")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "incomplete gamma argument {x} must be non-negative"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    checked_gamma_lr(a, x).map_err(|e| Error::Numeric(e.to_string()))
}

/// CDF of `Gamma(shape, scale)` at `x`.
pub fn gamma_cdf(x: f64, shape: u32, scale: f64) -> Result<f64> {
    if shape == 0 {
        return Err(Error::Domain("gamma shape must be at least 1".into()));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!("gamma scale {scale} must be positive")));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("gamma CDF argument {x} is negative")));
    }
    regularized_lower_gamma(shape as f64, x / scale)
}

/// Smallest `x` with `gamma_cdf(x, shape, scale) >= p`, by bisection.
pub fn gamma_quantile(p: f64, shape: u32, scale: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!("quantile level {p} must be in [0, 1)")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let mut hi = shape as f64 * scale;
    while gamma_cdf(hi, shape, scale)? < p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_cdf(mid, shape, scale)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(hi)
}

/// CDF of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_cdf(x: f64, dof: u32) -> Result<f64> {
    if dof == 0 {
        return Err(Error::Domain("chi-square needs at least 1 degree of freedom".into()));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("chi-square CDF argument {x} is negative")));
    }
    regularized_lower_gamma(dof as f64 / 2.0, x / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Erlang closed form of the integer-shape gamma CDF.
    fn erlang_cdf(x: f64, k: u32, scale: f64) -> f64 {
        let y = x / scale;
        let mut term = 1.0;
        let mut sum = 1.0;
        for i in 1..k {
            term *= y / i as f64;
            sum += term;
        }
        1.0 - (-y).exp() * sum
    }

    #[test]
    fn bessel_identities() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for l in [-5, -1, 1, 3, 60] {
            assert_eq!(bessel_j(l, 0.0).unwrap(), 0.0);
        }
        for l in 0..12_i64 {
            for x in [0.3, 1.7, 4.547, 13.0, 31.0] {
                let pos = bessel_j(l, x).unwrap();
                let neg = bessel_j(-l, x).unwrap();
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((neg - sign * pos).abs() < 1e-14, "l={l} x={x}");
            }
        }
    }

    #[test]
    fn bessel_first_zero_and_reference_values() {
        // J_0(2.404825557695773) = 0 (first zero).
        assert!(bessel_j(0, 2.404_825_557_695_773).unwrap().abs() < 1e-14);
        // Tabulated values (Abramowitz & Stegun, table 9.1).
        assert!((bessel_j(0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1, 1.0).unwrap() - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j(2, 10.0).unwrap() - 0.254_630_313_685_120_6).abs() < 1e-13);
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(matches!(bessel_j(61, 1.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, 100.5), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
        assert!(bessel_j(-60, -100.0).is_ok());
    }

    #[test]
    fn gamma_cdf_edge_values() {
        assert_eq!(gamma_cdf(0.0, 4, 0.3).unwrap(), 0.0);
        let v = gamma_cdf(0.7, 1, 0.7).unwrap();
        assert!((v - (1.0 - (-1.0_f64).exp())).abs() < 1e-14);
        assert!((v - 0.632_120_558_828_557_7).abs() < 1e-14);
        for k in [1, 4, 16, 64] {
            let theta = 0.1 / k as f64;
            assert!(1.0 - gamma_cdf(50.0 * k as f64 * theta, k, theta).unwrap() < 1e-12);
        }
        assert!(matches!(gamma_cdf(-1.0, 2, 1.0), Err(Error::Domain(_))));
        assert!(gamma_cdf(1.0, 0, 1.0).is_err());
        assert!(gamma_cdf(1.0, 1, 0.0).is_err());
    }

    #[test]
    fn gamma_cdf_matches_erlang_sum() {
        for k in [1, 2, 4, 8, 16, 32, 64] {
            for scale in [0.1 / k as f64, 0.5 / k as f64, 1.0] {
                for mult in [0.05, 0.3, 0.9, 1.0, 1.1, 2.0, 5.0] {
                    let x = mult * k as f64 * scale;
                    let got = gamma_cdf(x, k, scale).unwrap();
                    let want = erlang_cdf(x, k, scale);
                    assert!((got - want).abs() < 1e-10, "k={k} x={x}: {got} vs {want}");
                }
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for (p, k, s) in [(0.5, 16, 0.01), (0.99, 4, 1.0), (1e-3, 64, 0.1 / 64.0)] {
            let q = gamma_quantile(p, k, s).unwrap();
            assert!((gamma_cdf(q, k, s).unwrap() - p).abs() < 1e-12);
        }
        assert_eq!(gamma_quantile(0.0, 3, 1.0).unwrap(), 0.0);
        assert!(gamma_quantile(1.0, 3, 1.0).is_err());
    }

    #[test]
    fn chi_square_values() {
        assert_eq!(chi_square_cdf(0.0, 5).unwrap(), 0.0);
        let v = chi_square_cdf(2.0, 2).unwrap();
        assert!((v - (1.0 - (-1.0_f64).exp())).abs() < 1e-14);
        // Wilson-Hilferty median of chi^2(2K) for K = 8.
        let dof = 16.0_f64;
        let median = dof * (1.0 - 2.0 / (9.0 * dof)).powi(3);
        assert!((chi_square_cdf(median, 16).unwrap() - 0.5).abs() < 0.01);
        assert!(chi_square_cdf(-0.1, 2).is_err());
        assert!(chi_square_cdf(1.0, 0).is_err());
    }
}
