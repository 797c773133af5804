//! The thermal-state entropy `g(x)` and its Bose-weighted integral `Λ(y)`.

use std::f64::consts::LN_2;

use super::quadrature::{adaptive_quadrature, LowerEndpoint, UpperLimit};
use super::ToleranceConfig;
use crate::{Error, Result};

/// Below this photon number `g` is evaluated from its series expansion.
pub const G_SERIES_THRESHOLD: f64 = 1e-8;

/// `(x+1) ln(x+1) - x ln x` in nats, for finite `x >= 0`.
///
/// Written as `ln(1+x) + x·ln(1+1/x)`, which has no cancellation for large
/// `x`. Small `x` uses `x(1 - ln x) + x²/2`.
#[inline]
pub(crate) fn g_nats(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < G_SERIES_THRESHOLD {
        x * (1.0 - x.ln()) + 0.5 * x * x
    } else {
        x.ln_1p() + x * x.recip().ln_1p()
    }
}

#[inline]
pub(crate) fn g_bits(x: f64) -> f64 {
    g_nats(x) / LN_2
}

/// Entropy in bits of a thermal mode with mean photon number `x`:
/// `g(x) = (x+1) log₂(x+1) - x log₂ x`, with `g(0) = 0`.
pub fn g_entropy(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::domain(format!(
            "mean photon number must be finite and non-negative, got {x}"
        )));
    }
    Ok(g_bits(x))
}

/// `Λ(y) = ∫₀^∞ g(y / (eˣ - 1)) dx`, in bits.
///
/// The integrand grows like `log₂(y/x)` at the origin and decays like
/// `y·x·e^{-x}` in the tail.
pub fn lambda_integral(y: f64, tol: &ToleranceConfig) -> Result<f64> {
    if !(y.is_finite() && y >= 0.0) {
        return Err(Error::domain(format!(
            "Λ argument must be finite and non-negative, got {y}"
        )));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let r = adaptive_quadrature(
        |x: f64| g_bits(y / x.exp_m1()),
        0.0,
        UpperLimit::Infinite { decay_rate: 1.0 },
        LowerEndpoint::Singular,
        tol,
    )?;
    Ok(r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn anchors() {
        assert_eq!(g_entropy(0.0).unwrap(), 0.0);
        assert!((g_entropy(1.0).unwrap() - 2.0).abs() < 1e-15);
        let three = 8.0 - 3.0 * 3f64.log2();
        assert!((g_entropy(3.0).unwrap() - three).abs() < 1e-14);
        assert!((three - 3.245112497836531).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(g_entropy(-1e-300).is_err());
        assert!(g_entropy(f64::NAN).is_err());
        assert!(g_entropy(f64::INFINITY).is_err());
        assert!(lambda_integral(-1.0, &ToleranceConfig::default()).is_err());
    }

    #[test]
    fn series_branch_matches_direct_formula_at_threshold() {
        let x = G_SERIES_THRESHOLD;
        let direct = (x.ln_1p() + x * x.recip().ln_1p()) / LN_2;
        let series = (x * (1.0 - x.ln()) + 0.5 * x * x) / LN_2;
        assert!((direct - series).abs() < 1e-15 * direct.abs().max(1.0));
        // continuity at zero
        assert!(g_bits(1e-300) < 1e-296);
    }

    #[test]
    fn large_argument_asymptote() {
        // g(x) → log₂(e·x) + O(1/x)
        let x = 1e12f64;
        let approx = (1.0 + x.ln()) / LN_2;
        assert!((g_bits(x) - approx).abs() < 1e-10);
    }

    #[test]
    fn lambda_at_zero_and_one() {
        let tol = ToleranceConfig::default();
        assert_eq!(lambda_integral(0.0, &tol).unwrap(), 0.0);
        let exact = PI * PI / (3.0 * LN_2);
        let l1 = lambda_integral(1.0, &tol).unwrap();
        assert!((l1 - exact).abs() < 1e-9 * exact, "{l1} vs {exact}");
        let l4 = lambda_integral(4.0, &tol).unwrap();
        assert!(l4 > l1 && l1 > 0.0);
    }
}
