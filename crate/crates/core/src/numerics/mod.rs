//! Scalar special functions and deterministic numerical primitives.

mod entropy;
mod quadrature;
mod roots;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub(crate) use entropy::g_bits;
pub use entropy::{g_entropy, lambda_integral};
pub use quadrature::{adaptive_quadrature, LowerEndpoint, QuadratureResult, UpperLimit};
pub use roots::{
    bisect_monotone, find_root_bracketed, try_bisect_monotone, try_find_root_bracketed,
};

/// Tolerances shared by root finding and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Iteration cap for root searches. Quadrature allows
    /// `QUAD_SUBDIVISIONS_PER_ITERATION` subintervals per unit.
    pub max_iterations: usize,
    /// Relative error target for integrals.
    pub quad_target: f64,
}

pub(crate) const QUAD_SUBDIVISIONS_PER_ITERATION: usize = 8;

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_iterations: 200,
            quad_target: 1e-10,
        }
    }
}

impl ToleranceConfig {
    /// Builds a configuration, rejecting non-positive tolerances.
    pub fn new(
        rel_tol: f64,
        abs_tol: f64,
        max_iterations: usize,
        quad_target: f64,
    ) -> Result<Self> {
        let tol = Self {
            rel_tol,
            abs_tol,
            max_iterations,
            quad_target,
        };
        tol.validate()?;
        Ok(tol)
    }

    /// Default configuration with a different quadrature target.
    pub fn with_quad_target(quad_target: f64) -> Result<Self> {
        let d = Self::default();
        Self::new(d.rel_tol, d.abs_tol, d.max_iterations, quad_target)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("quad_target", self.quad_target),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        Ok(())
    }
}
