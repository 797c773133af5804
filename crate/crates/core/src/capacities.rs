//! Broadband capacities and bounds, normalized to the noiseless wideband rate.
//!
//! For a uniform efficiency `η`, the entanglement-assisted capacity over a
//! transmission time `𝒯` at input power `𝒫` is `C_E = 𝒯·R_C·𝒞(η)` with
//! `R_C = (1/ln 2)·sqrt(π𝒫/3)` (ħ = 1). The same normalization applies to
//! the unassisted lower bounds, which therefore come out as pure functions of `η`.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::allocator::{continuum_capacity, PowerBudget, RateFunction, RateKind};
use crate::numerics::{lambda_integral, ToleranceConfig};
use crate::single_mode::Efficiency;
use crate::{Error, Result};

/// `R_C = (1/ln 2)·sqrt(π𝒫/(3ħ))`: bits per unit time of the noiseless
/// wideband channel without prior entanglement.
pub fn noiseless_rate(power: f64) -> f64 {
    (PI * power / 3.0).sqrt() / LN_2
}

/// `Ω₀ = 6 ln 2·R_C/π`, the frequency scale of the thermal-profile family
/// `N_j = ζ²/(e^{ζω_j/Ω₀} - 1)` behind [`lower_bound_zeta`].
pub fn zeta_reference_frequency(noiseless_rate: f64) -> f64 {
    6.0 * LN_2 * noiseless_rate / PI
}

/// `𝒞(η)`: entanglement-assisted capacity in units of `𝒯·R_C`.
///
/// `η = 0` and `η = 1` return the exact values 0 and 2; interior points are
/// computed from the continuum water-filling integrals.
pub fn c_of_eta(ch: Efficiency, tol: &ToleranceConfig) -> Result<f64> {
    if ch == Efficiency::OPAQUE {
        Ok(0.0)
    } else if ch == Efficiency::NOISELESS {
        Ok(2.0)
    } else {
        c_of_eta_numerical(ch, tol)
    }
}

/// `𝒞(η)` by quadrature for any `η ∈ (0, 1]`, with no analytic shortcuts for
/// the endpoints. At `η = 1` the occupancy is still the exact thermal profile
/// in `x/2`, but both integrals are evaluated numerically.
pub fn c_of_eta_numerical(ch: Efficiency, tol: &ToleranceConfig) -> Result<f64> {
    let rate = RateFunction::new(RateKind::EntanglementAssisted, ch)?;
    Ok(continuum_capacity(&rate, tol)?.normalized_rate())
}

/// First-order expansion of `𝒞` about `η = 1/2`: `3/2·(η - 1/2) + 1`.
pub fn c_of_eta_linearized(ch: Efficiency) -> f64 {
    1.5 * (ch.value() - 0.5) + 1.0
}

/// Lower bound on `𝒞(η)` from the thermal-profile family with parameter `ζ`:
/// `[Λ(ζ²) + Λ(ηζ²) - Λ((1-η)ζ²)] / (ζ·Λ(1))`.
pub fn lower_bound_zeta(ch: Efficiency, zeta: f64, tol: &ToleranceConfig) -> Result<f64> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::domain(format!(
            "ζ must be positive and finite, got {zeta}"
        )));
    }
    let lambda_one = lambda_integral(1.0, tol)?;
    lower_bound_zeta_with(ch, zeta, lambda_one, tol)
}

fn lower_bound_zeta_with(
    ch: Efficiency,
    zeta: f64,
    lambda_one: f64,
    tol: &ToleranceConfig,
) -> Result<f64> {
    let eta = ch.value();
    if eta == 0.0 {
        return Ok(0.0);
    }
    let y = zeta * zeta;
    let full = lambda_integral(y, tol)?;
    let kept = lambda_integral(eta * y, tol)?;
    let lost = lambda_integral((1.0 - eta) * y, tol)?;
    Ok((full + kept - lost) / (zeta * lambda_one))
}

/// Lower bound on the unassisted classical capacity in units of `𝒯·R_C`:
/// coherent-state encoding achieves `sqrt(η)`.
pub fn classical_lower_bound(ch: Efficiency) -> f64 {
    ch.value().sqrt()
}

/// The same bound computed by water-filling the Holevo rate `g(ηN)`
/// numerically, as an independent check on [`classical_lower_bound`].
pub fn classical_lower_bound_numerical(ch: Efficiency, tol: &ToleranceConfig) -> Result<f64> {
    if ch.value() == 0.0 {
        return Ok(0.0);
    }
    let rate = RateFunction::new(RateKind::HolevoCoherent, ch)?;
    Ok(continuum_capacity(&rate, tol)?.normalized_rate())
}

/// Lower bound `Q_s` on the quantum capacity in units of `𝒯·R_C`, from the
/// water-filled coherent information of unsqueezed Gaussian inputs. Zero for
/// `η <= 1/2`, where the quantum capacity itself vanishes.
pub fn quantum_lower_bound(ch: Efficiency, tol: &ToleranceConfig) -> Result<f64> {
    if ch.value() <= 0.5 {
        return Ok(0.0);
    }
    let rate = RateFunction::new(RateKind::CoherentInfo, ch)?;
    Ok(continuum_capacity(&rate, tol)?.normalized_rate())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaBound {
    pub zeta: f64,
    /// Bound on `𝒞(η)`, dimensionless.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Provenance {
    pub tolerances: ToleranceConfig,
    pub version: &'static str,
    pub hbar: f64,
}

/// Capacities of the broadband lossy channel for one efficiency and budget.
///
/// Ratios are in units of `𝒯·R_C`; absolute quantities are in bits (or
/// qubits) for the whole transmission time, and rates in bits per unit time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub eta: f64,
    pub power: f64,
    pub transmission_time: f64,
    /// `𝒞(η)`.
    pub c_of_eta: f64,
    pub linearized: f64,
    /// `R_C`, bits per unit time.
    pub noiseless_rate: f64,
    /// `R_E = R_C·𝒞(η)`, bits per unit time.
    pub assisted_rate: f64,
    /// `C_E`, bits.
    pub assisted_capacity_bits: f64,
    /// `Q_E = C_E/2`, qubits.
    pub assisted_quantum_capacity_qubits: f64,
    pub classical_lower_ratio: f64,
    pub classical_lower_bits: f64,
    pub quantum_lower_ratio: f64,
    pub quantum_lower_qubits: f64,
    pub bounds_zeta: Vec<ZetaBound>,
    pub provenance: Provenance,
}

impl CapacityReport {
    /// Re-expresses absolute quantities for a unit system with the given ħ.
    /// Numerics stay in ħ = 1; only `R_C` and what scales with it change.
    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::domain(format!("ħ must be positive, got {hbar}")));
        }
        let scale = (self.provenance.hbar / hbar).sqrt();
        self.noiseless_rate *= scale;
        self.assisted_rate *= scale;
        self.assisted_capacity_bits *= scale;
        self.assisted_quantum_capacity_qubits *= scale;
        self.classical_lower_bits *= scale;
        self.quantum_lower_qubits *= scale;
        self.provenance.hbar = hbar;
        Ok(self)
    }
}

/// `ζ = 1` and, for `η > 0`, `ζ = 1/sqrt(η)`, followed by `extra`.
pub fn default_zetas(ch: Efficiency, extra: &[f64]) -> Vec<f64> {
    let mut zetas = vec![1.0];
    if ch.value() > 0.0 {
        zetas.push(ch.value().sqrt().recip());
    }
    zetas.extend_from_slice(extra);
    zetas
}

/// Assembles every capacity and bound for `ch` under `budget`.
pub fn capacity_report(
    ch: Efficiency,
    budget: &PowerBudget,
    extra_zetas: &[f64],
    tol: &ToleranceConfig,
) -> Result<CapacityReport> {
    tol.validate()?;
    let c = c_of_eta(ch, tol)?;
    let power = budget.power();
    let time = budget.transmission_time();
    let r_c = noiseless_rate(power);
    let classical = classical_lower_bound(ch);
    let quantum = quantum_lower_bound(ch, tol)?;
    let lambda_one = lambda_integral(1.0, tol)?;
    let bounds_zeta = default_zetas(ch, extra_zetas)
        .into_iter()
        .map(|zeta| {
            if !(zeta.is_finite() && zeta > 0.0) {
                return Err(Error::domain(format!(
                    "ζ must be positive and finite, got {zeta}"
                )));
            }
            Ok(ZetaBound {
                zeta,
                value: lower_bound_zeta_with(ch, zeta, lambda_one, tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let bits = time * r_c * c;
    Ok(CapacityReport {
        eta: ch.value(),
        power,
        transmission_time: time,
        c_of_eta: c,
        linearized: c_of_eta_linearized(ch),
        noiseless_rate: r_c,
        assisted_rate: r_c * c,
        assisted_capacity_bits: bits,
        assisted_quantum_capacity_qubits: bits / 2.0,
        classical_lower_ratio: classical,
        classical_lower_bits: time * r_c * classical,
        quantum_lower_ratio: quantum,
        quantum_lower_qubits: time * r_c * quantum,
        bounds_zeta,
        provenance: Provenance {
            tolerances: *tol,
            version: env!("CARGO_PKG_VERSION"),
            hbar: 1.0,
        },
    })
}

/// One row of the `𝒞(η)` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub eta: f64,
    pub c: f64,
    pub c_linear: f64,
    pub bound_zeta_1: f64,
    /// Bound with `ζ = 1/sqrt(η)`; zero at `η = 0`.
    pub bound_zeta_inv_sqrt_eta: f64,
}

/// One row of the unassisted-capacity comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsPoint {
    pub eta: f64,
    pub c: f64,
    pub q_assisted: f64,
    pub classical_lower: f64,
    pub quantum_lower: f64,
}

/// `0`, the 199 points `k/200` for `k = 1..=199`, and `1`.
pub fn default_eta_grid() -> Vec<f64> {
    let mut grid = Vec::with_capacity(201);
    grid.push(0.0);
    grid.extend((1..200).map(|k| k as f64 / 200.0));
    grid.push(1.0);
    grid
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linear_eta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&min) || !(0.0..=1.0).contains(&max) || min > max {
        return Err(Error::domain(format!(
            "η range [{min}, {max}] must lie within [0, 1]"
        )));
    }
    match steps {
        0 => Err(Error::domain("need at least one step")),
        1 => Ok(vec![min]),
        _ => Ok((0..steps)
            .map(|i| {
                if i == steps - 1 {
                    max
                } else {
                    min + (max - min) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()),
    }
}

fn curve_point(eta: f64, lambda_one: f64, tol: &ToleranceConfig) -> Result<CurvePoint> {
    let ch = Efficiency::new(eta)?;
    let inv_sqrt = if eta > 0.0 {
        lower_bound_zeta_with(ch, eta.sqrt().recip(), lambda_one, tol)?
    } else {
        0.0
    };
    Ok(CurvePoint {
        eta,
        c: c_of_eta(ch, tol)?,
        c_linear: c_of_eta_linearized(ch),
        bound_zeta_1: lower_bound_zeta_with(ch, 1.0, lambda_one, tol)?,
        bound_zeta_inv_sqrt_eta: inv_sqrt,
    })
}

/// Evaluates the curve at each `η`, in parallel; results keep the input order.
pub fn capacity_curve(etas: &[f64], tol: &ToleranceConfig) -> Result<Vec<Result<CurvePoint>>> {
    let lambda_one = lambda_integral(1.0, tol)?;
    Ok(etas
        .par_iter()
        .map(|&eta| curve_point(eta, lambda_one, tol))
        .collect())
}

/// Classical and quantum bounds at each `η`, in parallel, in input order.
pub fn bounds_curve(etas: &[f64], tol: &ToleranceConfig) -> Vec<Result<BoundsPoint>> {
    etas.par_iter()
        .map(|&eta| {
            let ch = Efficiency::new(eta)?;
            let c = c_of_eta(ch, tol)?;
            Ok(BoundsPoint {
                eta,
                c,
                q_assisted: c / 2.0,
                classical_lower: classical_lower_bound(ch),
                quantum_lower: quantum_lower_bound(ch, tol)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eff(e: f64) -> Efficiency {
        Efficiency::new(e).unwrap()
    }

    #[test]
    fn linearization_values() {
        assert_eq!(c_of_eta_linearized(eff(0.5)), 1.0);
        assert_eq!(c_of_eta_linearized(eff(1.0)), 1.75);
        assert!((c_of_eta_linearized(eff(1.0 / 6.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn endpoint_shortcuts() {
        let tol = ToleranceConfig::default();
        assert_eq!(c_of_eta(eff(0.0), &tol).unwrap(), 0.0);
        assert_eq!(c_of_eta(eff(1.0), &tol).unwrap(), 2.0);
    }

    #[test]
    fn classical_bound_values() {
        assert_eq!(classical_lower_bound(eff(1.0)), 1.0);
        assert_eq!(classical_lower_bound(eff(0.25)), 0.5);
        assert_eq!(classical_lower_bound(eff(0.0)), 0.0);
    }

    #[test]
    fn zeta_bound_anchors() {
        let tol = ToleranceConfig::default();
        assert!((lower_bound_zeta(eff(0.5), 1.0, &tol).unwrap() - 1.0).abs() < 1e-12);
        assert!((lower_bound_zeta(eff(1.0), 1.0, &tol).unwrap() - 2.0).abs() < 1e-12);
        for zeta in [0.3, 1.0, 2.5] {
            assert_eq!(lower_bound_zeta(eff(0.0), zeta, &tol).unwrap(), 0.0);
        }
        assert!(lower_bound_zeta(eff(0.5), 0.0, &tol).is_err());
    }

    #[test]
    fn reference_frequency_matches_half_efficiency_multiplier() {
        // At η = 1/2 the optimal Ω equals Ω₀ (f = π²/6).
        let power = 0.37;
        let omega = (2.0 * PI * power / (PI * PI / 6.0)).sqrt();
        assert!((zeta_reference_frequency(noiseless_rate(power)) - omega).abs() < 1e-14);
    }

    #[test]
    fn eta_grids() {
        let g = default_eta_grid();
        assert_eq!(g.len(), 201);
        assert_eq!(g[100], 0.5);
        assert_eq!((g[0], g[1], g[199], g[200]), (0.0, 0.005, 0.995, 1.0));
        assert_eq!(linear_eta_grid(0.0, 1.0, 3).unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(linear_eta_grid(0.5, 0.2, 3).is_err());
        assert!(linear_eta_grid(0.0, 1.5, 3).is_err());
        assert!(linear_eta_grid(0.0, 1.0, 0).is_err());
    }

    #[test]
    fn quantum_bound_vanishes_below_half() {
        let tol = ToleranceConfig::default();
        for e in [0.0, 0.2, 0.5] {
            assert_eq!(quantum_lower_bound(eff(e), &tol).unwrap(), 0.0);
        }
    }
}
