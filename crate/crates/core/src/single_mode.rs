//! Single-mode Gaussian inputs to the lossy channel.
//!
//! A Gaussian input is described by its mean photon number `N`, squeezing
//! `r`, quadrature correlation `c` and squared displacement `m`. Its
//! correlation matrix `α/ħ = ½[[n0 e^r, c], [c, n0 e^{-r}]]` has
//! `n0 = (2N+1-m)/cosh r`. The lossy channel of efficiency `η` sends the
//! state through the closed-form mutual information
//! `I = g(γ(1)) + g(γ(η)) - g(γ(1-η))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::g_bits;
use crate::{Error, Result};

/// Quantum efficiency `η ∈ [0, 1]` of a lossy mode.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Efficiency(f64);

impl Efficiency {
    pub const NOISELESS: Efficiency = Efficiency(1.0);
    pub const HALF: Efficiency = Efficiency(0.5);
    pub const OPAQUE: Efficiency = Efficiency(0.0);

    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain(format!(
                "efficiency must lie in [0, 1], got {eta}"
            )));
        }
        Ok(Self(eta))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The efficiency `1-η` of the complementary (environment) channel.
    #[inline]
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl TryFrom<f64> for Efficiency {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Efficiency> for f64 {
    fn from(e: Efficiency) -> f64 {
        e.0
    }
}

/// A single-mode Gaussian input state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianModeState {
    n: f64,
    r: f64,
    c: f64,
    m: f64,
}

impl GaussianModeState {
    /// Validates the strong uncertainty relation `n0 >= sqrt(c² + 1)`.
    pub fn new(n: f64, r: f64, c: f64, m: f64) -> Result<Self> {
        if !(n.is_finite() && n >= 0.0) {
            return Err(Error::domain(format!(
                "mean photon number must be finite and non-negative, got {n}"
            )));
        }
        if !(r.is_finite() && c.is_finite()) {
            return Err(Error::domain("squeezing and correlation must be finite"));
        }
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::domain(format!(
                "squared displacement must be finite and non-negative, got {m}"
            )));
        }
        let state = Self { n, r, c, m };
        let n0 = state.n0();
        let floor = c.hypot(1.0);
        // A few ulps of slack so states built exactly on the boundary pass.
        if n0 < floor * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::domain(format!(
                "uncertainty bound violated: n0 = (2N+1-m)/cosh r = {n0} < sqrt(c²+1) = {floor} \
                 (N={n}, r={r}, c={c}, m={m})"
            )));
        }
        Ok(state)
    }

    /// Unsqueezed, uncorrelated, undisplaced state: a thermal state of mean `n`.
    pub fn thermal(n: f64) -> Result<Self> {
        Self::new(n, 0.0, 0.0, 0.0)
    }

    pub fn mean_photons(&self) -> f64 {
        self.n
    }
    pub fn squeezing(&self) -> f64 {
        self.r
    }
    pub fn correlation(&self) -> f64 {
        self.c
    }
    pub fn displacement(&self) -> f64 {
        self.m
    }

    pub fn n0(&self) -> f64 {
        (2.0 * self.n + 1.0 - self.m) / self.r.cosh()
    }

    /// Eigenvalues `(λ₊, λ₋)` of `α/ħ`.
    ///
    /// `λ₊ + λ₋ = 2N+1-m` and `λ₊λ₋ = (n0² - c²)/4 >= 1/4`.
    pub fn symplectic_spectrum(&self) -> (f64, f64) {
        let n0 = self.n0();
        let trace_half = n0 * self.r.cosh();
        let split = (n0 * self.r.sinh()).hypot(self.c);
        let plus = 0.5 * (trace_half + split);
        // λ₋ via the determinant, which avoids cancellation in trace - split.
        let det = 0.25 * (n0 - self.c) * (n0 + self.c);
        let minus = if plus > 0.0 { det / plus } else { 0.0 };
        (plus, minus.min(plus))
    }
}

/// `γ(s) = sqrt([sλ₊ + (1-s)/2][sλ₋ + (1-s)/2]) - 1/2`: the thermal
/// photon number equivalent to the input after attenuation by `s`.
pub fn gamma_factor(lambda_plus: f64, lambda_minus: f64, s: f64) -> Result<f64> {
    if !(lambda_plus >= lambda_minus && lambda_minus > 0.0 && lambda_plus.is_finite()) {
        return Err(Error::domain(format!(
            "need λ₊ >= λ₋ > 0, got ({lambda_plus}, {lambda_minus})"
        )));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!(
            "attenuation must lie in [0, 1], got {s}"
        )));
    }
    Ok(gamma_unchecked(lambda_plus, lambda_minus, s))
}

#[inline]
fn gamma_unchecked(lambda_plus: f64, lambda_minus: f64, s: f64) -> f64 {
    let floor = 0.5 * (1.0 - s);
    let a = s * lambda_plus + floor;
    let b = s * lambda_minus + floor;
    // sqrt(ab) - 1/2 = (ab - 1/4)/(sqrt(ab) + 1/2), and
    // ab - 1/4 = s²(λ₊λ₋ - 1/4) + s(1-s)(λ₊+λ₋-1)/2 is free of cancellation.
    let excess = s * s * (lambda_plus * lambda_minus - 0.25)
        + 0.5 * s * (1.0 - s) * (lambda_plus + lambda_minus - 1.0);
    (excess / ((a * b).sqrt() + 0.5)).max(0.0)
}

/// Quantum mutual information (bits) of `state` through the lossy channel.
pub fn mutual_information(state: &GaussianModeState, ch: Efficiency) -> f64 {
    let (lp, lm) = state.symplectic_spectrum();
    let eta = ch.value();
    g_bits(gamma_unchecked(lp, lm, 1.0)) + g_bits(gamma_unchecked(lp, lm, eta))
        - g_bits(gamma_unchecked(lp, lm, 1.0 - eta))
}

fn check_photons(n: f64) -> Result<()> {
    if n.is_finite() && n >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "mean photon number must be finite and non-negative, got {n}"
        )))
    }
}

/// Entanglement-assisted capacity of one lossy mode at mean photon number
/// `n`: `g(N) + g(ηN) - g((1-η)N)` bits.
pub fn ce_single_mode(n: f64, ch: Efficiency) -> Result<f64> {
    check_photons(n)?;
    let eta = ch.value();
    Ok(g_bits(n) + g_bits(eta * n) - g_bits((1.0 - eta) * n))
}

/// Coherent information `g(ηN) - g((1-η)N)` of the unsqueezed thermal input.
/// Negative for `η < 1/2`.
pub fn coherent_information(n: f64, ch: Efficiency) -> Result<f64> {
    check_photons(n)?;
    let eta = ch.value();
    Ok(g_bits(eta * n) - g_bits((1.0 - eta) * n))
}

/// Holevo information `g(ηN)` of a Gaussian-modulated coherent-state ensemble.
pub fn holevo_chi_coherent(n: f64, ch: Efficiency) -> Result<f64> {
    check_photons(n)?;
    Ok(g_bits(ch.value() * n))
}

/// Resolution of the brute-force maximization grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleGrid {
    pub r_max: f64,
    /// Points per axis (r, c and m), including both ends.
    pub points: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        Self {
            r_max: 3.0,
            points: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleResult {
    pub max_value: f64,
    pub argmax: GaussianModeState,
    /// Grid indices `(r, c, m)` of the argmax.
    pub indices: (usize, usize, usize),
    /// Largest change of the mutual information across the grid cell at the
    /// origin: the scale below which grid and analytic maxima are indistinguishable.
    pub resolution_bound: f64,
    pub evaluated: usize,
}

impl OracleResult {
    pub fn in_origin_cell(&self) -> bool {
        let (i, j, k) = self.indices;
        i <= 1 && j <= 1 && k <= 1
    }
}

struct Axes {
    n: f64,
    r_step: f64,
    c_step: f64,
    points: usize,
}

impl Axes {
    fn r(&self, i: usize) -> f64 {
        self.r_step * i as f64
    }
    fn c(&self, j: usize) -> f64 {
        self.c_step * j as f64
    }
    /// Largest feasible `m` at `(r, c)`, or `None` if infeasible for all `m`.
    fn m_max(&self, i: usize, j: usize) -> Option<f64> {
        let bound = 2.0 * self.n + 1.0 - self.r(i).cosh() * self.c(j).hypot(1.0);
        (bound >= 0.0).then_some(bound)
    }
    fn state(&self, i: usize, j: usize, k: usize) -> Option<GaussianModeState> {
        let m_max = self.m_max(i, j)?;
        let m = m_max * k as f64 / (self.points - 1) as f64;
        GaussianModeState::new(self.n, self.r(i), self.c(j), m).ok()
    }
}

/// Exhaustive search of `mutual_information` over feasible `(r, c, m)`.
///
/// `r ∈ [0, r_max]` and `c ∈ [0, sqrt((2N+1)² - 1)]` are sampled uniformly;
/// for each `(r, c)` the displacement runs over `[0, 2N+1 - cosh r·sqrt(c²+1)]`
/// so every sample satisfies the uncertainty relation. Only `r, c >= 0` are
/// scanned since the mutual information depends on `c²` and on `r` through
/// even combinations. Ties keep the first point in `(r, c, m)` order.
pub fn oracle_max_mutual_information(
    n: f64,
    ch: Efficiency,
    grid: OracleGrid,
) -> Result<OracleResult> {
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::domain(format!("oracle needs N > 0, got {n}")));
    }
    if grid.points < 2 || !(grid.r_max.is_finite() && grid.r_max >= 0.0) {
        return Err(Error::domain(format!("invalid oracle grid {grid:?}")));
    }
    let steps = (grid.points - 1) as f64;
    let c_max = ((2.0 * n + 1.0).powi(2) - 1.0).sqrt();
    let axes = Axes {
        n,
        r_step: grid.r_max / steps,
        c_step: c_max / steps,
        points: grid.points,
    };

    type Best = Option<(f64, (usize, usize, usize), GaussianModeState)>;
    let per_r: Vec<(Best, usize)> = (0..grid.points)
        .into_par_iter()
        .map(|i| {
            let mut best: Best = None;
            let mut count = 0;
            for j in 0..grid.points {
                if axes.m_max(i, j).is_none() {
                    continue;
                }
                for k in 0..grid.points {
                    let Some(state) = axes.state(i, j, k) else {
                        continue;
                    };
                    count += 1;
                    let v = mutual_information(&state, ch);
                    if best.is_none_or(|(b, _, _)| v > b) {
                        best = Some((v, (i, j, k), state));
                    }
                }
            }
            (best, count)
        })
        .collect();

    let mut best: Best = None;
    let mut evaluated = 0;
    for (b, count) in per_r {
        evaluated += count;
        if let Some(cand) = b {
            if best.is_none_or(|(v, _, _)| cand.0 > v) {
                best = Some(cand);
            }
        }
    }
    let (max_value, indices, argmax) =
        best.ok_or_else(|| Error::domain("oracle grid contains no feasible state"))?;

    let origin = axes
        .state(0, 0, 0)
        .map(|s| mutual_information(&s, ch))
        .expect("the origin is always feasible");
    let mut resolution_bound: f64 = 0.0;
    for (i, j, k) in [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (1, 1, 0),
        (1, 0, 1),
        (0, 1, 1),
        (1, 1, 1),
    ] {
        if let Some(s) = axes.state(i, j, k) {
            resolution_bound = resolution_bound.max((mutual_information(&s, ch) - origin).abs());
        }
    }

    Ok(OracleResult {
        max_value,
        argmax,
        indices,
        resolution_bound,
        evaluated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eff(e: f64) -> Efficiency {
        Efficiency::new(e).unwrap()
    }

    #[test]
    fn efficiency_bounds() {
        assert!(Efficiency::new(-0.1).is_err());
        assert!(Efficiency::new(1.0 + 1e-12).is_err());
        assert!(Efficiency::new(f64::NAN).is_err());
        assert_eq!(eff(0.3).complement().value(), 0.7);
    }

    #[test]
    fn thermal_spectrum_is_degenerate() {
        let (p, m) = GaussianModeState::thermal(3.0)
            .unwrap()
            .symplectic_spectrum();
        assert_eq!((p, m), (3.5, 3.5));
        let (p, m) = GaussianModeState::thermal(0.0)
            .unwrap()
            .symplectic_spectrum();
        assert_eq!((p, m), (0.5, 0.5));
    }

    #[test]
    fn infeasible_state_names_the_bound() {
        let err = GaussianModeState::new(1.0, 0.0, 3.0, 0.0).unwrap_err();
        assert!(err.to_string().contains("uncertainty bound"), "{err}");
        // squeezing costs energy
        assert!(GaussianModeState::new(0.0, 0.5, 0.0, 0.0).is_err());
        assert!(GaussianModeState::new(1.0, 0.0, 0.0, 3.5).is_err());
        assert!(GaussianModeState::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn gamma_anchors() {
        let n = 7.0;
        let g = gamma_factor(n + 0.5, n + 0.5, 0.3).unwrap();
        assert!((g - 0.3 * n).abs() < 1e-14);
        assert_eq!(gamma_factor(5.0, 0.2, 0.0).unwrap(), 0.0);
        assert_eq!(gamma_factor(0.5, 0.5, 1.0).unwrap(), 0.0);
        assert!(gamma_factor(0.2, 5.0, 0.5).is_err());
        assert!(gamma_factor(5.0, 0.2, 1.5).is_err());
    }

    #[test]
    fn mutual_information_limits() {
        let s = GaussianModeState::thermal(10.0).unwrap();
        let two_g10 = 2.0 * g_bits(10.0);
        assert!((mutual_information(&s, Efficiency::NOISELESS) - two_g10).abs() < 1e-12);
        assert!((two_g10 - 9.668933712).abs() < 1e-8);
        assert!((mutual_information(&s, Efficiency::HALF) - g_bits(10.0)).abs() < 1e-12);
        assert!(mutual_information(&s, Efficiency::OPAQUE).abs() < 1e-12);
    }

    #[test]
    fn squeezing_lowers_mutual_information() {
        let squeezed = GaussianModeState::new(10.0, 1.0, 0.0, 0.0).unwrap();
        let ce = ce_single_mode(10.0, eff(0.8)).unwrap();
        assert!(mutual_information(&squeezed, eff(0.8)) < ce);
    }

    #[test]
    fn rate_anchors() {
        for n in [0.0, 0.3, 1.0, 25.0] {
            let g = g_bits(n);
            assert!((ce_single_mode(n, Efficiency::NOISELESS).unwrap() - 2.0 * g).abs() < 1e-12);
            assert!((ce_single_mode(n, Efficiency::HALF).unwrap() - g).abs() < 1e-12);
            assert_eq!(ce_single_mode(n, Efficiency::OPAQUE).unwrap(), 0.0);
            assert_eq!(coherent_information(n, Efficiency::HALF).unwrap(), 0.0);
            assert!((coherent_information(n, Efficiency::NOISELESS).unwrap() - g).abs() < 1e-15);
            assert!((holevo_chi_coherent(n, Efficiency::NOISELESS).unwrap() - g).abs() < 1e-15);
            assert_eq!(holevo_chi_coherent(n, Efficiency::OPAQUE).unwrap(), 0.0);
        }
        let chi = holevo_chi_coherent(1.0, Efficiency::HALF).unwrap();
        assert!((chi - (1.5 * 3f64.log2() - 1.0)).abs() < 1e-15);
        assert!((chi - 1.377444).abs() < 1e-6);
        assert!(ce_single_mode(-1.0, Efficiency::HALF).is_err());
    }

    #[test]
    fn oracle_rejects_bad_input() {
        assert!(oracle_max_mutual_information(0.0, eff(0.5), OracleGrid::default()).is_err());
        let tiny = OracleGrid {
            r_max: 3.0,
            points: 1,
        };
        assert!(oracle_max_mutual_information(1.0, eff(0.5), tiny).is_err());
    }

    #[test]
    fn oracle_finds_unsqueezed_maximum() {
        let res = oracle_max_mutual_information(10.0, eff(0.8), OracleGrid::default()).unwrap();
        assert_eq!(res.indices, (0, 0, 0));
        let ce = ce_single_mode(10.0, eff(0.8)).unwrap();
        assert!((res.max_value - ce).abs() < res.resolution_bound);
        let noiseless =
            oracle_max_mutual_information(10.0, Efficiency::NOISELESS, OracleGrid::default())
                .unwrap();
        assert!((noiseless.max_value - 2.0 * g_bits(10.0)).abs() < 1e-12);
    }
}
