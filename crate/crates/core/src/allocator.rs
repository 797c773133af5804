//! Spectral water-filling of photons across modes under an energy budget.
//!
//! Maximizing `Σ value(N_i)` subject to `Σ ω_i N_i = ℰ` gives the
//! stationarity condition `marginal(N_i) = ω_i / (Ω ln 2)` (marginal in bits
//! per photon), i.e. in nats `marginal = x` with `x = ω/Ω`. The solution
//! `N = 𝓕(x, η)` depends on the mode only through `x`; `Ω` is then fixed by
//! the energy budget. In the continuum limit of closely spaced modes the sums
//! become integrals over `x`, giving `f(η) = ∫ x·𝓕 dx` and
//! `I(η) = ∫ value(𝓕) dx`.

use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numerics::{
    adaptive_quadrature, find_root_bracketed, g_bits, try_bisect_monotone, LowerEndpoint,
    ToleranceConfig, UpperLimit,
};
use crate::single_mode::Efficiency;
use crate::{Error, Result};

/// Occupancies are solved over `ln N` in this range.
const LN_N_MIN: f64 = -745.0;
const LN_N_MAX: f64 = 700.0;
/// Occupancies below this are reported as exactly zero.
pub const OCCUPANCY_FLOOR: f64 = 1e-300;
/// Grids at least this large solve their modes in parallel.
const PARALLEL_MODES: usize = 64;

/// The per-mode objective being water-filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateKind {
    /// `g(N) + g(ηN) - g((1-η)N)`: entanglement-assisted capacity.
    EntanglementAssisted,
    /// `g(ηN)`: Holevo information of Gaussian-modulated coherent states.
    HolevoCoherent,
    /// `g(ηN) - g((1-η)N)`: coherent information, only useful for `η > 1/2`.
    CoherentInfo,
}

impl RateKind {
    pub fn name(self) -> &'static str {
        match self {
            RateKind::EntanglementAssisted => "entanglement-assisted",
            RateKind::HolevoCoherent => "holevo-coherent",
            RateKind::CoherentInfo => "coherent-information",
        }
    }
}

/// A rate kind bound to a channel efficiency for which it is strictly concave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFunction {
    kind: RateKind,
    eff: Efficiency,
}

#[inline]
fn softplus(z: f64) -> f64 {
    if z > 35.0 {
        z + (-z).exp()
    } else if z < -35.0 {
        z.exp()
    } else {
        z.exp().ln_1p()
    }
}

/// `ln(1+y) - y` without cancellation for small `y`.
#[inline]
fn ln1p_minus_x(y: f64) -> f64 {
    if y < 0.1 {
        // alternating series, truncation error < y^18/18
        let mut term = -y * y;
        let mut sum = 0.0;
        for k in 2..18 {
            sum += term / k as f64;
            term *= -y;
        }
        sum
    } else {
        y.ln_1p() - y
    }
}

/// `a·ln(1 + 1/(aN))` as a function of `u = ln N`, stable for tiny `N`.
#[inline]
fn weighted_log(a: f64, u: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * softplus(-u - a.ln())
    }
}

/// `a·ln(1 + 1/(aN)) - 1/N` for `N >= 1`; the `1/N` parts cancel between terms.
#[inline]
fn excess_log(a: f64, n: f64) -> f64 {
    if a == 0.0 {
        return -n.recip();
    }
    let y = (a * n).recip();
    if y < 0.1 {
        a * ln1p_minus_x(y)
    } else {
        a * y.ln_1p() - n.recip()
    }
}

impl RateFunction {
    /// Binds `kind` to `eff`, rejecting combinations outside the kind's
    /// validity domain and verifying numerically that the marginal rate is
    /// strictly decreasing on a log grid of photon numbers.
    pub fn new(kind: RateKind, eff: Efficiency) -> Result<Self> {
        let eta = eff.value();
        match kind {
            RateKind::EntanglementAssisted => {}
            RateKind::HolevoCoherent if eta > 0.0 => {}
            RateKind::HolevoCoherent => {
                return Err(Error::domain(
                    "Holevo rate is identically zero for eta = 0; nothing to allocate",
                ))
            }
            RateKind::CoherentInfo if eta > 0.5 => {}
            RateKind::CoherentInfo => {
                return Err(Error::domain(
                    "coherent-information bound is zero for eta ≤ 1/2",
                ))
            }
        }
        let rate = Self { kind, eff };
        if !rate.is_degenerate() {
            rate.check_concavity()?;
        }
        Ok(rate)
    }

    pub fn entanglement_assisted(eff: Efficiency) -> Result<Self> {
        Self::new(RateKind::EntanglementAssisted, eff)
    }

    pub fn kind(&self) -> RateKind {
        self.kind
    }

    pub fn efficiency(&self) -> Efficiency {
        self.eff
    }

    /// True when the objective vanishes identically (entanglement-assisted at
    /// `η = 0`): every feasible allocation is optimal.
    pub fn is_degenerate(&self) -> bool {
        self.kind == RateKind::EntanglementAssisted && self.eff.value() == 0.0
    }

    /// Per-mode rate in bits at mean photon number `n`.
    pub fn value(&self, n: f64) -> f64 {
        let eta = self.eff.value();
        match self.kind {
            RateKind::EntanglementAssisted => g_bits(n) + g_bits(eta * n) - g_bits((1.0 - eta) * n),
            RateKind::HolevoCoherent => g_bits(eta * n),
            RateKind::CoherentInfo => g_bits(eta * n) - g_bits((1.0 - eta) * n),
        }
    }

    /// `d value / dN` in bits per photon.
    pub fn marginal(&self, n: f64) -> f64 {
        if n <= 0.0 {
            return if self.is_degenerate() {
                0.0
            } else {
                f64::INFINITY
            };
        }
        self.marginal_nats(n.ln()) / LN_2
    }

    /// Marginal rate in nats per photon at `N = e^u`.
    fn marginal_nats(&self, u: f64) -> f64 {
        let eta = self.eff.value();
        let rest = 1.0 - eta;
        if u >= 0.0 {
            let n = u.exp();
            match self.kind {
                RateKind::EntanglementAssisted => {
                    n.recip().ln_1p() + excess_log(eta, n) - excess_log(rest, n)
                }
                RateKind::HolevoCoherent => eta * (eta * n).recip().ln_1p(),
                RateKind::CoherentInfo => excess_log(eta, n) - excess_log(rest, n),
            }
        } else {
            match self.kind {
                RateKind::EntanglementAssisted => {
                    softplus(-u) + weighted_log(eta, u) - weighted_log(rest, u)
                }
                RateKind::HolevoCoherent => weighted_log(eta, u),
                RateKind::CoherentInfo => weighted_log(eta, u) - weighted_log(rest, u),
            }
        }
    }

    fn log_marginal(&self, u: f64) -> f64 {
        let m = self.marginal_nats(u);
        if m > 0.0 {
            m.ln()
        } else {
            f64::MIN_POSITIVE.ln()
        }
    }

    fn check_concavity(&self) -> Result<()> {
        const POINTS: usize = 161;
        let (lo, hi) = (1e-8f64.ln(), 1e8f64.ln());
        let mut prev = f64::INFINITY;
        for i in 0..POINTS {
            let u = lo + (hi - lo) * i as f64 / (POINTS - 1) as f64;
            let m = self.marginal_nats(u);
            if !(m > 0.0 && m < prev) {
                return Err(Error::domain(format!(
                    "{} rate at eta = {} is not strictly concave: marginal {m:e} at N = {:e} \
                     does not decrease from {prev:e}",
                    self.kind.name(),
                    self.eff.value(),
                    u.exp()
                )));
            }
            prev = m;
        }
        Ok(())
    }

    /// Exponential decay rate of the optimal occupancy `𝓕(x)` for large `x`.
    pub fn decay_rate(&self) -> f64 {
        let eta = self.eff.value();
        match self.kind {
            RateKind::EntanglementAssisted if eta > 0.0 => 1.0 / (2.0 * eta),
            RateKind::EntanglementAssisted => 1.0,
            RateKind::HolevoCoherent => 1.0 / eta,
            RateKind::CoherentInfo => 1.0 / (2.0 * eta - 1.0),
        }
    }
}

/// Optimal mean photon number `𝓕(x, η)` of a mode with `x = ω/Ω`: the
/// unique `N` with `marginal(N) = x / ln 2` bits per photon.
///
/// For the entanglement-assisted rate, `η = 1` uses the exact solution
/// `1/(e^{x/2} - 1)`. At `η = 0` the objective vanishes and the thermal
/// profile `1/(eˣ - 1)` is returned as a representative optimum.
pub fn occupancy_from_multiplier(
    x: f64,
    rate: &RateFunction,
    tol: &ToleranceConfig,
) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!(
            "ω/Ω must be positive and finite, got {x}"
        )));
    }
    if rate.kind == RateKind::EntanglementAssisted {
        let eta = rate.eff.value();
        if eta == 0.0 {
            return Ok(floor_occupancy(x.exp_m1().recip()));
        }
        if eta == 1.0 {
            return Ok(floor_occupancy((0.5 * x).exp_m1().recip()));
        }
    }

    let ln_x = x.ln();
    let h = |u: f64| rate.log_marginal(u) - ln_x;
    let (mut lo, mut hi) = (-8.0, 8.0);
    while h(lo) < 0.0 {
        if lo <= LN_N_MIN {
            return Ok(0.0);
        }
        hi = lo;
        lo = (2.0 * lo).max(LN_N_MIN);
    }
    while h(hi) > 0.0 {
        if hi >= LN_N_MAX {
            return Err(Error::numerical(
                format!("occupancy for ω/Ω = {x:e} exceeds e^{LN_N_MAX}"),
                hi.exp(),
                f64::INFINITY,
            ));
        }
        lo = hi;
        hi = (2.0 * hi).min(LN_N_MAX);
    }
    let u = find_root_bracketed(h, lo, hi, tol)?;
    Ok(floor_occupancy(u.exp()))
}

#[inline]
fn floor_occupancy(n: f64) -> f64 {
    if n < OCCUPANCY_FLOOR {
        0.0
    } else {
        n
    }
}

/// Mode frequencies `ω_i` (ħ = 1).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeGrid {
    frequencies: Vec<f64>,
    spacing: f64,
}

impl ModeGrid {
    /// Strictly increasing, positive, finite frequencies. The spacing `δω` is
    /// the smallest gap between neighbours (the frequency itself for a single mode).
    pub fn new(frequencies: Vec<f64>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::domain("mode grid is empty"));
        }
        if let Some(bad) = frequencies.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::domain(format!(
                "mode frequencies must be positive and finite, got {bad}"
            )));
        }
        let mut spacing = frequencies[0];
        for (i, pair) in frequencies.windows(2).enumerate() {
            let gap = pair[1] - pair[0];
            if gap <= 0.0 {
                return Err(Error::domain(format!(
                    "mode frequencies must be strictly increasing (entries {i} and {})",
                    i + 1
                )));
            }
            spacing = if i == 0 { gap } else { spacing.min(gap) };
        }
        Ok(Self {
            frequencies,
            spacing,
        })
    }

    /// `ω_i = i·δω` for `i = 1..=count`.
    pub fn uniform(spacing: f64, count: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::domain(format!(
                "mode spacing must be positive, got {spacing}"
            )));
        }
        Self::new((1..=count).map(|i| i as f64 * spacing).collect())
    }

    /// One frequency per line in any order; blank lines and `#` comments are
    /// ignored. Repeated frequencies are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut freqs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let w: f64 = line.parse().map_err(|_| {
                Error::domain(format!("line {}: not a number: {line:?}", lineno + 1))
            })?;
            freqs.push(w);
        }
        freqs.sort_by(f64::total_cmp);
        Self::new(freqs)
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }
}

/// Total input energy `ℰ` and mode spacing `δω` (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    total_energy: f64,
    spacing: f64,
}

impl PowerBudget {
    pub fn new(total_energy: f64, spacing: f64) -> Result<Self> {
        if !(total_energy.is_finite() && total_energy > 0.0) {
            return Err(Error::domain(format!(
                "energy must be positive, got {total_energy}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::domain(format!(
                "mode spacing must be positive, got {spacing}"
            )));
        }
        Ok(Self {
            total_energy,
            spacing,
        })
    }

    /// Budget delivering `power` over the transmission time `2π/δω`.
    pub fn from_power(power: f64, spacing: f64) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::domain(format!(
                "power must be positive, got {power}"
            )));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::domain(format!(
                "mode spacing must be positive, got {spacing}"
            )));
        }
        Self::new(2.0 * PI * power / spacing, spacing)
    }

    /// Budget delivering `power` over transmission time `time`.
    pub fn from_power_and_time(power: f64, time: f64) -> Result<Self> {
        if !(time.is_finite() && time > 0.0) {
            return Err(Error::domain(format!(
                "transmission time must be positive, got {time}"
            )));
        }
        Self::from_power(power, 2.0 * PI / time)
    }

    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// `𝒯 = 2π/δω`.
    pub fn transmission_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    /// `𝒫 = ℰ·δω/2π`.
    pub fn power(&self) -> f64 {
        self.total_energy * self.spacing / (2.0 * PI)
    }

    /// Same spacing, power scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.total_energy * factor, self.spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeOccupancy {
    pub omega: f64,
    pub photons: f64,
    pub rate_bits: f64,
}

/// Result of a discrete water-filling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralAllocation {
    /// `Ω`; the Lagrange multiplier is `1/(Ω ln 2)`.
    pub multiplier: f64,
    pub modes: Vec<ModeOccupancy>,
    pub total_rate_bits: f64,
    /// `|Σ ω_i N_i - ℰ| / ℰ`.
    pub energy_residual: f64,
    /// `max_i |marginal(N_i)·Ω ln 2 - ω_i| / ω_i` over modes with `N_i > 0`.
    pub stationarity_residual: f64,
}

fn solve_modes(
    frequencies: &[f64],
    multiplier: f64,
    rate: &RateFunction,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>> {
    let solve = |(i, w): (usize, &f64)| {
        occupancy_from_multiplier(w / multiplier, rate, tol).map_err(|e| Error::Mode {
            index: i,
            source: Box::new(e),
        })
    };
    if frequencies.len() >= PARALLEL_MODES {
        frequencies.par_iter().enumerate().map(solve).collect()
    } else {
        frequencies.iter().enumerate().map(solve).collect()
    }
}

/// Water-fills `budget.total_energy()` across `grid`, maximizing the total rate.
///
/// `Ω` is found by monotone inversion (in `ln Ω`) of the energy
/// `Σ ω_i 𝓕(ω_i/Ω)`; failures in a single mode carry its index.
pub fn discrete_allocation(
    grid: &ModeGrid,
    budget: &PowerBudget,
    rate: &RateFunction,
    tol: &ToleranceConfig,
) -> Result<SpectralAllocation> {
    tol.validate()?;
    let freqs = grid.frequencies();
    let energy = budget.total_energy();
    let energy_at = |s: f64| -> Result<f64> {
        let ns = solve_modes(freqs, s.exp(), rate, tol)?;
        Ok(freqs.iter().zip(&ns).map(|(w, n)| w * n).sum())
    };
    let lo = freqs[0].ln() - 1.0;
    let hi = freqs[freqs.len() - 1].ln() + 1.0;
    let s = try_bisect_monotone(energy_at, energy, lo, hi, tol)?;
    let multiplier = s.exp();

    let photons = solve_modes(freqs, multiplier, rate, tol)?;
    let modes: Vec<ModeOccupancy> = freqs
        .iter()
        .zip(&photons)
        .map(|(&omega, &n)| ModeOccupancy {
            omega,
            photons: n,
            rate_bits: rate.value(n),
        })
        .collect();
    let used: f64 = modes.iter().map(|m| m.omega * m.photons).sum();
    let stationarity_residual = if rate.is_degenerate() {
        0.0
    } else {
        modes
            .iter()
            .filter(|m| m.photons > 0.0)
            .map(|m| (rate.marginal(m.photons) * multiplier * LN_2 - m.omega).abs() / m.omega)
            .fold(0.0, f64::max)
    };
    Ok(SpectralAllocation {
        multiplier,
        total_rate_bits: modes.iter().map(|m| m.rate_bits).sum(),
        energy_residual: (used - energy).abs() / energy,
        stationarity_residual,
        modes,
    })
}

/// Runs a quadrature whose integrand may fail, surfacing the first failure.
fn integrate_fallible<F>(f: F, decay_rate: f64, tol: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let result = adaptive_quadrature(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        UpperLimit::Infinite { decay_rate },
        LowerEndpoint::Singular,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(result?.value)
}

/// `f(η) = ∫₀^∞ x·𝓕(x, η) dx`, which sets `Ω = sqrt(2π𝒫/f)`.
pub fn f_eta(rate: &RateFunction, tol: &ToleranceConfig) -> Result<f64> {
    integrate_fallible(
        |x| Ok(x * occupancy_from_multiplier(x, rate, tol)?),
        rate.decay_rate(),
        tol,
    )
}

/// `Ω = sqrt(2π𝒫 / f)` with ħ = 1.
pub fn omega_from_power(power: f64, f_value: f64) -> Result<f64> {
    if !(power.is_finite() && power > 0.0) {
        return Err(Error::domain(format!(
            "power must be positive, got {power}"
        )));
    }
    if !(f_value.is_finite() && f_value > 0.0) {
        return Err(Error::domain(format!(
            "f(η) must be positive, got {f_value}"
        )));
    }
    Ok((2.0 * PI * power / f_value).sqrt())
}

/// The two integrals behind a continuum capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuumIntegrals {
    /// `f(η) = ∫ x·𝓕 dx`.
    pub f: f64,
    /// `∫ value(𝓕(x, η)) dx` in bits.
    pub rate_integral: f64,
}

impl ContinuumIntegrals {
    /// Continuum rate per unit time in units of the noiseless wideband rate
    /// `R_C`: `(ln 2/π)·sqrt(3/(2f))·∫ value dx`. Independent of power.
    pub fn normalized_rate(&self) -> f64 {
        LN_2 / PI * (1.5 / self.f).sqrt() * self.rate_integral
    }
}

/// Evaluates `f(η)` and `∫ value(𝓕(x, η)) dx` by quadrature.
pub fn continuum_capacity(
    rate: &RateFunction,
    tol: &ToleranceConfig,
) -> Result<ContinuumIntegrals> {
    let f = f_eta(rate, tol)?;
    let rate_integral = if rate.is_degenerate() {
        0.0
    } else {
        integrate_fallible(
            |x| Ok(rate.value(occupancy_from_multiplier(x, rate, tol)?)),
            rate.decay_rate(),
            tol,
        )?
    };
    Ok(ContinuumIntegrals { f, rate_integral })
}
