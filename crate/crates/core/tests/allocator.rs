use std::f64::consts::{LN_2, PI};

use bosonic_capacity::allocator::{
    continuum_capacity, discrete_allocation, f_eta, occupancy_from_multiplier, omega_from_power,
    ModeGrid, PowerBudget, RateFunction, RateKind,
};
use bosonic_capacity::capacities::{noiseless_rate, quantum_lower_bound};
use bosonic_capacity::numerics::{g_entropy, lambda_integral};
use bosonic_capacity::{Efficiency, ToleranceConfig};
use proptest::prelude::*;

fn eff(eta: f64) -> Efficiency {
    Efficiency::new(eta).unwrap()
}

fn ea(eta: f64) -> RateFunction {
    RateFunction::entanglement_assisted(eff(eta)).unwrap()
}

/// Stationarity written out directly in `N` (not `ln N`), solved by plain
/// bisection on a geometric bracket.
fn stationarity_by_bisection(x: f64, eta: f64) -> f64 {
    let lhs = |n: f64| {
        (1.0 + 1.0 / n).ln() + eta * (1.0 + 1.0 / (eta * n)).ln()
            - (1.0 - eta) * (1.0 + 1.0 / ((1.0 - eta) * n)).ln()
            - x
    };
    let (mut lo, mut hi) = (1e-6f64, 1e6f64);
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if lhs(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-14 * lo {
            break;
        }
    }
    (lo * hi).sqrt()
}

#[test]
fn occupancy_anchors() {
    let tol = ToleranceConfig::default();
    assert!((occupancy_from_multiplier(LN_2, &ea(0.5), &tol).unwrap() - 1.0).abs() < 1e-12);
    for x in [0.01, 0.5, 3.0, 40.0] {
        let n = occupancy_from_multiplier(x, &ea(1.0), &tol).unwrap();
        assert!((n - 1.0 / (0.5 * x).exp_m1()).abs() <= 1e-14 * n);
    }
    let n = occupancy_from_multiplier(1.0, &ea(0.8), &tol).unwrap();
    let oracle = stationarity_by_bisection(1.0, 0.8);
    assert!((n - oracle).abs() < 1e-10 * oracle, "{n} vs {oracle}");
    let residual = (ea(0.8).marginal(n) * LN_2 - 1.0).abs();
    assert!(residual < 1e-10);
}

#[test]
fn occupancy_strictly_decreasing_in_multiplier() {
    let tol = ToleranceConfig::default();
    for eta in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0] {
        let rate = ea(eta);
        let mut prev = f64::INFINITY;
        for i in 0..1000 {
            let x = 10f64.powf(-4.0 + 5.5 * i as f64 / 999.0);
            let n = occupancy_from_multiplier(x, &rate, &tol).unwrap();
            assert!(n > 0.0 && n < prev, "η={eta}, x={x}: {n} !< {prev}");
            prev = n;
        }
    }
}

/// `x·𝓕 → 1` for `η < 1`. At `η = 1` the lost-mode term vanishes identically
/// and the profile `1/(e^{x/2} - 1)` gives `x·𝓕 → 2` instead.
#[test]
fn small_multiplier_asymptote() {
    let tol = ToleranceConfig::default();
    for (eta, limit) in [
        (0.0, 1.0),
        (0.1, 1.0),
        (0.3, 1.0),
        (0.5, 1.0),
        (0.7, 1.0),
        (0.9, 1.0),
        (0.99, 1.0),
        (1.0, 2.0),
    ] {
        for (x, within) in [(1e-4, 1e-2), (1e-6, 1e-4)] {
            let xf = x * occupancy_from_multiplier(x, &ea(eta), &tol).unwrap();
            assert!(
                (xf / limit - 1.0).abs() < within,
                "η={eta}, x={x}: x·F = {xf}"
            );
        }
    }
}

#[test]
fn two_mode_thermal_example() {
    let tol = ToleranceConfig::default();
    let grid = ModeGrid::new(vec![LN_2, 2.0 * LN_2]).unwrap();
    let budget = PowerBudget::new(5.0 / 3.0 * LN_2, LN_2).unwrap();
    let a = discrete_allocation(&grid, &budget, &ea(0.5), &tol).unwrap();
    assert!((a.multiplier - 1.0).abs() < 1e-10);
    assert!((a.modes[0].photons - 1.0).abs() < 1e-10);
    assert!((a.modes[1].photons - 1.0 / 3.0).abs() < 1e-10);
    let exact = g_entropy(1.0).unwrap() + g_entropy(1.0 / 3.0).unwrap();
    assert!((a.total_rate_bits - exact).abs() < 1e-9);
}

#[test]
fn opaque_channel_carries_nothing() {
    let tol = ToleranceConfig::default();
    let grid = ModeGrid::uniform(0.1, 50).unwrap();
    let a =
        discrete_allocation(&grid, &PowerBudget::new(3.0, 0.1).unwrap(), &ea(0.0), &tol).unwrap();
    assert_eq!(a.total_rate_bits, 0.0);
    assert!(a.modes.iter().all(|m| m.rate_bits == 0.0));
    assert!(a.energy_residual <= 1e-8);
}

/// Coarse scan over the energy simplex of two modes: nothing on it beats the
/// water-filled allocation, and the best scan point is within one scan step.
#[test]
fn two_mode_simplex_scan() {
    let tol = ToleranceConfig::default();
    for (eta, w1, w2, energy) in [
        (0.8, 0.5, 1.7, 2.0),
        (0.3, 1.0, 1.1, 0.4),
        (0.95, 0.2, 3.0, 10.0),
    ] {
        for kind in [
            RateKind::EntanglementAssisted,
            RateKind::HolevoCoherent,
            RateKind::CoherentInfo,
        ] {
            let Ok(rate) = RateFunction::new(kind, eff(eta)) else {
                continue;
            };
            let grid = ModeGrid::new(vec![w1, w2]).unwrap();
            let a = discrete_allocation(
                &grid,
                &PowerBudget::new(energy, w2 - w1).unwrap(),
                &rate,
                &tol,
            )
            .unwrap();
            let steps = 4000;
            let total = |k: usize| {
                let n1 = energy / w1 * k as f64 / steps as f64;
                let n2 = ((energy - w1 * n1) / w2).max(0.0);
                rate.value(n1) + rate.value(n2)
            };
            let scan: Vec<f64> = (0..=steps).map(total).collect();
            let best = scan.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let resolution = scan
                .windows(2)
                .map(|w| (w[1] - w[0]).abs())
                .fold(0.0, f64::max);
            assert!(
                best <= a.total_rate_bits + 1e-12,
                "{kind:?} η={eta}: scan {best} > {}",
                a.total_rate_bits
            );
            assert!(a.total_rate_bits - best <= resolution, "{kind:?} η={eta}");
        }
    }
}

#[test]
fn continuum_anchors() {
    let tol = ToleranceConfig::default();
    let l1 = lambda_integral(1.0, &tol).unwrap();
    let half = continuum_capacity(&ea(0.5), &tol).unwrap();
    assert!((half.f - PI * PI / 6.0).abs() < 1e-9);
    assert!((half.rate_integral - l1).abs() < 1e-9 * l1);
    let one = continuum_capacity(&ea(1.0), &tol).unwrap();
    assert!((one.f - 2.0 * PI * PI / 3.0).abs() < 1e-8);
    assert!((one.rate_integral - 4.0 * l1).abs() < 1e-8 * l1);
    let holevo = RateFunction::new(RateKind::HolevoCoherent, Efficiency::NOISELESS).unwrap();
    assert!((f_eta(&holevo, &tol).unwrap() - PI * PI / 6.0).abs() < 1e-9);
    let opaque = continuum_capacity(&ea(0.0), &tol).unwrap();
    assert_eq!(opaque.rate_integral, 0.0);
}

#[test]
fn cutoff_frequency_from_power() {
    let f = 2.5;
    assert!((omega_from_power(f / (2.0 * PI), f).unwrap() - 1.0).abs() < 1e-15);
    assert!((omega_from_power(PI / 12.0, PI * PI / 6.0).unwrap() - 1.0).abs() < 1e-15);
    let (a, b) = (
        omega_from_power(3.0, f).unwrap(),
        omega_from_power(12.0, f).unwrap(),
    );
    assert!((b / a - 2.0).abs() < 1e-15);
    assert!(omega_from_power(0.0, f).is_err());
}

#[test]
fn coherent_rate_rejected_at_or_below_half() {
    for eta in [0.0, 0.3, 0.5] {
        let err = RateFunction::new(RateKind::CoherentInfo, eff(eta)).unwrap_err();
        assert!(err.is_domain());
        assert!(err
            .to_string()
            .contains("coherent-information bound is zero for eta ≤ 1/2"));
    }
}

#[test]
fn mode_file_parsing() {
    let grid = ModeGrid::parse("# frequencies\n0.5\n\n1.5 # trailing\n1.0\n").unwrap();
    assert_eq!(grid.frequencies(), &[0.5, 1.0, 1.5]);
    assert!(ModeGrid::parse("1.0\n-2.0\n").is_err());
    assert!(ModeGrid::parse("1.0\n1.0\n").is_err());
    assert!(ModeGrid::parse("# empty\n").is_err());
}

#[test]
fn parallel_solves_are_deterministic() {
    let tol = ToleranceConfig::default();
    let grid = ModeGrid::uniform(0.05, 300).unwrap();
    let budget = PowerBudget::from_power(2.0, 0.05).unwrap();
    let a = discrete_allocation(&grid, &budget, &ea(0.7), &tol).unwrap();
    let b = discrete_allocation(&grid, &budget, &ea(0.7), &tol).unwrap();
    assert_eq!(a, b);
}

/// The continuum coherent-information bound against a dense discrete
/// allocation on a cell-centred comb.
#[test]
fn quantum_bound_matches_dense_discrete_allocation() {
    let tol = ToleranceConfig::default();
    let ch = eff(0.75);
    let rate = RateFunction::new(RateKind::CoherentInfo, ch).unwrap();
    let power = 1.0;
    let ints = continuum_capacity(&rate, &tol).unwrap();
    let span = 100.0 * omega_from_power(power, ints.f).unwrap();
    let count = 2048;
    let dw = span / count as f64;
    let grid = ModeGrid::new((0..count).map(|i| (i as f64 + 0.5) * dw).collect()).unwrap();
    let budget = PowerBudget::from_power(power, dw).unwrap();
    let a = discrete_allocation(&grid, &budget, &rate, &tol).unwrap();
    let discrete = a.total_rate_bits / budget.transmission_time() / noiseless_rate(power);
    let q = quantum_lower_bound(ch, &tol).unwrap();
    assert!(
        (discrete - q).abs() < 5e-3 * q,
        "discrete {discrete} vs continuum {q}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn allocation_is_stationary_and_spends_the_budget(
        freqs in prop::collection::btree_set(1u32..10_000, 2..40),
        energy in 0.01f64..200.0,
        eta in 0.01f64..=1.0,
        kind in prop::sample::select(vec![RateKind::EntanglementAssisted, RateKind::HolevoCoherent, RateKind::CoherentInfo]),
    ) {
        let Ok(rate) = RateFunction::new(kind, eff(eta)) else { return Ok(()) };
        let tol = ToleranceConfig::default();
        let grid = ModeGrid::new(freqs.iter().map(|&k| k as f64 * 1e-3).collect()).unwrap();
        let budget = PowerBudget::new(energy, grid.spacing()).unwrap();
        let a = discrete_allocation(&grid, &budget, &rate, &tol).unwrap();
        prop_assert!(a.energy_residual <= 1e-8, "energy residual {}", a.energy_residual);
        for m in a.modes.iter().filter(|m| m.photons > 0.0) {
            let rel = (rate.marginal(m.photons) * a.multiplier * LN_2 - m.omega).abs() / m.omega;
            prop_assert!(rel <= 1e-8, "stationarity {rel} at ω={}", m.omega);
        }
        for w in a.modes.windows(2) {
            prop_assert!(w[1].photons < w[0].photons || w[1].photons == 0.0);
        }
    }
}
