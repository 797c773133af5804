use std::f64::consts::{LN_2, PI};

use bosonic_capacity::numerics::{
    adaptive_quadrature, bisect_monotone, g_entropy, lambda_integral, LowerEndpoint, UpperLimit,
};
use bosonic_capacity::ToleranceConfig;
use proptest::prelude::*;

/// Λ(1) by a plain midpoint sum in `s = ln x`, which is smooth over the whole
/// real line: no adaptivity and no endpoint map shared with the library.
#[test]
fn lambda_one_against_brute_force_midpoint_sum() {
    let (lo, hi, n) = (-60.0f64, 6.0f64, 400_000);
    let h = (hi - lo) / n as f64;
    let brute: f64 = (0..n)
        .map(|i| {
            let x = (lo + (i as f64 + 0.5) * h).exp();
            let occ = 1.0 / x.exp_m1();
            let g = (occ + 1.0) * (occ + 1.0).ln() - if occ > 0.0 { occ * occ.ln() } else { 0.0 };
            g * x * h
        })
        .sum::<f64>()
        / LN_2;
    let lib = lambda_integral(1.0, &ToleranceConfig::default()).unwrap();
    assert!(
        (brute - PI * PI / (3.0 * LN_2)).abs() < 1e-8,
        "brute {brute}"
    );
    assert!((brute - lib).abs() < 1e-8, "brute {brute} vs lib {lib}");
}

#[test]
fn lambda_is_increasing_and_sublinear() {
    let tol = ToleranceConfig::default();
    let ys = [0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 16.0, 100.0];
    let vals: Vec<f64> = ys
        .iter()
        .map(|&y| lambda_integral(y, &tol).unwrap())
        .collect();
    for (w, y) in vals.windows(2).zip(ys.windows(2)) {
        assert!(w[1] > w[0]);
        // concave in y with Λ(0) = 0, so Λ(y)/y decreases
        assert!(w[1] / y[1] < w[0] / y[0]);
    }
}

#[test]
fn bose_integral_by_quadrature() {
    let tol = ToleranceConfig::default();
    let r = adaptive_quadrature(
        |x: f64| if x == 0.0 { 1.0 } else { x / x.exp_m1() },
        0.0,
        UpperLimit::Infinite { decay_rate: 1.0 },
        LowerEndpoint::Regular,
        &tol,
    )
    .unwrap();
    assert!((r.value - PI * PI / 6.0).abs() < 1e-10);
    assert!(r.error_estimate >= 0.0 && r.evaluations > 0);
}

#[test]
fn thermal_inversion_example() {
    // Σ ω/(e^{ω/Ω} - 1) over {ln2, 2ln2} hits (5/3)ln2 at Ω = 1
    let modes = [LN_2, 2.0 * LN_2];
    let energy = |w: f64| modes.iter().map(|&m| m / (m / w).exp_m1()).sum::<f64>();
    let w = bisect_monotone(
        energy,
        5.0 / 3.0 * LN_2,
        0.1,
        10.0,
        &ToleranceConfig::default(),
    )
    .unwrap();
    assert!((w - 1.0).abs() < 1e-10);
}

proptest! {
    #[test]
    fn g_is_increasing_and_concave(a in -8.0f64..8.0, d in 0.01f64..2.0) {
        let x1 = 10f64.powf(a);
        let x2 = x1 * 10f64.powf(d);
        let (g1, g2) = (g_entropy(x1).unwrap(), g_entropy(x2).unwrap());
        prop_assert!(g2 > g1);
        let mid = g_entropy(0.5 * (x1 + x2)).unwrap();
        prop_assert!(mid >= 0.5 * (g1 + g2) - 1e-12 * mid.abs());
    }

    #[test]
    fn g_dominates_log_one_plus_x(a in -10.0f64..10.0) {
        let x = 10f64.powf(a);
        let g = g_entropy(x).unwrap();
        prop_assert!(g >= (1.0 + x).log2() * (1.0 - 1e-14));
        // and g(x) <= log₂(1+x) + log₂ e
        prop_assert!(g <= (1.0 + x).log2() + std::f64::consts::LOG2_E + 1e-12);
    }
}
