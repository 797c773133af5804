//! Built-in anchor checks with a machine-readable summary.

use std::f64::consts::PI;

use anyhow::Result;
use bosonic_capacity::allocator::{f_eta, RateFunction};
use bosonic_capacity::capacities::{
    c_of_eta, c_of_eta_numerical, classical_lower_bound_numerical, lower_bound_zeta,
    quantum_lower_bound,
};
use bosonic_capacity::numerics::g_entropy;
use bosonic_capacity::single_mode::{ce_single_mode, oracle_max_mutual_information, OracleGrid};
use bosonic_capacity::{Efficiency, ToleranceConfig};
use clap::Args;
use serde::Serialize;

use crate::output::{emit, fmt9, json_string, Header};
use crate::{usage, Format, Global, Status};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Corrupt one intermediate quantity to exercise the failure path.
    #[arg(long, hide = true, value_parser = ["f-eta"])]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    value: f64,
    expected: f64,
    deviation: f64,
    tolerance: f64,
    passed: bool,
}

struct Gate {
    /// Overrides every default tolerance except the oracle's grid resolution.
    tol: Option<f64>,
}

impl Gate {
    fn check(&self, name: &'static str, value: f64, expected: f64, default_tol: f64) -> Check {
        let tolerance = self.tol.unwrap_or(default_tol);
        let deviation = (value - expected).abs();
        Check {
            name,
            value,
            expected,
            deviation,
            tolerance,
            passed: deviation <= tolerance,
        }
    }
}

fn eff(eta: f64) -> Efficiency {
    Efficiency::new(eta).expect("grid efficiencies lie in [0, 1]")
}

fn checks(gate: &Gate, fault: Option<&str>) -> Result<Vec<Check>> {
    let tol = ToleranceConfig::default();
    let mut out = Vec::new();

    out.push(gate.check(
        "C(1/2) = 1",
        c_of_eta_numerical(Efficiency::HALF, &tol)?,
        1.0,
        1e-6,
    ));
    out.push(gate.check(
        "C(1) = 2",
        c_of_eta(Efficiency::NOISELESS, &tol)?,
        2.0,
        1e-6,
    ));

    let mut f = f_eta(
        &RateFunction::entanglement_assisted(Efficiency::HALF)?,
        &tol,
    )?;
    if fault == Some("f-eta") {
        f *= 1.0 + 1e-3;
    }
    out.push(gate.check("f(1/2) = pi^2/6", f, PI * PI / 6.0, 1e-8));

    let h = 1e-3;
    let slope = (c_of_eta(eff(0.5 + h), &tol)? - c_of_eta(eff(0.5 - h), &tol)?) / (2.0 * h);
    out.push(gate.check("dC/deta at 1/2 = 3/2", slope, 1.5, 1e-2));

    // the worst violation of C >= bound over a 21x21 (eta, zeta) grid
    let mut violation = 0.0f64;
    for i in 0..=20 {
        let ch = eff(i as f64 / 20.0);
        let c = c_of_eta(ch, &tol)?;
        for j in 0..=20 {
            let zeta = 0.25 * 16f64.powf(j as f64 / 20.0);
            violation = violation.max(lower_bound_zeta(ch, zeta, &tol)? - c);
        }
    }
    out.push(gate.check("zeta bounds below C", violation.max(0.0), 0.0, 1e-6));
    let tangency = (lower_bound_zeta(Efficiency::HALF, 1.0, &tol)? - 1.0)
        .abs()
        .max((lower_bound_zeta(Efficiency::NOISELESS, 1.0, &tol)? - 2.0).abs());
    out.push(gate.check(
        "zeta = 1 bound tangent at eta = 1/2, 1",
        tangency,
        0.0,
        1e-6,
    ));

    let mut worst = 0.0f64;
    let mut slack = f64::INFINITY;
    let mut at_origin = true;
    for n in [1.0, 10.0] {
        for eta in [0.3, 0.5, 0.8] {
            let res = oracle_max_mutual_information(n, eff(eta), OracleGrid::default())?;
            let d = (res.max_value - ce_single_mode(n, eff(eta))?).abs();
            at_origin &= res.in_origin_cell();
            worst = worst.max(d);
            slack = slack.min(res.resolution_bound);
        }
    }
    out.push(Check {
        name: "oracle maximum at the thermal state",
        value: worst,
        expected: 0.0,
        deviation: worst,
        tolerance: slack,
        passed: at_origin && worst < slack,
    });

    let mut anti = 0.0f64;
    for i in 0..100 {
        let n = 10f64.powf(-4.0 + 8.0 * i as f64 / 99.0);
        let two_g = 2.0 * g_entropy(n)?;
        for j in 0..=20 {
            let ch = eff(j as f64 / 20.0);
            anti = anti
                .max((ce_single_mode(n, ch)? + ce_single_mode(n, ch.complement())? - two_g).abs());
        }
    }
    out.push(gate.check("c_E(N,eta) + c_E(N,1-eta) = 2g(N)", anti, 0.0, 1e-12));

    let mut classical = 0.0f64;
    for k in 1..=10 {
        let eta = k as f64 / 10.0;
        classical =
            classical.max((classical_lower_bound_numerical(eff(eta), &tol)? - eta.sqrt()).abs());
    }
    out.push(gate.check("water-filled Holevo rate = sqrt(eta)", classical, 0.0, 1e-6));

    out.push(gate.check(
        "Q_s(1) = 1",
        quantum_lower_bound(Efficiency::NOISELESS, &tol)?,
        1.0,
        1e-6,
    ));
    Ok(out)
}

pub fn verify(args: &VerifyArgs, g: &Global) -> Result<Status> {
    let gate_tol = match g.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err(usage(format!("--tol must be positive, got {t}")))
        }
        t => t,
    };
    if matches!(g.format, Some(Format::Csv | Format::Svg)) {
        return Err(usage("verify writes a JSON summary only"));
    }
    let checks = checks(&Gate { tol: gate_tol }, args.inject_fault.as_deref())?;
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();

    let mut header = Header::new("verify", ToleranceConfig::default());
    if let Some(t) = gate_tol {
        header = header.param("gate_tol", t);
    }
    if let Some(f) = &args.inject_fault {
        header = header.param("inject_fault", f.as_str());
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        header: &'a Header,
        passed: usize,
        failed: usize,
        failures: &'a [&'a str],
        checks: &'a [Check],
    }
    let summary = Summary {
        header: &header,
        passed: checks.len() - failed.len(),
        failed: failed.len(),
        failures: &failed,
        checks: &checks,
    };
    emit(g.out.as_deref(), &json_string(&summary)?)?;

    if !g.quiet {
        for c in &checks {
            eprintln!(
                "[{}] {:<40} deviation {:<12} tolerance {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                fmt9(c.deviation),
                fmt9(c.tolerance)
            );
        }
    }
    if failed.is_empty() {
        if !g.quiet {
            eprintln!("all {} checks passed", checks.len());
        }
        Ok(Status::Success)
    } else {
        eprintln!("verification failed: {}", failed.join("; "));
        Ok(Status::VerifyFailed)
    }
}
