//! `ce-curve`, `capacity`, `allocate` and `single-mode`.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use bosonic_capacity::allocator::{
    discrete_allocation, ModeGrid, PowerBudget, RateFunction, RateKind,
};
use bosonic_capacity::capacities::{capacity_curve, capacity_report, linear_eta_grid};
use bosonic_capacity::single_mode::{
    ce_single_mode, coherent_information, holevo_chi_coherent, mutual_information,
};
use bosonic_capacity::{Efficiency, GaussianModeState, ToleranceConfig};
use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::output::{emit, fmt9, json_string, Header, Table};
use crate::svg::{line_chart, Series};
use crate::{usage, Format, Global, Status};

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 0.0)]
    pub eta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_max: f64,
    /// Number of evenly spaced efficiencies, endpoints included.
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
}

pub fn ce_curve(args: &CurveArgs, g: &Global) -> Result<Status> {
    let tol = g.numerics()?;
    let etas = linear_eta_grid(args.eta_min, args.eta_max, args.steps)?;
    let header = Header::new("ce-curve", tol)
        .param("eta_min", args.eta_min)
        .param("eta_max", args.eta_max)
        .param("steps", args.steps);
    let mut table = Table::new([
        "eta",
        "C",
        "C_linear",
        "bound_zeta_1",
        "bound_zeta_inv_sqrt_eta",
    ]);
    let mut status = Status::Success;
    for (eta, point) in etas.iter().zip(capacity_curve(&etas, &tol)?) {
        match point {
            Ok(p) => table.push(vec![
                p.eta,
                p.c,
                p.c_linear,
                p.bound_zeta_1,
                p.bound_zeta_inv_sqrt_eta,
            ]),
            Err(e) => {
                eprintln!("error: eta = {eta}: {e}; row skipped");
                status = Status::Numerical;
            }
        }
    }
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(&header),
        Format::Json => table.to_json(&header)?,
        Format::Svg => curve_svg(&table, &header),
    };
    emit(g.out.as_deref(), &text)?;
    Ok(status)
}

pub fn curve_svg(table: &Table, header: &Header) -> String {
    let eta = table.column("eta").unwrap_or_default();
    let series: Vec<Series> = [
        ("C(η)", "C"),
        ("linearization", "C_linear"),
        ("bound ζ = 1", "bound_zeta_1"),
        ("bound ζ = 1/√η", "bound_zeta_inv_sqrt_eta"),
    ]
    .iter()
    .filter_map(|(name, col)| Some(Series::new(*name, &eta, &table.column(col)?)))
    .collect();
    line_chart(
        &header.lines(),
        "Entanglement-assisted capacity",
        "η",
        "C / (T·R_C)",
        &series,
    )
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long)]
    pub eta: f64,
    /// Input power 𝒫 [default: 1 unless --energy is given].
    #[arg(long, conflicts_with = "energy")]
    pub power: Option<f64>,
    /// Total energy ℰ = 𝒫·T.
    #[arg(long)]
    pub energy: Option<f64>,
    /// Transmission time T [default: 1 unless --spacing is given].
    #[arg(long, conflicts_with = "spacing")]
    pub time: Option<f64>,
    /// Mode spacing δω; sets T = 2π/δω.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Extra ζ values for the thermal-profile bounds (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub zeta: Vec<f64>,
    /// Report absolute quantities for this value of ħ.
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

pub fn capacity(args: &CapacityArgs, g: &Global) -> Result<Status> {
    let tol = g.numerics()?;
    let ch = Efficiency::new(args.eta)?;
    let time = match args.spacing {
        Some(dw) => PowerBudget::new(1.0, dw)?.transmission_time(),
        None => args.time.unwrap_or(1.0),
    };
    let power = match args.energy {
        Some(e) => e / time,
        None => args.power.unwrap_or(1.0),
    };
    let budget = PowerBudget::from_power_and_time(power, time)?;
    let report = capacity_report(ch, &budget, &args.zeta, &tol)?.with_hbar(args.hbar)?;
    let header = Header::new("capacity", tol)
        .param("eta", args.eta)
        .param("power", power)
        .param("time", time)
        .param("zeta", args.zeta.clone())
        .param("hbar", args.hbar);
    let text = match g.format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, T> {
                header: &'a Header,
                report: T,
            }
            json_string(&Doc {
                header: &header,
                report: &report,
            })?
        }
        Format::Csv => {
            let scalars = [
                ("c_of_eta", report.c_of_eta),
                ("linearized", report.linearized),
                ("noiseless_rate", report.noiseless_rate),
                ("assisted_rate", report.assisted_rate),
                ("assisted_capacity_bits", report.assisted_capacity_bits),
                (
                    "assisted_quantum_capacity_qubits",
                    report.assisted_quantum_capacity_qubits,
                ),
                ("classical_lower_ratio", report.classical_lower_ratio),
                ("classical_lower_bits", report.classical_lower_bits),
                ("quantum_lower_ratio", report.quantum_lower_ratio),
                ("quantum_lower_qubits", report.quantum_lower_qubits),
            ];
            key_value_csv(
                &header,
                scalars.iter().map(|(k, v)| (k.to_string(), *v)).chain(
                    report
                        .bounds_zeta
                        .iter()
                        .map(|b| (format!("bound_zeta_{}", fmt9(b.zeta)), b.value)),
                ),
            )
        }
        Format::Svg => return Err(usage("svg output is not available for capacity")),
    };
    emit(g.out.as_deref(), &text)?;
    Ok(Status::Success)
}

fn key_value_csv(header: &Header, rows: impl Iterator<Item = (String, f64)>) -> String {
    let mut s = String::new();
    for line in header.lines() {
        s.push_str(&format!("# {line}\n"));
    }
    s.push_str("quantity,value\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{}\n", fmt9(v)));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateArg {
    #[value(alias = "ea")]
    EntanglementAssisted,
    #[value(alias = "holevo")]
    HolevoCoherent,
    #[value(alias = "coherent")]
    CoherentInfo,
}

impl From<RateArg> for RateKind {
    fn from(r: RateArg) -> Self {
        match r {
            RateArg::EntanglementAssisted => RateKind::EntanglementAssisted,
            RateArg::HolevoCoherent => RateKind::HolevoCoherent,
            RateArg::CoherentInfo => RateKind::CoherentInfo,
        }
    }
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    #[arg(long)]
    pub eta: f64,
    #[arg(long, value_enum, default_value = "entanglement-assisted")]
    pub rate: RateArg,
    /// File of mode frequencies, one per line ('#' starts a comment).
    #[arg(long, conflicts_with_all = ["spacing", "count"])]
    pub modes: Option<PathBuf>,
    /// Uniform grid ω_i = i·δω, i = 1..=count.
    #[arg(long, requires = "count")]
    pub spacing: Option<f64>,
    #[arg(long, requires = "spacing")]
    pub count: Option<usize>,
    /// Total energy ℰ.
    #[arg(long, conflicts_with = "power")]
    pub energy: Option<f64>,
    /// Input power 𝒫, with T = 2π/δω.
    #[arg(long)]
    pub power: Option<f64>,
}

pub fn allocate(args: &AllocateArgs, g: &Global) -> Result<Status> {
    let tol = g.numerics()?;
    let ch = Efficiency::new(args.eta)?;
    let rate = RateFunction::new(args.rate.into(), ch)?;
    let (grid, source) = match (&args.modes, args.spacing, args.count) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            (ModeGrid::parse(&text)?, path.display().to_string())
        }
        (None, Some(dw), Some(n)) => (
            ModeGrid::uniform(dw, n)?,
            format!("uniform spacing={dw} count={n}"),
        ),
        _ => {
            return Err(usage(
                "give a mode file (--modes) or --spacing with --count",
            ))
        }
    };
    let energy = match (args.energy, args.power) {
        (Some(e), _) => e,
        (None, Some(p)) => p * 2.0 * PI / grid.spacing(),
        (None, None) => return Err(usage("give the budget as --energy or --power")),
    };
    let budget = PowerBudget::new(energy, grid.spacing())?;
    let alloc = discrete_allocation(&grid, &budget, &rate, &tol).context("allocation failed")?;

    let header = Header::new("allocate", tol)
        .param("eta", args.eta)
        .param("rate", rate.kind().name())
        .param("modes", source)
        .param("energy", energy);
    let mut table = Table::new(["omega", "N", "rate_contribution_bits"]);
    for m in &alloc.modes {
        table.push(vec![m.omega, m.photons, m.rate_bits]);
    }
    table.footer = vec![
        ("Omega".into(), alloc.multiplier),
        ("total_rate_bits".into(), alloc.total_rate_bits),
        ("energy_residual".into(), alloc.energy_residual),
        ("stationarity_residual".into(), alloc.stationarity_residual),
    ];
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => table.to_csv(&header),
        Format::Json => table.to_json(&header)?,
        Format::Svg => {
            let omega = table.column("omega").unwrap_or_default();
            let n = table.column("N").unwrap_or_default();
            line_chart(
                &header.lines(),
                "Optimal occupancy",
                "ω",
                "N",
                &[Series::new("N(ω)", &omega, &n)],
            )
        }
    };
    emit(g.out.as_deref(), &text)?;
    Ok(Status::Success)
}

#[derive(Debug, Args)]
pub struct SingleModeArgs {
    /// Mean photon number N.
    #[arg(long = "N")]
    pub n: f64,
    #[arg(long)]
    pub eta: f64,
    /// Squeezing parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub r: f64,
    /// Correlation parameter.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Squared displacement.
    #[arg(long, default_value_t = 0.0)]
    pub m: f64,
}

pub fn single_mode(args: &SingleModeArgs, g: &Global) -> Result<Status> {
    let tol = g.numerics()?;
    let ch = Efficiency::new(args.eta)?;
    let state = GaussianModeState::new(args.n, args.r, args.c, args.m)?;
    let (lp, lm) = state.symplectic_spectrum();
    let rows = [
        ("mutual_information_bits", mutual_information(&state, ch)),
        ("c_E_bits", ce_single_mode(args.n, ch)?),
        (
            "coherent_information_bits",
            coherent_information(args.n, ch)?,
        ),
        ("holevo_chi_bits", holevo_chi_coherent(args.n, ch)?),
        ("n0", state.n0()),
        ("lambda_plus", lp),
        ("lambda_minus", lm),
    ];
    let header = Header::new("single-mode", tol)
        .param("N", args.n)
        .param("eta", args.eta)
        .param("r", args.r)
        .param("c", args.c)
        .param("m", args.m);
    let text = match g.format.unwrap_or(Format::Csv) {
        Format::Csv => key_value_csv(&header, rows.iter().map(|(k, v)| (k.to_string(), *v))),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                header: &'a Header,
                values: std::collections::BTreeMap<&'a str, f64>,
            }
            json_string(&Doc {
                header: &header,
                values: rows.iter().copied().collect(),
            })?
        }
        Format::Svg => return Err(usage("svg output is not available for single-mode")),
    };
    emit(g.out.as_deref(), &text)?;
    Ok(Status::Success)
}

/// Default numerics with the quadrature target overridden by `--tol`.
pub fn numerics(tol: Option<f64>) -> Result<ToleranceConfig> {
    match tol {
        None => Ok(ToleranceConfig::default()),
        Some(t) if t > 0.0 && t < 1.0 => Ok(ToleranceConfig::with_quad_target(t)?),
        Some(t) => Err(usage(format!("--tol must lie in (0, 1), got {t}"))),
    }
}
