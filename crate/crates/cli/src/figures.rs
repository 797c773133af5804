//! Datasets and plots for the capacity curves and the single-mode trends.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use bosonic_capacity::capacities::{bounds_curve, capacity_curve, linear_eta_grid};
use bosonic_capacity::single_mode::mutual_information;
use bosonic_capacity::{Efficiency, GaussianModeState};
use clap::Args;

use crate::commands::curve_svg;
use crate::output::{emit, Header, Table};
use crate::svg::{line_chart, Series};
use crate::{usage, Global, Status};

/// Mean photon number of the single-mode sweeps.
const SWEEP_N: f64 = 10.0;
/// Efficiencies plotted as separate columns of the single-mode sweeps.
const SWEEP_ETAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Args)]
pub struct FiguresArgs {
    /// Efficiencies on [0, 1] for the capacity curves.
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
    /// Points per single-mode sweep.
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

fn write(dir: &Path, name: &str, contents: &str, quiet: bool) -> Result<()> {
    let path = dir.join(name);
    emit(Some(&path), contents)?;
    if !quiet {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// `I` along one parameter at `N = 10`, the others held at zero.
fn sweep(
    axis: &str,
    max: f64,
    points: usize,
    state: impl Fn(f64) -> Result<GaussianModeState>,
) -> Result<Table> {
    let mut columns = vec![axis.to_string()];
    columns.extend(SWEEP_ETAS.iter().map(|e| format!("I_eta_{e}")));
    let mut t = Table::new(columns);
    for i in 0..points {
        let v = max * i as f64 / (points - 1) as f64;
        let s = state(v)?;
        let mut row = vec![v];
        for &eta in &SWEEP_ETAS {
            row.push(mutual_information(&s, Efficiency::new(eta)?));
        }
        t.push(row);
    }
    Ok(t)
}

pub fn figures(args: &FiguresArgs, g: &Global) -> Result<Status> {
    if g.format.is_some() {
        return Err(usage(
            "figures always writes both CSV and SVG; drop --format",
        ));
    }
    if args.points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let tol = g.numerics()?;
    let dir: PathBuf = g.out.clone().unwrap_or_else(|| PathBuf::from("figures"));
    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let etas = linear_eta_grid(0.0, 1.0, args.steps)?;
    let mut status = Status::Success;

    let header = Header::new("figures fig1a", tol).param("steps", args.steps);
    let mut fig1a = Table::new([
        "eta",
        "C",
        "C_linear",
        "bound_zeta_1",
        "bound_zeta_inv_sqrt_eta",
    ]);
    for (eta, p) in etas.iter().zip(capacity_curve(&etas, &tol)?) {
        match p {
            Ok(p) => fig1a.push(vec![
                p.eta,
                p.c,
                p.c_linear,
                p.bound_zeta_1,
                p.bound_zeta_inv_sqrt_eta,
            ]),
            Err(e) => {
                eprintln!("error: fig1a eta = {eta}: {e}; row skipped");
                status = Status::Numerical;
            }
        }
    }
    write(&dir, "fig1a.csv", &fig1a.to_csv(&header), g.quiet)?;
    write(&dir, "fig1a.svg", &curve_svg(&fig1a, &header), g.quiet)?;

    let header = Header::new("figures fig1b", tol).param("steps", args.steps);
    let mut fig1b = Table::new(["eta", "C", "C_half", "sqrt_eta", "Q_s"]);
    for (eta, p) in etas.iter().zip(bounds_curve(&etas, &tol)) {
        match p {
            Ok(p) => fig1b.push(vec![
                p.eta,
                p.c,
                p.q_assisted,
                p.classical_lower,
                p.quantum_lower,
            ]),
            Err(e) => {
                eprintln!("error: fig1b eta = {eta}: {e}; row skipped");
                status = Status::Numerical;
            }
        }
    }
    write(&dir, "fig1b.csv", &fig1b.to_csv(&header), g.quiet)?;
    let x = fig1b.column("eta").unwrap_or_default();
    let series: Vec<Series> = [
        ("C_E", "C"),
        ("Q_E = C_E/2", "C_half"),
        ("classical √η", "sqrt_eta"),
        ("quantum Q_s", "Q_s"),
    ]
    .iter()
    .filter_map(|(name, col)| Some(Series::new(*name, &x, &fig1b.column(col)?)))
    .collect();
    let svg = line_chart(
        &header.lines(),
        "Assisted capacities and unassisted bounds",
        "η",
        "capacity / (T·R_C)",
        &series,
    );
    write(&dir, "fig1b.svg", &svg, g.quiet)?;

    let top = 2.0 * SWEEP_N + 1.0;
    let sweeps = [
        ("fig2a", "r", top.acosh(), "squeezing r (c = m = 0)"),
        (
            "fig2b",
            "c",
            (top * top - 1.0).sqrt(),
            "correlation c (r = m = 0)",
        ),
        (
            "fig2c",
            "m",
            top - 1.0,
            "squared displacement m (r = c = 0)",
        ),
    ];
    for (name, axis, max, label) in sweeps {
        let table = sweep(axis, max, args.points, |v| {
            let (r, c, m) = match axis {
                "r" => (v, 0.0, 0.0),
                "c" => (0.0, v, 0.0),
                _ => (0.0, 0.0, v),
            };
            Ok(GaussianModeState::new(SWEEP_N, r, c, m)?)
        })?;
        let header = Header::new(&format!("figures {name}"), tol)
            .param("N", SWEEP_N)
            .param("points", args.points)
            .param("etas", SWEEP_ETAS.to_vec());
        write(
            &dir,
            &format!("{name}.csv"),
            &table.to_csv(&header),
            g.quiet,
        )?;
        let xs = table.column(axis).unwrap_or_default();
        let series: Vec<Series> = table.columns[1..]
            .iter()
            .zip(&SWEEP_ETAS)
            .filter_map(|(col, eta)| {
                Some(Series::new(format!("η = {eta}"), &xs, &table.column(col)?))
            })
            .collect();
        let svg = line_chart(
            &header.lines(),
            "Mutual information at N = 10",
            label,
            "I (bits)",
            &series,
        );
        write(&dir, &format!("{name}.svg"), &svg, g.quiet)?;
    }
    Ok(status)
}
