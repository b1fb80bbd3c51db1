//! `rar sweep`: type-I error grids and allocation-proportion curves.
//!
//! * `type1-diagonal` simulates `p₀ = p₁ = p` for `p` on a grid (step 0.02 by
//!   default) under the six comparison designs and writes one rejection-rate
//!   column per design.
//! * `type1-full` does the same on the whole `(p₀, p₁)` lattice (step 0.1 by
//!   default); off the diagonal the columns are power.
//! * `proportion-curves` evaluates `ρ_N1`, `ρⁿ_N0`, `ρ_R1` and `ρⁿ_R0` for a
//!   few fixed `p₀` against `p₁` on a 0.01 grid. No simulation is involved, so
//!   the output does not depend on the seed.

use std::io::Write;

use clap::ValueEnum;
use thiserror::Error;

use crate::cli::{fmt_g, with_threads, CliError, DEFAULT_REPS};
use crate::engine::run_monte_carlo;
use crate::proportions::{
    rho_neyman_score, rho_neyman_wald, rho_rshir_score, rho_rshir_wald, PointEstimates, RHO_SEARCH_TOL,
};
use crate::trial::{EradeShare, Fallback, McSummary, Rule, TestKind, TrialConfig, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    #[value(name = "type1-diagonal", alias = "type1_diagonal")]
    Type1Diagonal,
    #[value(name = "type1-full", alias = "type1_full")]
    Type1Full,
    #[value(name = "proportion-curves", alias = "proportion_curves")]
    ProportionCurves,
}

impl SweepKind {
    pub fn default_step(self) -> f64 {
        match self {
            SweepKind::Type1Diagonal => 0.02,
            SweepKind::Type1Full => 0.1,
            SweepKind::ProportionCurves => 0.01,
        }
    }
}

/// A rule/test/fallback combination simulated under ERADE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Design {
    pub name: &'static str,
    pub rule: Rule,
    pub test: TestKind,
    pub fallback: Fallback,
}

impl Design {
    pub const fn new(name: &'static str, rule: Rule, test: TestKind, fallback: Fallback) -> Self {
        Design {
            name,
            rule,
            test,
            fallback,
        }
    }

    /// The design at `(n, p0, p1)` with ERADE in its lagged form.
    pub fn config(&self, n: usize, p0: f64, p1: f64) -> TrialConfig {
        TrialConfig::new(n, p0, p1)
            .with_rule(self.rule)
            .with_test(self.test)
            .with_fallback(self.fallback)
            .with_erade_share(EradeShare::Lagged)
    }
}

/// The type-I comparison set: the Wald-optimal rules with `Z₁`, complete
/// randomization with both tests, and the score-optimal rules with `Z₀`.
pub const TYPE1_DESIGNS: [Design; 6] = [
    Design::new("N1-Z1", Rule::NeymanWald, TestKind::Wald, Fallback::None),
    Design::new("R1-Z1", Rule::RshirWald, TestKind::Wald, Fallback::None),
    Design::new("CR-Z1", Rule::Cr, TestKind::Wald, Fallback::None),
    Design::new("CR-Z0", Rule::Cr, TestKind::Score, Fallback::None),
    Design::new("N0-Z0", Rule::NeymanScore, TestKind::Score, Fallback::EqualOnZeroVariance),
    Design::new("R0-Z0", Rule::RshirScore, TestKind::Score, Fallback::EqualOnZeroVariance),
];

pub const CURVE_P0_VALUES: [f64; 3] = [0.3, 0.5, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub n: usize,
    pub burn_in_per_arm: usize,
    /// Grid spacing; `None` takes the kind's default.
    pub step: Option<f64>,
    pub reps: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    /// Fixed control rates for `proportion-curves`.
    pub p0_values: Vec<f64>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            n: 50,
            burn_in_per_arm: 2,
            step: None,
            reps: DEFAULT_REPS,
            seed: DEFAULT_SEED,
            threads: None,
            p0_values: CURVE_P0_VALUES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("invalid grid step {0}: must divide 1 into at least two intervals")]
    Step(f64),
    #[error("p0 value {0} out of (0,1)")]
    P0(f64),
}

/// Interior grid `{step, 2·step, …, 1 − step}`.
pub fn grid(step: f64) -> Result<Vec<f64>, SweepError> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(SweepError::Step(step));
    }
    let k = (1.0 / step).round();
    if (k * step - 1.0).abs() > 1e-9 {
        return Err(SweepError::Step(step));
    }
    let k = k as usize;
    // i/k is correctly rounded, so 3/10 is exactly the literal 0.3.
    Ok((1..k).map(|i| i as f64 / k as f64).collect())
}

/// Simulated operating characteristics on a set of `(p₀, p₁)` cells. A
/// lattice holds `|p0_values|·|p1_values|` cells in row-major order; a
/// diagonal grid holds one cell per value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub p0_values: Vec<f64>,
    pub p1_values: Vec<f64>,
    pub designs: Vec<Design>,
    pub cells: Vec<SweepCell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub p0: f64,
    pub p1: f64,
    /// One summary per design, in `designs` order.
    pub summaries: Vec<McSummary>,
}

impl SweepGrid {
    fn simulate(points: &[(f64, f64)], designs: &[Design], settings: &SweepSettings) -> Result<Vec<SweepCell>, CliError> {
        let mut cells = Vec::with_capacity(points.len());
        for &(p0, p1) in points {
            let mut summaries = Vec::with_capacity(designs.len());
            for design in designs {
                let config = design
                    .config(settings.n, p0, p1)
                    .with_burn_in_per_arm(settings.burn_in_per_arm)
                    .with_seed(settings.seed);
                let summary = with_threads(settings.threads, || run_monte_carlo(&config, settings.reps))?
                    .map_err(|source| CliError::Config {
                        label: format!("{}/{p0}-{p1}", design.name),
                        source,
                    })?;
                summaries.push(summary);
            }
            cells.push(SweepCell { p0, p1, summaries });
        }
        Ok(cells)
    }

    pub fn diagonal(values: Vec<f64>, designs: &[Design], settings: &SweepSettings) -> Result<Self, CliError> {
        let points: Vec<_> = values.iter().map(|&p| (p, p)).collect();
        Ok(SweepGrid {
            cells: Self::simulate(&points, designs, settings)?,
            p0_values: values.clone(),
            p1_values: values,
            designs: designs.to_vec(),
        })
    }

    pub fn lattice(
        p0_values: Vec<f64>,
        p1_values: Vec<f64>,
        designs: &[Design],
        settings: &SweepSettings,
    ) -> Result<Self, CliError> {
        let points: Vec<_> = p0_values
            .iter()
            .flat_map(|&p0| p1_values.iter().map(move |&p1| (p0, p1)))
            .collect();
        Ok(SweepGrid {
            cells: Self::simulate(&points, designs, settings)?,
            p0_values,
            p1_values,
            designs: designs.to_vec(),
        })
    }

    /// Wide CSV: `p0,p1` then one rejection-rate column per design.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut writer = csv::Writer::from_writer(out);
        let mut header = vec!["p0".to_string(), "p1".to_string()];
        header.extend(self.designs.iter().map(|d| d.name.to_string()));
        writer.write_record(&header)?;
        for cell in &self.cells {
            let mut row = vec![fmt_g(cell.p0), fmt_g(cell.p1)];
            row.extend(cell.summaries.iter().map(|s| fmt_g(s.rejection_rate)));
            writer.write_record(&row)?;
        }
        writer.flush().map_err(|e| CliError::io("<output>", e))?;
        Ok(())
    }
}

/// One point on the allocation-proportion curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub p0: f64,
    pub p1: f64,
    pub rho_n1: f64,
    pub rho_n0: f64,
    pub rho_r1: f64,
    pub rho_r0: f64,
}

pub fn proportion_curves(p0_values: &[f64], step: f64) -> Result<Vec<CurvePoint>, SweepError> {
    if let Some(&bad) = p0_values.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(SweepError::P0(bad));
    }
    let p1_values = grid(step)?;
    let mut points = Vec::with_capacity(p0_values.len() * p1_values.len());
    for &p0 in p0_values {
        for &p1 in &p1_values {
            let est = PointEstimates::new(p0, p1);
            points.push(CurvePoint {
                p0,
                p1,
                rho_n1: rho_neyman_wald(est).rho,
                rho_n0: rho_neyman_score(est).rho,
                rho_r1: rho_rshir_wald(est).rho,
                rho_r0: rho_rshir_score(est, RHO_SEARCH_TOL).rho,
            });
        }
    }
    Ok(points)
}

pub fn write_curves<W: Write>(out: W, points: &[CurvePoint]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["p0", "p1", "rho_n1", "rho_n0", "rho_r1", "rho_r0"])?;
    for p in points {
        writer.write_record([p.p0, p.p1, p.rho_n1, p.rho_n0, p.rho_r1, p.rho_r0].map(fmt_g))?;
    }
    writer.flush().map_err(|e| CliError::io("<output>", e))?;
    Ok(())
}

pub fn cmd_sweep<W: Write>(kind: SweepKind, settings: &SweepSettings, out: W) -> Result<(), CliError> {
    let step = settings.step.unwrap_or(kind.default_step());
    let usage = |e: SweepError| CliError::Usage(e.to_string());
    if settings.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    match kind {
        SweepKind::Type1Diagonal => {
            SweepGrid::diagonal(grid(step).map_err(usage)?, &TYPE1_DESIGNS, settings)?.write_csv(out)
        }
        SweepKind::Type1Full => {
            let values = grid(step).map_err(usage)?;
            SweepGrid::lattice(values.clone(), values, &TYPE1_DESIGNS, settings)?.write_csv(out)
        }
        SweepKind::ProportionCurves => {
            write_curves(out, &proportion_curves(&settings.p0_values, step).map_err(usage)?)
        }
    }
}
