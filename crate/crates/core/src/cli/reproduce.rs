//! `rar reproduce`: rerun a published table and compare.
//!
//! Each target expands into labelled scenarios (all ERADE in its lagged form,
//! 10⁴ replications, two patients per arm burn-in unless the table varies
//! it). The summaries go to `<target>.csv` in the simulate format, and
//! `<target>_report.csv` lists every published cell next to its simulated
//! counterpart. Cells that carry a tolerance are gated; the rest are
//! reported for information only.
//!
//! Label scheme: `table1/0.2-0.5/N1-Z1`, `table2/n50/0.2-0.2/B12-R1`,
//! `nac/type1/R0-Z0`. Type-I rates for the two trials are simulated at
//! `p₁ = p₀`.

use std::collections::HashMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::ValueEnum;

use crate::cli::published::{BurnInTable, TrialTable, WaldRow, TABLE1, TABLE2, TABLE3, TABLE4, TRIALS};
use crate::cli::sweep::{Design, TYPE1_DESIGNS};
use crate::cli::{cmd_simulate, fmt_g, CliError, Scenario, SimulateOptions};
use crate::trial::{Fallback, McSummary, Rule, TestKind};

/// Replications for the CALISTO redesign unless `--full` is given.
pub const CALISTO_QUICK_REPS: usize = 2000;
pub const FULL_REPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum ReproduceTarget {
    Table1,
    Table2,
    Table3,
    Table4,
    Trials,
}

impl ReproduceTarget {
    pub const ALL: [ReproduceTarget; 5] = [
        ReproduceTarget::Table1,
        ReproduceTarget::Table2,
        ReproduceTarget::Table3,
        ReproduceTarget::Table4,
        ReproduceTarget::Trials,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReproduceTarget::Table1 => "table1",
            ReproduceTarget::Table2 => "table2",
            ReproduceTarget::Table3 => "table3",
            ReproduceTarget::Table4 => "table4",
            ReproduceTarget::Trials => "trials",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Rejection rate in percent.
    Rejection,
    MeanProp,
    VarProp,
    Ens,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Rejection => "rejection_pct",
            Metric::MeanProp => "mean_prop",
            Metric::VarProp => "var_prop",
            Metric::Ens => "ens",
        }
    }

    pub fn of(self, s: &McSummary) -> f64 {
        match self {
            Metric::Rejection => 100.0 * s.rejection_rate,
            Metric::MeanProp => s.mean_prop,
            Metric::VarProp => s.var_prop,
            Metric::Ens => s.ens,
        }
    }
}

/// Gated cells: label, metric, absolute tolerance (percentage points for
/// rejection rates).
pub const TOLERANCES: &[(&str, Metric, f64)] = &[
    ("table1/0.2-0.2/CR-Z1", Metric::Rejection, 1.5),
    ("table1/0.2-0.2/N1-Z1", Metric::Rejection, 2.0),
    ("table1/0.2-0.2/R1-Z1", Metric::Rejection, 2.0),
    ("table1/0.9-0.9/R1-Z1", Metric::Rejection, 1.5),
    ("table1/0.2-0.5/CR-Z1", Metric::Rejection, 2.0),
    ("table1/0.2-0.5/N1-Z1", Metric::Rejection, 2.0),
    ("table1/0.2-0.5/R1-Z1", Metric::Rejection, 2.0),
    ("table1/0.2-0.5/CR-Z1", Metric::Ens, 0.4),
    ("table1/0.2-0.5/N1-Z1", Metric::Ens, 0.4),
    ("table1/0.2-0.5/R1-Z1", Metric::Ens, 0.4),
    ("table1/0.2-0.5/R1-Z1", Metric::MeanProp, 0.02),
    ("table2/n50/0.2-0.2/AC-N1", Metric::Rejection, 1.0),
    ("table2/n50/0.2-0.2/AC-R1", Metric::Rejection, 0.4),
    ("table2/n50/0.2-0.2/B12-N1", Metric::Rejection, 2.0),
    ("table2/n200/0.2-0.2/B120-R1", Metric::Rejection, 1.5),
    ("table3/0.2-0.2/N1-Z1", Metric::Rejection, 1.5),
    ("table3/0.2-0.2/R1-Z1", Metric::Rejection, 1.5),
    ("table3/0.2-0.7/R1-Z1", Metric::Ens, 0.4),
    ("table4/0.2-0.2/N0-Z0", Metric::Rejection, 1.5),
    ("table4/0.2-0.2/R0-Z0", Metric::Rejection, 1.5),
    ("table4/0.2-0.7/N0-Z0", Metric::Rejection, 1.5),
    ("table4/0.2-0.7/R0-Z0", Metric::Rejection, 1.5),
    ("table4/0.2-0.7/R0-Z0", Metric::Ens, 0.4),
    ("nac/type1/R0-Z0", Metric::Rejection, 1.5),
    ("nac/power/R0-Z0", Metric::Rejection, 2.0),
    ("nac/power/R0-Z0", Metric::Ens, 0.5),
    ("nac/power/R0-Z0", Metric::MeanProp, 0.02),
    ("nac/type1/N1-Z1", Metric::Rejection, 2.5),
    ("calisto/type1/N0-Z0", Metric::Rejection, 2.0),
    ("calisto/power/N0-Z0", Metric::Ens, 4.0),
    ("calisto/power/R0-Z0", Metric::Ens, 4.0),
    // every replication rejects
    ("calisto/power/R0-Z0", Metric::Rejection, 0.0),
];

/// A published value attached to a scenario label.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub label: String,
    pub metric: Metric,
    pub value: f64,
    pub tolerance: Option<f64>,
}

/// Scenarios and published values of one target.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub scenarios: Vec<Scenario>,
    pub references: Vec<Reference>,
}

impl Preset {
    fn new() -> Self {
        Preset {
            scenarios: Vec::new(),
            references: Vec::new(),
        }
    }

    fn reference(&mut self, label: &str, metric: Metric, value: f64) {
        let tolerance = TOLERANCES
            .iter()
            .find(|(l, m, _)| *l == label && *m == metric)
            .map(|&(_, _, tol)| tol);
        self.references.push(Reference {
            label: label.to_string(),
            metric,
            value,
            tolerance,
        });
    }

    pub fn scenario(&self, label: &str) -> Option<&Scenario> {
        self.scenarios.iter().find(|s| s.label == label)
    }
}

const fn wald_design(name: &'static str, rule: Rule, fallback: Fallback) -> Design {
    Design::new(name, rule, TestKind::Wald, fallback)
}

const fn score_design(name: &'static str, rule: Rule, fallback: Fallback) -> Design {
    Design::new(name, rule, TestKind::Score, fallback)
}

fn cell(p0: f64, p1: f64) -> String {
    format!("{p0}-{p1}")
}

fn wald_table(preset: &mut Preset, table: &str, rows: &[WaldRow], fallback: Fallback) {
    let designs = [
        wald_design("CR-Z1", Rule::Cr, Fallback::None),
        wald_design("N1-Z1", Rule::NeymanWald, fallback),
        wald_design("R1-Z1", Rule::RshirWald, fallback),
    ];
    for row in rows {
        for (k, design) in designs.iter().enumerate() {
            let label = format!("{table}/{}/{}", cell(row.p0, row.p1), design.name);
            preset.scenarios.push(Scenario::new(&label, design.config(50, row.p0, row.p1)));
            preset.reference(&label, Metric::Rejection, row.rejection[k]);
            if k > 0 {
                preset.reference(&label, Metric::MeanProp, row.mean_prop[k - 1]);
                preset.reference(&label, Metric::VarProp, row.var_prop[k - 1]);
            }
            preset.reference(&label, Metric::Ens, row.ens[k]);
        }
    }
}

fn table4(preset: &mut Preset) {
    let designs = [
        score_design("CR-Z0", Rule::Cr, Fallback::None),
        score_design("N1-Z0", Rule::NeymanWald, Fallback::None),
        score_design("R1-Z0", Rule::RshirWald, Fallback::None),
        score_design("N0-Z0", Rule::NeymanScore, Fallback::EqualOnZeroVariance),
        score_design("R0-Z0", Rule::RshirScore, Fallback::EqualOnZeroVariance),
    ];
    for row in &TABLE4 {
        for (k, design) in designs.iter().enumerate() {
            let label = format!("table4/{}/{}", cell(row.p0, row.p1), design.name);
            preset.scenarios.push(Scenario::new(&label, design.config(50, row.p0, row.p1)));
            preset.reference(&label, Metric::Rejection, row.rejection[k]);
            if k > 0 {
                preset.reference(&label, Metric::MeanProp, row.mean_prop[k - 1]);
                preset.reference(&label, Metric::VarProp, row.var_prop[k - 1]);
            }
            preset.reference(&label, Metric::Ens, row.ens[k]);
        }
    }
}

fn burn_in_table(preset: &mut Preset, table: &BurnInTable) {
    let rules = [("N1", Rule::NeymanWald), ("R1", Rule::RshirWald)];
    // (column prefix, burn-in per arm, test)
    let groups = [
        ("AC".to_string(), 2, TestKind::AgrestiCaffoWald),
        (format!("B{}", table.burn_in[0]), table.burn_in[0] / 2, TestKind::Wald),
        (format!("B{}", table.burn_in[1]), table.burn_in[1] / 2, TestKind::Wald),
    ];
    for row in &table.rows {
        for (g, (prefix, per_arm, test)) in groups.iter().enumerate() {
            for (r, (rule_name, rule)) in rules.iter().enumerate() {
                let k = 2 * g + r;
                let label = format!("table2/n{}/{}/{prefix}-{rule_name}", table.n, cell(row.p0, row.p1));
                let config = Design::new("", *rule, *test, Fallback::None)
                    .config(table.n, row.p0, row.p1)
                    .with_burn_in_per_arm(*per_arm);
                preset.scenarios.push(Scenario::new(&label, config));
                preset.reference(&label, Metric::Rejection, row.rejection[k]);
                preset.reference(&label, Metric::Ens, row.ens[k]);
            }
        }
    }
}

fn trial_table(preset: &mut Preset, table: &TrialTable, reps: usize) {
    for row in &table.rows {
        let design = TYPE1_DESIGNS
            .iter()
            .find(|d| d.name == row.design)
            .expect("trial rows use the type-I comparison designs");
        let null = format!("{}/type1/{}", table.name, design.name);
        preset
            .scenarios
            .push(Scenario::new(&null, design.config(table.n, table.p0, table.p0)).with_reps(reps));
        preset.reference(&null, Metric::Rejection, row.type1);

        let alt = format!("{}/power/{}", table.name, design.name);
        preset
            .scenarios
            .push(Scenario::new(&alt, design.config(table.n, table.p0, table.p1)).with_reps(reps));
        preset.reference(&alt, Metric::Rejection, row.power);
        if let (Some(m), Some(v)) = (row.mean_prop, row.var_prop) {
            preset.reference(&alt, Metric::MeanProp, m);
            preset.reference(&alt, Metric::VarProp, v);
        }
        preset.reference(&alt, Metric::Ens, row.ens);
    }
}

/// Scenarios and references of `target`. `full` runs the CALISTO redesign
/// at 10⁴ replications instead of 2000.
pub fn preset(target: ReproduceTarget, full: bool) -> Preset {
    let mut preset = Preset::new();
    match target {
        ReproduceTarget::Table1 => wald_table(&mut preset, "table1", &TABLE1, Fallback::None),
        ReproduceTarget::Table2 => TABLE2.iter().for_each(|t| burn_in_table(&mut preset, t)),
        ReproduceTarget::Table3 => wald_table(&mut preset, "table3", &TABLE3, Fallback::EqualOnZeroVariance),
        ReproduceTarget::Table4 => table4(&mut preset),
        ReproduceTarget::Trials => {
            trial_table(&mut preset, &TRIALS[0], FULL_REPS);
            let calisto_reps = if full { FULL_REPS } else { CALISTO_QUICK_REPS };
            trial_table(&mut preset, &TRIALS[1], calisto_reps);
        }
    }
    preset
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub reference: Reference,
    pub simulated: f64,
}

impl ReportRow {
    pub fn abs_diff(&self) -> f64 {
        (self.simulated - self.reference.value).abs()
    }

    /// `None` for ungated cells.
    pub fn passed(&self) -> Option<bool> {
        self.reference.tolerance.map(|tol| self.abs_diff() <= tol + 1e-9)
    }

    pub fn status(&self) -> &'static str {
        match self.passed() {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproduceReport {
    pub target: ReproduceTarget,
    pub rows: Vec<ReportRow>,
}

impl ReproduceReport {
    pub fn build(target: ReproduceTarget, preset: &Preset, summaries: &[McSummary]) -> Self {
        let by_label: HashMap<&str, &McSummary> = preset
            .scenarios
            .iter()
            .map(|s| s.label.as_str())
            .zip(summaries)
            .collect();
        let rows = preset
            .references
            .iter()
            .map(|r| ReportRow {
                simulated: r.metric.of(by_label[r.label.as_str()]),
                reference: r.clone(),
            })
            .collect();
        ReproduceReport { target, rows }
    }

    pub fn gated(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.passed().is_some())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.passed() == Some(false))
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), CliError> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["label", "metric", "published", "simulated", "abs_diff", "tolerance", "status"])?;
        for row in &self.rows {
            writer.write_record([
                row.reference.label.clone(),
                row.reference.metric.as_str().into(),
                fmt_g(row.reference.value),
                fmt_g(row.simulated),
                fmt_g(row.abs_diff()),
                row.reference.tolerance.map(fmt_g).unwrap_or_default(),
                row.status().into(),
            ])?;
        }
        writer.flush().map_err(|e| CliError::io("<report>", e))?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub out_dir: PathBuf,
    pub full: bool,
    pub simulate: SimulateOptions,
}

/// Runs `target`, writes `<target>.csv` and `<target>_report.csv` into the
/// output directory, and returns the comparison.
pub fn cmd_reproduce(target: ReproduceTarget, options: &ReproduceOptions) -> Result<ReproduceReport, CliError> {
    let dir = &options.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let preset = preset(target, options.full);

    let path = dir.join(format!("{}.csv", target.as_str()));
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    let summaries = cmd_simulate(&preset.scenarios, BufWriter::new(file), &options.simulate)?;

    let report = ReproduceReport::build(target, &preset, &summaries);
    let path = dir.join(format!("{}_report.csv", target.as_str()));
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    report.write_csv(BufWriter::new(file))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn preset_sizes() {
        let sizes: Vec<_> = ReproduceTarget::ALL
            .iter()
            .map(|&t| preset(t, false).scenarios.len())
            .collect();
        assert_eq!(sizes, [51, 156, 39, 65, 24]);
    }

    #[test]
    fn labels_are_unique_and_every_reference_has_a_scenario() {
        for target in ReproduceTarget::ALL {
            let p = preset(target, false);
            let labels: HashSet<_> = p.scenarios.iter().map(|s| s.label.as_str()).collect();
            assert_eq!(labels.len(), p.scenarios.len(), "{target:?}");
            assert!(p.references.iter().all(|r| labels.contains(r.label.as_str())));
        }
    }

    #[test]
    fn every_tolerance_is_attached() {
        let attached: usize = ReproduceTarget::ALL
            .iter()
            .map(|&t| preset(t, false).references.iter().filter(|r| r.tolerance.is_some()).count())
            .sum();
        assert_eq!(attached, TOLERANCES.len());
    }

    #[test]
    fn table2_settings() {
        let p = preset(ReproduceTarget::Table2, false);
        let ac = &p.scenario("table2/n50/0.2-0.2/AC-N1").unwrap().config;
        assert_eq!((ac.burn_in_per_arm, ac.test), (2, TestKind::AgrestiCaffoWald));
        let b = &p.scenario("table2/n200/0.2-0.2/B120-R1").unwrap().config;
        assert_eq!((b.n, b.burn_in_per_arm, b.test, b.rule), (200, 60, TestKind::Wald, Rule::RshirWald));
    }

    #[test]
    fn calisto_reps_follow_full_flag() {
        let quick = preset(ReproduceTarget::Trials, false);
        assert_eq!(quick.scenario("calisto/power/R0-Z0").unwrap().reps, 2000);
        assert_eq!(quick.scenario("nac/power/R0-Z0").unwrap().reps, 10_000);
        let null = &quick.scenario("nac/type1/R0-Z0").unwrap().config;
        assert_eq!(null.p0, null.p1);
        let full = preset(ReproduceTarget::Trials, true);
        assert_eq!(full.scenario("calisto/power/R0-Z0").unwrap().reps, 10_000);
    }

    #[test]
    fn report_status() {
        let reference = |tolerance| Reference {
            label: "x".into(),
            metric: Metric::Ens,
            value: 10.0,
            tolerance,
        };
        let row = |tol, simulated| ReportRow {
            reference: reference(tol),
            simulated,
        };
        assert_eq!(row(Some(0.4), 10.4).status(), "pass");
        assert_eq!(row(Some(0.4), 9.5).status(), "FAIL");
        assert_eq!(row(None, 0.0).status(), "info");
    }
}
