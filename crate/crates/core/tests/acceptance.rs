//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Monte Carlo criteria run the labelled scenarios from the preset run files
//! at their preset replication counts (10⁴, or 2000 for the large trial)
//! with the default seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rar::cli::{cmd_simulate, parse_run_file, Scenario, SimulateOptions};
use rar::engine::run_monte_carlo;
use rar::inference::score_z0;
use rar::proportions::{
    oracle_rho_rshir_score, rho_neyman_score, rho_neyman_wald, rho_rshir_score, rho_rshir_wald, score_variance,
    score_variance_pooled, PointEstimates, RHO_SEARCH_TOL,
};
use rar::trial::{McSummary, TrialCounts};

fn presets_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../presets")
}

struct Presets(Vec<Scenario>);

impl Presets {
    fn load() -> Self {
        let mut all = Vec::new();
        for name in ["table1", "table2", "table3", "table4", "trials"] {
            all.extend(parse_run_file(presets_dir().join(format!("{name}.json"))).expect("preset parses"));
        }
        Presets(all)
    }

    fn run(&self, label: &str) -> McSummary {
        let s = self.0.iter().find(|s| s.label == label).unwrap_or_else(|| panic!("no preset {label}"));
        run_monte_carlo(&s.config, s.reps).expect("preset is valid")
    }
}

#[derive(Clone, Copy)]
enum Stat {
    RejectionPct,
    Ens,
    MeanProp,
}

/// Collects the checks of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn within(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.count += 1;
        if (got - want).abs() > tol + 1e-9 {
            self.failures.push(format!("{what}: got {got:.4}, want {want} ± {tol}"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        self.count += 1;
        if !ok {
            self.failures.push(what.to_string());
        }
    }

    fn mc(&mut self, presets: &Presets, cells: &[(&str, Stat, f64, f64)]) {
        for &(label, stat, want, tol) in cells {
            let s = presets.run(label);
            let (name, got) = match stat {
                Stat::RejectionPct => ("rejection %", 100.0 * s.rejection_rate),
                Stat::Ens => ("ENS", s.ens),
                Stat::MeanProp => ("n1/n", s.mean_prop),
            };
            self.within(&format!("{label} {name}"), got, want, tol);
        }
    }
}

use Stat::*;

fn criterion_1(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("table1/0.2-0.2/CR-Z1", RejectionPct, 5.9, 1.5),
            ("table1/0.2-0.2/N1-Z1", RejectionPct, 82.2, 2.0),
            ("table1/0.2-0.2/R1-Z1", RejectionPct, 80.0, 2.0),
            ("table1/0.9-0.9/R1-Z1", RejectionPct, 5.1, 1.5),
        ],
    );
}

fn criterion_2(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("table1/0.2-0.5/CR-Z1", RejectionPct, 65.4, 2.0),
            ("table1/0.2-0.5/N1-Z1", RejectionPct, 88.3, 2.0),
            ("table1/0.2-0.5/R1-Z1", RejectionPct, 84.9, 2.0),
            ("table1/0.2-0.5/CR-Z1", Ens, 17.5, 0.4),
            ("table1/0.2-0.5/N1-Z1", Ens, 19.3, 0.4),
            ("table1/0.2-0.5/R1-Z1", Ens, 20.7, 0.4),
            ("table1/0.2-0.5/R1-Z1", MeanProp, 0.71, 0.02),
        ],
    );
}

fn criterion_3(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("table2/n50/0.2-0.2/AC-N1", RejectionPct, 2.8, 1.0),
            ("table2/n50/0.2-0.2/AC-R1", RejectionPct, 0.4, 0.4),
            ("table2/n50/0.2-0.2/B12-N1", RejectionPct, 45.3, 2.0),
            ("table2/n200/0.2-0.2/B120-R1", RejectionPct, 6.5, 1.5),
        ],
    );
}

fn criterion_4(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("table3/0.2-0.2/N1-Z1", RejectionPct, 8.2, 1.5),
            ("table3/0.2-0.2/R1-Z1", RejectionPct, 8.1, 1.5),
            ("table3/0.2-0.7/R1-Z1", Ens, 26.0, 0.4),
        ],
    );
}

fn criterion_5(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("table4/0.2-0.2/N0-Z0", RejectionPct, 5.0, 1.5),
            ("table4/0.2-0.2/R0-Z0", RejectionPct, 5.2, 1.5),
            ("table4/0.2-0.7/N0-Z0", RejectionPct, 96.4, 1.5),
            ("table4/0.2-0.7/R0-Z0", RejectionPct, 96.2, 1.5),
            ("table4/0.2-0.7/R0-Z0", Ens, 25.1, 0.4),
        ],
    );
}

fn criterion_6(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("nac/type1/R0-Z0", RejectionPct, 4.9, 1.5),
            ("nac/power/R0-Z0", RejectionPct, 73.4, 2.0),
            ("nac/power/R0-Z0", Ens, 55.3, 0.5),
            ("nac/power/R0-Z0", MeanProp, 0.6909, 0.02),
            ("nac/type1/N1-Z1", RejectionPct, 65.7, 2.5),
        ],
    );
}

fn criterion_7(p: &Presets, c: &mut Checks) {
    c.mc(
        p,
        &[
            ("calisto/type1/N0-Z0", RejectionPct, 5.2, 2.0),
            ("calisto/power/N0-Z0", Ens, 1467.0, 4.0),
            ("calisto/power/R0-Z0", Ens, 1475.7, 4.0),
        ],
    );
    let s = p.run("calisto/power/R0-Z0");
    c.holds(
        &format!("calisto/power/R0-Z0 rejects in every replication (rate {})", s.rejection_rate),
        s.rejection_rate == 1.0,
    );
}

fn interior_grid() -> impl Iterator<Item = PointEstimates> {
    (1..=99).flat_map(|i| (1..=99).map(move |j| PointEstimates::new(i as f64 / 100.0, j as f64 / 100.0)))
}

fn criterion_8(c: &mut Checks) {
    let mut identity = 0.0f64;
    let mut swap_exact = 0.0f64;
    let mut swap_r0 = 0.0f64;
    for est in interior_grid() {
        identity = identity.max((rho_neyman_wald(est).rho + rho_neyman_score(est).rho - 1.0).abs());
        let sw = est.swapped();
        for f in [rho_neyman_wald, rho_rshir_wald, rho_neyman_score] {
            swap_exact = swap_exact.max((f(est).rho - (1.0 - f(sw).rho)).abs());
        }
        swap_r0 = swap_r0.max((rho_rshir_score(est, RHO_SEARCH_TOL).rho - (1.0 - rho_rshir_score(sw, RHO_SEARCH_TOL).rho)).abs());
    }
    c.holds(&format!("ρ_N1 + ρ_N0 = 1 (max err {identity:e})"), identity <= 1e-12);
    c.holds(&format!("closed-form label swaps (max err {swap_exact:e})"), swap_exact <= 1e-12);
    c.holds(&format!("ρ_R0 label swap (max err {swap_r0:e})"), swap_r0 <= 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut expansion = 0.0f64;
    for _ in 0..10_000 {
        let est = PointEstimates::new(rng.random(), rng.random());
        let rho = rng.random_range(0.01..0.99);
        expansion = expansion.max((score_variance(est, rho) - score_variance_pooled(est, rho)).abs());
    }
    c.holds(&format!("score variance expansion = pooled form (max err {expansion:e})"), expansion <= 1e-12);

    let mut pearson = 0.0f64;
    for _ in 0..10_000 {
        let n0 = rng.random_range(1..=200);
        let n1 = rng.random_range(1..=200);
        let counts = TrialCounts::new(n0, rng.random_range(0..=n0), n1, rng.random_range(0..=n1));
        let out = score_z0(&counts, 0.05).unwrap();
        if out.degenerate {
            continue;
        }
        let chi2 = pearson_chi_squared(&counts);
        pearson = pearson.max((out.z * out.z - chi2).abs() / chi2.max(1.0));
    }
    c.holds(&format!("Z0² = Pearson χ² (max rel err {pearson:e})"), pearson <= 1e-10);
}

fn pearson_chi_squared(c: &TrialCounts) -> f64 {
    let total = c.patients() as f64;
    let rows = [(c.n0, c.s0), (c.n1, c.s1)];
    let success_total = c.successes() as f64;
    let mut chi2 = 0.0;
    for (n, s) in rows {
        for (observed, column) in [(s, success_total), (n - s, total - success_total)] {
            let expected = n as f64 * column / total;
            chi2 += (observed as f64 - expected).powi(2) / expected;
        }
    }
    chi2
}

fn criterion_9(c: &mut Checks) {
    let mut worst = (0.0f64, 0.0, 0.0);
    for est in interior_grid() {
        let d = (rho_rshir_score(est, RHO_SEARCH_TOL).rho - oracle_rho_rshir_score(est, 1e-4)).abs();
        if d > worst.0 {
            worst = (d, est.p0_hat, est.p1_hat);
        }
    }
    c.holds(
        &format!("solver vs grid oracle (max |Δρ| {:e} at {:?})", worst.0, (worst.1, worst.2)),
        worst.0 < 1e-3,
    );
    let at_equal = rho_rshir_score(PointEstimates::new(0.3, 0.3), RHO_SEARCH_TOL).rho;
    c.within("ρ_R0(0.3, 0.3)", at_equal, 0.5, 1e-6);
}

fn criterion_10(c: &mut Checks) {
    let scenarios = parse_run_file(presets_dir().join("table1.json")).unwrap();
    let outputs: Vec<Vec<u8>> = [1, 4, 8]
        .into_iter()
        .map(|threads| {
            let mut out = Vec::new();
            let options = SimulateOptions {
                threads: Some(threads),
                seed: Some(0xC0FFEE),
                ..Default::default()
            };
            cmd_simulate(&scenarios, &mut out, &options).unwrap();
            out
        })
        .collect();
    c.holds("table1 CSV has 51 rows", outputs[0].iter().filter(|&&b| b == b'\n').count() == 52);
    c.holds("threads 1 and 4 byte-identical", outputs[0] == outputs[1]);
    c.holds("threads 1 and 8 byte-identical", outputs[0] == outputs[2]);
}

fn main() -> ExitCode {
    let presets = Presets::load();
    type Criterion<'a> = (&'a str, Box<dyn Fn(&mut Checks) + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("Table 1 null rows", Box::new(|c| criterion_1(&presets, c))),
        ("Table 1 power and ENS at (0.2, 0.5)", Box::new(|c| criterion_2(&presets, c))),
        ("Table 2 Agresti–Caffo and burn-in", Box::new(|c| criterion_3(&presets, c))),
        ("Table 3 equal-probability fallback", Box::new(|c| criterion_4(&presets, c))),
        ("Table 4 score test", Box::new(|c| criterion_5(&presets, c))),
        ("NAC redesign", Box::new(|c| criterion_6(&presets, c))),
        ("CALISTO redesign (2000 reps)", Box::new(|c| criterion_7(&presets, c))),
        ("formula identities", Box::new(criterion_8)),
        ("ρ_R0 solver vs grid oracle", Box::new(criterion_9)),
        ("thread-count determinism", Box::new(criterion_10)),
    ];

    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut checks = Checks::default();
        run(&mut checks);
        let status = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}  {name} ({} checks, {:.1}s)",
            i + 1,
            checks.count,
            start.elapsed().as_secs_f64()
        );
        for f in &checks.failures {
            println!("              {f}");
        }
        failed += usize::from(!checks.failures.is_empty());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
