//! Trial simulation and Monte Carlo aggregation.
//!
//! A trial runs in three phases:
//!
//! 1. burn-in: `2·B/2` patients in permuted blocks of two, one per arm in
//!    random order;
//! 2. adaptive phase: before each remaining patient the target proportion is
//!    re-estimated from the plain MLEs, turned into an assignment probability
//!    by the targeting procedure, and the patient is randomized with one
//!    uniform draw followed by one outcome draw;
//! 3. the configured final test.
//!
//! ERADE compares the treatment share with the target using the denominator
//! selected by [`EradeShare`](crate::trial::EradeShare). The burn-in leaves at
//! least one patient on control, so the lagged denominator is never zero.
//!
//! Complete randomization skips targeting altogether and assigns every
//! adaptive-phase patient with probability 1/2.
//!
//! Replications run in parallel on the current rayon pool. Each one draws
//! from its own [`replication_rng`] and results are reduced in index order,
//! so the summary does not depend on the number of threads.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::inference::run_test;
use crate::proportions::{target_for, PointEstimates};
use crate::targeting::{erade_probability, smle_probability};
use crate::trial::{
    draw_outcome, replication_rng, Arm, ConfigError, Fallback, McSummary, Rule, Targeting, TrialConfig,
    TrialCounts, TrialResult,
};

/// Bounds applied to the assignment probability when the raw target sits on
/// 0 or 1 and no fallback is configured, so both arms keep positive
/// probability.
pub const BOUNDARY_CLAMP: (f64, f64) = (0.01, 0.99);

/// Burn-in allocation sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurnInPlan {
    pub sequence: Vec<Arm>,
}

impl BurnInPlan {
    /// Permuted blocks of size two: each block puts one patient on each arm,
    /// the order decided by one fair draw.
    pub fn draw<R: Rng + ?Sized>(per_arm: usize, rng: &mut R) -> Self {
        let mut sequence = Vec::with_capacity(2 * per_arm);
        for _ in 0..per_arm {
            if rng.random::<f64>() < 0.5 {
                sequence.extend([Arm::Treatment, Arm::Control]);
            } else {
                sequence.extend([Arm::Control, Arm::Treatment]);
            }
        }
        BurnInPlan { sequence }
    }
}

/// Probability that the next patient goes to treatment given the history.
fn next_assignment_probability(config: &TrialConfig, counts: &TrialCounts) -> f64 {
    if config.rule == Rule::Cr {
        return 0.5;
    }
    let est = PointEstimates::from_counts(counts).expect("burn-in fills both arms");
    let target = target_for(config.rule, est, config.fallback);
    let prob = match config.targeting {
        Targeting::Smle => smle_probability(target),
        Targeting::Erade => erade_probability(
            target,
            counts.n1,
            config.erade_share.denominator(counts.patients()),
            config.erade_alpha,
        ),
    };
    if config.fallback == Fallback::None && (target.rho == 0.0 || target.rho == 1.0) {
        prob.p_treat.clamp(BOUNDARY_CLAMP.0, BOUNDARY_CLAMP.1)
    } else {
        prob.p_treat
    }
}

/// Simulates one complete trial.
pub fn run_trial<R: Rng + ?Sized>(config: &TrialConfig, rng: &mut R) -> Result<TrialResult, ConfigError> {
    let config = config.validate()?;
    let mut counts = TrialCounts::default();

    for arm in BurnInPlan::draw(config.burn_in_per_arm, rng).sequence {
        counts.record(arm, draw_outcome(rng, config.truth(arm)));
    }
    while counts.patients() < config.n {
        let p_treat = next_assignment_probability(&config, &counts);
        let arm = if rng.random::<f64>() < p_treat {
            Arm::Treatment
        } else {
            Arm::Control
        };
        counts.record(arm, draw_outcome(rng, config.truth(arm)));
    }

    let outcome = run_test(config.test, &counts, config.alpha).expect("burn-in fills both arms");
    Ok(TrialResult::new(counts, outcome.z, outcome.reject))
}

/// Replication `rep_index` of `config`, regenerated on its own.
pub fn run_replication(config: &TrialConfig, rep_index: u64) -> Result<TrialResult, ConfigError> {
    run_trial(config, &mut replication_rng(config.seed, rep_index))
}

/// All `reps` replications in index order.
pub fn run_replications(config: &TrialConfig, reps: usize) -> Result<Vec<TrialResult>, ConfigError> {
    let config = config.validate()?;
    Ok((0..reps as u64)
        .into_par_iter()
        .map(|i| run_replication(&config, i).expect("validated above"))
        .collect())
}

/// Operating characteristics of `config` over `reps` replications.
pub fn run_monte_carlo(config: &TrialConfig, reps: usize) -> Result<McSummary, ConfigError> {
    assert!(reps >= 1, "at least one replication is required");
    Ok(summarize(&run_replications(config, reps)?))
}

/// Expected number of successes: the mean of total successes.
pub fn ens(results: &[TrialResult]) -> f64 {
    assert!(!results.is_empty());
    results.iter().map(|r| r.total_successes as f64).sum::<f64>() / results.len() as f64
}

/// Aggregates results in slice order.
pub fn summarize(results: &[TrialResult]) -> McSummary {
    assert!(!results.is_empty());
    let reps = results.len() as f64;
    let rejections = results.iter().filter(|r| r.reject).count() as f64;
    let rejection_rate = rejections / reps;
    let mean_prop = results.iter().map(|r| r.prop_treatment).sum::<f64>() / reps;
    let var_prop = results
        .iter()
        .map(|r| (r.prop_treatment - mean_prop).powi(2))
        .sum::<f64>()
        / reps;
    McSummary {
        reps: results.len(),
        rejection_rate,
        mean_prop,
        var_prop,
        ens: ens(results),
        mc_se_rejection: (rejection_rate * (1.0 - rejection_rate) / reps).sqrt(),
    }
}

/// Header of the per-replication audit stream.
pub const REPLICATION_CSV_HEADER: [&str; 6] = ["rep", "reject", "z", "n1", "s0", "s1"];

/// Writes one audit row per replication, `rep,reject,z,n1,s0,s1`.
pub fn write_replications<W: Write>(out: W, results: &[TrialResult]) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(REPLICATION_CSV_HEADER)?;
    for (rep, r) in results.iter().enumerate() {
        writer.write_record([
            rep.to_string(),
            u8::from(r.reject).to_string(),
            r.z_value.to_string(),
            r.counts.n1.to_string(),
            r.counts.s0.to_string(),
            r.counts.s1.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
