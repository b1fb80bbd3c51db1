//! Final-analysis tests for `H₀: p₁ − p₀ = 0` against the two-sided
//! alternative.
//!
//! All three statistics share the numerator `p̂₁ − p̂₀` (or its adjusted
//! version) and differ in the variance estimate. When that estimate is zero
//! the statistic is undefined; the outcome is then marked degenerate with
//! `z = 0` and the null is never rejected.

use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::trial::{TestKind, TrialCounts};

/// Result of a final test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestOutcome {
    pub z: f64,
    pub reject: bool,
    /// The variance estimate was zero and the `z = 0` convention applied.
    pub degenerate: bool,
}

impl TestOutcome {
    const DEGENERATE: TestOutcome = TestOutcome {
        z: 0.0,
        reject: false,
        degenerate: true,
    };

    fn from_parts(numerator: f64, variance: f64, alpha: f64) -> Self {
        // also catches NaN
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(variance > 0.0) {
            return TestOutcome::DEGENERATE;
        }
        let z = numerator / variance.sqrt();
        TestOutcome {
            z,
            reject: decide(z, alpha),
            degenerate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("cannot test with an empty {0} arm")]
    EmptyArm(&'static str),
}

fn check_arms(counts: &TrialCounts) -> Result<(), InferenceError> {
    if counts.n0 == 0 {
        return Err(InferenceError::EmptyArm("control"));
    }
    if counts.n1 == 0 {
        return Err(InferenceError::EmptyArm("treatment"));
    }
    Ok(())
}

/// Wald statistic `Z₁ = (p̂₁ − p̂₀) / √(p̂₀q̂₀/n₀ + p̂₁q̂₁/n₁)`.
pub fn wald_z1(counts: &TrialCounts, alpha: f64) -> Result<TestOutcome, InferenceError> {
    check_arms(counts)?;
    let (n0, n1) = (counts.n0 as f64, counts.n1 as f64);
    let p0 = counts.s0 as f64 / n0;
    let p1 = counts.s1 as f64 / n1;
    let variance = p0 * (1.0 - p0) / n0 + p1 * (1.0 - p1) / n1;
    Ok(TestOutcome::from_parts(p1 - p0, variance, alpha))
}

/// Score statistic `Z₀ = (p̂₁ − p̂₀) / √(p̂q̂(1/n₀ + 1/n₁))` with the pooled
/// estimate `p̂ = (s₀ + s₁)/(n₀ + n₁)`.
///
/// `Z₀²` is Pearson's chi-squared statistic of the 2×2 table.
pub fn score_z0(counts: &TrialCounts, alpha: f64) -> Result<TestOutcome, InferenceError> {
    check_arms(counts)?;
    let (n0, n1) = (counts.n0 as f64, counts.n1 as f64);
    let p0 = counts.s0 as f64 / n0;
    let p1 = counts.s1 as f64 / n1;
    let pooled = counts.successes() as f64 / (n0 + n1);
    let variance = pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1);
    Ok(TestOutcome::from_parts(p1 - p0, variance, alpha))
}

/// Wald statistic on Agresti–Caffo estimates `p̂ᵃ = (s + 1)/(n + 2)`, with the
/// adjusted sample sizes `n + 2` in the variance. Never degenerate.
pub fn agresti_caffo_z(counts: &TrialCounts, alpha: f64) -> Result<TestOutcome, InferenceError> {
    check_arms(counts)?;
    let adjusted = TrialCounts::new(counts.n0 + 2, counts.s0 + 1, counts.n1 + 2, counts.s1 + 1);
    wald_z1(&adjusted, alpha)
}

/// Runs the test selected by `kind`.
pub fn run_test(kind: TestKind, counts: &TrialCounts, alpha: f64) -> Result<TestOutcome, InferenceError> {
    match kind {
        TestKind::Wald => wald_z1(counts, alpha),
        TestKind::Score => score_z0(counts, alpha),
        TestKind::AgrestiCaffoWald => agresti_caffo_z(counts, alpha),
    }
}

/// Two-sided critical value `Φ⁻¹(1 − α/2)`.
pub fn critical_value(alpha: f64) -> f64 {
    debug_assert!(alpha > 0.0 && alpha < 1.0);
    if alpha == 0.05 {
        return 1.959_963_984_540_054;
    }
    Normal::standard().inverse_cdf(1.0 - alpha / 2.0)
}

/// Rejects when `|z|` strictly exceeds the two-sided critical value.
pub fn decide(z: f64, alpha: f64) -> bool {
    z.abs() > critical_value(alpha)
}
