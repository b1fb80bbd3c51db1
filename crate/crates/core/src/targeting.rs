//! Turning an estimated target proportion into the next patient's
//! probability of receiving treatment.

use crate::proportions::TargetProportion;

/// Probability that the next patient is assigned to treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignmentProbability {
    pub p_treat: f64,
}

/// Sequential maximum likelihood procedure: the estimated target is used
/// directly as the randomization probability.
pub fn smle_probability(target: TargetProportion) -> AssignmentProbability {
    AssignmentProbability { p_treat: target.rho }
}

/// ERADE assignment probability after `j` allocated patients, `n1_so_far` of
/// them on treatment.
///
/// Over-allocated treatment (`n₁/j > ρ̂`) gets `α·ρ̂`, under-allocated gets
/// `1 − α(1 − ρ̂)`, and an exact match gets `ρ̂`. The comparison is done as
/// `n₁` against `ρ̂·j` with a relative band of 1e-12 for the equality case.
pub fn erade_probability(
    target: TargetProportion,
    n1_so_far: usize,
    j: usize,
    erade_alpha: f64,
) -> AssignmentProbability {
    debug_assert!(j >= 1 && n1_so_far <= j);
    let rho = target.rho;
    let gap = n1_so_far as f64 - rho * j as f64;
    let band = 1e-12 * j as f64;
    let p_treat = if gap > band {
        erade_alpha * rho
    } else if gap < -band {
        1.0 - erade_alpha * (1.0 - rho)
    } else {
        rho
    };
    AssignmentProbability { p_treat }
}
