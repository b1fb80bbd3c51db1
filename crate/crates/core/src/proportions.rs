//! Target allocation proportions.
//!
//! A proportion `ρ` is the fraction of patients assigned to treatment, so
//! `n₁ = ρn` and `n₀ = (1 − ρ)n`. The two Wald-test proportions are the
//! classical closed forms. The score-test proportions come from the pooled
//! variance of the score statistic written as a function of `ρ` with the
//! current estimates plugged in:
//!
//! ```text
//! n·Var(ρ) = p₀/ρ + p₁/(1−ρ) − (1−ρ)p₀²/ρ − 2p₀p₁ − ρp₁²/(1−ρ)
//!          = p₀q₀/ρ + p₁q₁/(1−ρ) + (p₀ − p₁)²
//! ```
//!
//! Minimizing it gives the Neyman-like proportion in closed form. The
//! RSHIR-like proportion minimizes expected failures times that variance and
//! has no closed form; [`rho_rshir_score`] finds it numerically.

use crate::trial::{Fallback, Rule, TrialCounts};

/// Plug-in success probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimates {
    pub p0_hat: f64,
    pub p1_hat: f64,
}

impl PointEstimates {
    pub fn new(p0_hat: f64, p1_hat: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p0_hat) && (0.0..=1.0).contains(&p1_hat));
        PointEstimates { p0_hat, p1_hat }
    }

    /// Maximum likelihood estimates from `counts`; `None` until both arms have
    /// at least one patient.
    pub fn from_counts(counts: &TrialCounts) -> Option<Self> {
        Some(PointEstimates::new(counts.p0_hat()?, counts.p1_hat()?))
    }

    pub fn q0_hat(&self) -> f64 {
        1.0 - self.p0_hat
    }

    pub fn q1_hat(&self) -> f64 {
        1.0 - self.p1_hat
    }

    /// Estimated Bernoulli variance of control, `p̂₀q̂₀`.
    pub fn var0(&self) -> f64 {
        self.p0_hat * self.q0_hat()
    }

    /// Estimated Bernoulli variance of treatment, `p̂₁q̂₁`.
    pub fn var1(&self) -> f64 {
        self.p1_hat * self.q1_hat()
    }

    /// The same estimates with arm labels exchanged.
    pub fn swapped(&self) -> Self {
        PointEstimates {
            p0_hat: self.p1_hat,
            p1_hat: self.p0_hat,
        }
    }
}

/// Target proportion of patients on treatment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetProportion {
    pub rho: f64,
    /// Set when the formula was undefined or a fallback replaced it; `rho`
    /// is then 0.5.
    pub degenerate: bool,
}

impl TargetProportion {
    pub const EQUAL: TargetProportion = TargetProportion {
        rho: 0.5,
        degenerate: false,
    };

    const DEGENERATE: TargetProportion = TargetProportion {
        rho: 0.5,
        degenerate: true,
    };

    fn value(rho: f64) -> Self {
        TargetProportion {
            rho,
            degenerate: false,
        }
    }
}

/// Neyman allocation for the Wald test, `√(p₁q₁) / (√(p₀q₀) + √(p₁q₁))`.
///
/// Degenerate (0.5) when both estimated variances are zero.
pub fn rho_neyman_wald(est: PointEstimates) -> TargetProportion {
    let (sd0, sd1) = (est.var0().sqrt(), est.var1().sqrt());
    if sd0 + sd1 == 0.0 {
        return TargetProportion::DEGENERATE;
    }
    TargetProportion::value(sd1 / (sd0 + sd1))
}

/// RSHIR allocation for the Wald test, `√p₁ / (√p₀ + √p₁)`.
///
/// Degenerate (0.5) when both estimates are zero.
pub fn rho_rshir_wald(est: PointEstimates) -> TargetProportion {
    let (r0, r1) = (est.p0_hat.sqrt(), est.p1_hat.sqrt());
    if r0 + r1 == 0.0 {
        return TargetProportion::DEGENERATE;
    }
    TargetProportion::value(r1 / (r0 + r1))
}

/// Neyman-like allocation for the score test,
/// `√(p₀q₀) / (√(p₀q₀) + √(p₁q₁))`.
///
/// Minimizes [`score_variance`] and is exactly the complement of
/// [`rho_neyman_wald`]: the pooled variance charges control's Bernoulli
/// variance to `1/n₁` and treatment's to `1/n₀`.
pub fn rho_neyman_score(est: PointEstimates) -> TargetProportion {
    let (sd0, sd1) = (est.var0().sqrt(), est.var1().sqrt());
    if sd0 + sd1 == 0.0 {
        return TargetProportion::DEGENERATE;
    }
    TargetProportion::value(sd0 / (sd0 + sd1))
}

/// `n` times the estimated variance of the score statistic's numerator when a
/// fraction `rho` of patients is on treatment, in the expanded five-term form.
pub fn score_variance(est: PointEstimates, rho: f64) -> f64 {
    let (p0, p1) = (est.p0_hat, est.p1_hat);
    let one_minus = 1.0 - rho;
    p0 / rho + p1 / one_minus - one_minus * p0 * p0 / rho - 2.0 * p0 * p1 - rho * p1 * p1 / one_minus
}

/// [`score_variance`] in its pooled form `n·p̂q̂ / (n₀n₁)` with the pooled
/// estimate `p̂ = (1 − ρ)p̂₀ + ρp̂₁`.
pub fn score_variance_pooled(est: PointEstimates, rho: f64) -> f64 {
    let pooled = (1.0 - rho) * est.p0_hat + rho * est.p1_hat;
    pooled * (1.0 - pooled) / (rho * (1.0 - rho))
}

/// Objective minimized by the RSHIR-like proportion: expected failure
/// fraction times the n-scaled score variance.
pub fn rshir_score_objective(est: PointEstimates, rho: f64) -> f64 {
    let failures = (1.0 - rho) * est.q0_hat() + rho * est.q1_hat();
    failures * score_variance(est, rho)
}

/// Lower edge of the search interval for [`rho_rshir_score`]; the upper edge
/// is `1 − RHO_SEARCH_EPS`.
pub const RHO_SEARCH_EPS: f64 = 1e-6;

/// Default convergence tolerance for [`rho_rshir_score`].
pub const RHO_SEARCH_TOL: f64 = 1e-8;

const SCAN_POINTS: usize = 129;

/// RSHIR-like allocation for the score test: the global minimizer of
/// [`rshir_score_objective`] over `[ε, 1 − ε]`.
///
/// A uniform scan brackets the best grid point, then golden-section search
/// narrows the bracket to width `tol`. The objective diverges at both ends
/// whenever both estimated variances are positive, so the minimizer is
/// interior in that case.
///
/// Degenerate (0.5) when `p̂₀ = p̂₁` with zero variance, where the objective
/// is identically zero.
pub fn rho_rshir_score(est: PointEstimates, tol: f64) -> TargetProportion {
    debug_assert!(tol > 0.0);
    if est.p0_hat == est.p1_hat && est.var0() == 0.0 {
        return TargetProportion::DEGENERATE;
    }
    let objective = |rho: f64| rshir_score_objective(est, rho);
    let lo = RHO_SEARCH_EPS;
    let hi = 1.0 - RHO_SEARCH_EPS;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let at = |k: usize| if k == SCAN_POINTS - 1 { hi } else { lo + step * k as f64 };

    let mut best = 0;
    let mut best_value = f64::INFINITY;
    for k in 0..SCAN_POINTS {
        let value = objective(at(k));
        if value < best_value {
            best = k;
            best_value = value;
        }
    }
    let a = at(best.saturating_sub(1));
    let b = at((best + 1).min(SCAN_POINTS - 1));
    let (rho, value) = golden_section(objective, a, b, tol);
    if value <= best_value {
        TargetProportion::value(rho)
    } else {
        TargetProportion::value(at(best))
    }
}

/// Minimizes `f` on `[a, b]` by golden-section search until the bracket is
/// narrower than `tol`. Returns the best point visited and its value.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(c, fc), (d, fd), (mid, f(mid))]
        .into_iter()
        .fold((mid, f64::INFINITY), |best, cand| if cand.1 < best.1 { cand } else { best })
}

/// Brute-force argmin of [`rshir_score_objective`] over the grid
/// `{step, 2·step, …}` inside `(0, 1)`.
///
/// Independent of the bracketing search; tests use it as the reference for
/// [`rho_rshir_score`]. Ties resolve to the grid point closest to 0.5.
pub fn oracle_rho_rshir_score(est: PointEstimates, step: f64) -> f64 {
    assert!(step > 0.0 && step <= 0.01, "grid step must lie in (0, 0.01]");
    let points = (1.0 / step).round() as usize;
    let mut best_rho: f64 = 0.5;
    let mut best_value = f64::INFINITY;
    for k in 1..points {
        let rho = k as f64 * step;
        let value = rshir_score_objective(est, rho);
        let closer = (rho - 0.5).abs() < (best_rho - 0.5).abs();
        if value < best_value || (value == best_value && closer) {
            best_rho = rho;
            best_value = value;
        }
    }
    best_rho
}

/// Target proportion of `rule` at the current estimates.
///
/// Complete randomization always targets 0.5. Under
/// [`Fallback::EqualOnZeroVariance`] any zero estimated arm variance gives a
/// degenerate 0.5; otherwise the formula value is returned, clamped to
/// `[0, 1]`.
pub fn target_for(rule: Rule, est: PointEstimates, fallback: Fallback) -> TargetProportion {
    if rule == Rule::Cr {
        return TargetProportion::EQUAL;
    }
    if fallback == Fallback::EqualOnZeroVariance && (est.var0() == 0.0 || est.var1() == 0.0) {
        return TargetProportion::DEGENERATE;
    }
    let target = match rule {
        Rule::Cr => unreachable!(),
        Rule::NeymanWald => rho_neyman_wald(est),
        Rule::RshirWald => rho_rshir_wald(est),
        Rule::NeymanScore => rho_neyman_score(est),
        Rule::RshirScore => rho_rshir_score(est, RHO_SEARCH_TOL),
    };
    TargetProportion {
        rho: target.rho.clamp(0.0, 1.0),
        ..target
    }
}
