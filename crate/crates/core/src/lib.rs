//! Monte Carlo simulation of two-arm, binary-outcome response-adaptive
//! randomization designs.
//!
//! * [`trial`] — configuration, counts, results and the random-number
//!   contract;
//! * [`proportions`] — target allocation proportions;
//! * [`targeting`] — SMLE and ERADE assignment probabilities;
//! * [`inference`] — Wald, score and Agresti–Caffo tests;
//! * [`engine`] — trial simulation and Monte Carlo summaries;
//! * [`cli`] — run files, sweeps and reproduction presets behind the `rar`
//!   binary.
//!
//! The guide in `book/` walks through each part; its code listings run as
//! doctests of this crate.

pub mod cli;
pub mod engine;
pub mod inference;
pub mod proportions;
pub mod targeting;
pub mod trial;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/proportions.md")]
    mod proportions {}
    #[doc = include_str!("../../../book/src/targeting.md")]
    mod targeting {}
    #[doc = include_str!("../../../book/src/inference.md")]
    mod inference {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
