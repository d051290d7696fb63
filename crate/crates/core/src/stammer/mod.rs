//! Stammering repetition structure: `U V^w` prefix witnesses, the conditions
//! built from them, an eventual-periodicity scan, and the verdict rules.

pub mod condition;
pub mod detect;
pub mod periodicity;
pub mod verdict;

pub use condition::{
    condition_star, condition_star_star, condition_star_star_with, condition_star_with,
    default_min_scale, ConditionReport, ExponentPair, ScanParams, DEFAULT_SCALES,
};
pub use detect::{continuant_consequence, detect_repetitions, naive_repetitions, Witness};
pub use periodicity::{periodicity_scan, Periodicity};
pub use verdict::{criterion_verdict, CriterionVerdict, Rule};
