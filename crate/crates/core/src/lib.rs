//! Stammering continued fractions.
//!
//! Generators for the classical families of stammering partial-quotient
//! sequences (Davison, Rudin-Shapiro, Baum-Sweet, paperfolding, perturbed
//! symmetries, squared-block concatenations), exact continuant arithmetic,
//! a `U V^w` repetition detector, and the verdict rules that turn repetition
//! evidence plus convergent growth into a transcendence-criterion report.

pub mod cf;
pub mod error;
pub mod family;
pub mod generators;
pub mod matgrowth;
pub mod report;
pub mod stammer;
pub mod suites;
pub mod words;

pub use error::{Error, Result};
