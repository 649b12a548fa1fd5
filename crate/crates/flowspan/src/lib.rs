//! Exact-arithmetic tools for minimizing makespan over flowtime-optimal
//! schedules on identical parallel machines (the FM problem).
//!
//! - [`instance`], [`schedule`] and [`rational`] hold the data model.
//! - [`algorithms`] builds LD, LI and LD0 schedules.
//! - [`oracle`] computes the exact FM optimum by branch and bound.
//! - [`lp`] is a small exact simplex solver with optimality certificates.
//! - [`caseanalysis`] turns a machine/rank shape into a finite family of LPs
//!   whose optima bound the worst LD ratio.
//! - [`search`] enumerates integer instances and hunts for ratio violations.

#![allow(clippy::result_large_err)]

pub mod algorithms;
pub mod caseanalysis;
pub mod error;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod par;
pub mod perm;
pub mod rational;
pub mod schedule;
pub mod search;

pub use error::{Error, Result};
pub use instance::{apply_property2, normalize_instance, Instance};
pub use rational::Rational;
pub use schedule::{is_flowtime_optimal, Profile, Schedule};

/// `(5m−2)/(4m−1)`, the conjectured worst-case LD ratio on `m` machines.
pub fn ld_bound(m: usize) -> Rational {
    let m = m as i64;
    Rational::frac(5 * m - 2, 4 * m - 1)
}

/// `(5m−4)/(4m−3)`, the worst-case LI ratio on `m` machines.
pub fn li_bound(m: usize) -> Rational {
    let m = m as i64;
    Rational::frac(5 * m - 4, 4 * m - 3)
}
