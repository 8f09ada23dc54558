//! Numerical laboratory for weighted exponential (Weyl) sums: evaluation
//! kernels, exact moment integrals, representation counting, major-arc
//! approximations, discrepancy, and Cantor-set dimension machinery.

pub mod arc;
pub mod cantor;
pub mod dims;
pub mod disc;
pub mod error;
pub mod measure;
pub mod modone;
pub mod moment;
pub mod panel;
pub mod phase;
pub mod record;
pub mod repcount;
pub mod rng;
pub mod sums;
pub mod weights;

pub use error::{LabError, Result};

pub type Complex64 = num_complex::Complex<f64>;

use std::f64::consts::TAU;

/// `e(theta) = exp(2 pi i theta)`.
#[inline]
pub fn e(theta: f64) -> Complex64 {
    let (s, c) = (TAU * theta).sin_cos();
    Complex64::new(c, s)
}

/// Default kernel work budget in pair-evaluations; overridable with the
/// `WEYL_LAB_BUDGET` environment variable.
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// Effective work budget: `WEYL_LAB_BUDGET` if set and parseable, else the
/// default.
pub fn work_budget() -> u128 {
    std::env::var("WEYL_LAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Checks `needed` units of kernel work against the budget.
pub fn check_budget(needed: u128) -> Result<()> {
    let budget = work_budget();
    if needed > budget {
        Err(LabError::Budget { needed, budget })
    } else {
        Ok(())
    }
}
