//! Universal constants and the tolerance contract.

/// Sharp anti-concentration constant for Bernoulli sums: for a sum with
/// variance `v > 0`, the pmf peak is at most `ETA_BCV / sqrt(v)`.
pub const ETA_BCV: f64 = 0.4688223555;

/// Coefficient of the lower bound `TV >= PHI / 12` for dominating pairs.
pub const TV_LOWER_COEFF: f64 = 1.0 / 12.0;

/// Smooth-envelope constant `sqrt(5/4 + ETA_BCV^2)`, approximately 1.2123507747.
#[inline]
pub fn c_bcv() -> f64 {
    libm::sqrt(1.25 + ETA_BCV * ETA_BCV)
}

/// Certified homogenization constant `1 / (48 * c_bcv())`, approximately 0.017.
#[inline]
pub fn homog_coeff() -> f64 {
    1.0 / (48.0 * c_bcv())
}

/// Bundle of the universal constants, convenient for reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub eta_bcv: f64,
    pub c_bcv: f64,
    pub lower_c: f64,
    pub homog_c: f64,
}

impl Constants {
    pub fn new() -> Self {
        Self {
            eta_bcv: ETA_BCV,
            c_bcv: c_bcv(),
            lower_c: TV_LOWER_COEFF,
            homog_c: homog_coeff(),
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::new()
    }
}

/// Tolerances used across the crate. These are the contract: inequality
/// certifications use one-sided slack `SLACK`, oracle agreement uses
/// `ORACLE`, and shape scans use `SHAPE`.
pub mod tol {
    /// One-sided slack for every certified inequality.
    pub const SLACK: f64 = 1e-9;
    /// Agreement with exact enumeration oracles and pointwise mass checks.
    pub const ORACLE: f64 = 1e-12;
    /// Comparison slack in unimodality / log-concavity scans.
    pub const SHAPE: f64 = 1e-12;
    /// Pmf entries in `[-MASS_CLAMP, 0)` are rounding noise and clamp to 0;
    /// anything below is a construction error.
    pub const MASS_CLAMP: f64 = 1e-15;
    /// Total pmf mass must be within this of 1.
    pub const MASS_TOTAL: f64 = 1e-12;
    /// Pointwise nonnegativity slack for survival-difference profiles.
    pub const G_NONNEG: f64 = 1e-12;
    /// Agreement between an analytic derivative and central differences.
    pub const DERIVATIVE: f64 = 1e-6;
    /// Central-difference step for derivative checks.
    pub const FD_STEP: f64 = 1e-5;
    /// Quadrature reconstruction agreement at exact node counts.
    pub const QUADRATURE: f64 = 1e-10;
    /// Drift allowed when the parameter order is permuted.
    pub const PERMUTATION: f64 = 1e-13;
    /// Trial-deletion kernel agreement with the shrunk binomial.
    pub const KERNEL: f64 = 1e-13;
    /// Threshold on second differences witnessing non-affinity.
    pub const AFFINITY: f64 = 1e-6;
}
