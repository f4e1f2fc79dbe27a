//! Certificates that two messages strictly beat one.
//!
//! The one-message rate reduction of the DSBS is compared with the average
//! of the rate reductions of the two tilted sources `BSC(p) * Bernoulli(q)`
//! and `BSC(p) * Bernoulli(1 - q)`, whose mixture is the DSBS. When the
//! average exceeds the value at the mixture, the rate reduction is not
//! concave in the Y-marginal, so the two-message rate reduction differs from
//! the one-message one and the two-message sum rate is strictly smaller.
//!
//! The average is bounded below by the C functional of a feasible (and
//! possibly suboptimal) erasure channel; validity is judged on that bound.

use crate::erasure::{c_functional, eta_functional, h, rho1_exact, BinaryJoint, DsbsParams};
use crate::error::{check_closed, check_open, Error, Result};
use crate::info::Bits;

/// Default absolute margin a certified gap must exceed.
pub const DEFAULT_MARGIN: Bits = 1e-9;

/// Default margin on `gap_lower / h(p)` used by the witness search.
pub const DEFAULT_RELATIVE_MARGIN: f64 = 0.01;

/// Smallest crossover probability the witness searches try.
pub const SEARCH_FLOOR_EXPONENT: i32 = 300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainCertificate {
    pub p: f64,
    pub q: f64,
    pub alpha0e: f64,
    /// `eta(p, q, alpha0e, 1)`.
    pub distortion: f64,
    /// Rate reduction at the mixed (DSBS) marginal, `(1 + D) h(p)`.
    pub lhs: Bits,
    /// `C(p, q, alpha0e, 1)`, a lower bound on the tilted average.
    pub rhs_lower: Bits,
    /// Average of the exact rate reductions of the two tilted sources.
    pub rhs_exact: Bits,
    pub gap_lower: Bits,
    pub gap_exact: Bits,
    pub margin: Bits,
}

impl GainCertificate {
    pub fn is_valid(&self) -> bool {
        self.gap_lower > self.margin
    }

    /// `gap_lower / h(p)`.
    pub fn relative_gap(&self) -> f64 {
        self.gap_lower / h(self.p)
    }
}

/// Builds the midpoint certificate at `D = eta(p, q, alpha0e, 1)` with the
/// default margin.
pub fn midpoint_violation(p: f64, q: f64, alpha0e: f64) -> Result<GainCertificate> {
    midpoint_violation_with_margin(p, q, alpha0e, DEFAULT_MARGIN)
}

pub fn midpoint_violation_with_margin(p: f64, q: f64, alpha0e: f64, margin: Bits) -> Result<GainCertificate> {
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    check_open("q", q, 0.0, 0.5, "(0, 1/2)")?;
    check_open("alpha0e", alpha0e, 0.0, 1.0, "(0, 1)")?;
    check_margin(margin)?;

    let params = DsbsParams::new(p, q, alpha0e)?;
    let distortion = eta_functional(&params, 1.0)?;
    let lhs = (1.0 + distortion) * h(p);
    let rhs_lower = c_functional(&params, 1.0)?;
    let tilted = rho1_exact(&BinaryJoint::from_bsc_bernoulli(p, q)?, distortion)?;
    let mirrored = rho1_exact(&BinaryJoint::from_bsc_bernoulli(p, 1.0 - q)?, distortion)?;
    let rhs_exact = 0.5 * (tilted + mirrored);

    Ok(GainCertificate {
        p,
        q,
        alpha0e,
        distortion,
        lhs,
        rhs_lower,
        rhs_exact,
        gap_lower: rhs_lower - lhs,
        gap_exact: rhs_exact - lhs,
        margin,
    })
}

fn check_margin(margin: f64) -> Result<()> {
    if margin >= 0.0 && margin.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("margin", margin, "[0, inf)"))
    }
}

/// Decade search `p = 1e-1, 1e-2, ..., 1e-300` for the largest `p` whose
/// certificate clears both `margin` and the relative margin.
pub fn find_gain_witness(q: f64, alpha0e: f64, margin: Bits) -> Result<GainCertificate> {
    find_gain_witness_with(q, alpha0e, margin, DEFAULT_RELATIVE_MARGIN)
}

pub fn find_gain_witness_with(q: f64, alpha0e: f64, margin: Bits, relative_margin: f64) -> Result<GainCertificate> {
    check_open("q", q, 0.0, 0.5, "(0, 1/2)")?;
    check_open("alpha0e", alpha0e, 0.0, 1.0, "(0, 1)")?;
    check_margin(margin)?;
    check_margin(relative_margin)?;

    let mut best_relative = f64::NEG_INFINITY;
    for k in 1..=SEARCH_FLOOR_EXPONENT {
        let p = 10f64.powi(-k);
        let cert = midpoint_violation_with_margin(p, q, alpha0e, margin)?;
        let rel = cert.relative_gap();
        best_relative = best_relative.max(rel);
        if cert.is_valid() && rel > relative_margin {
            return Ok(cert);
        }
    }
    Err(Error::SearchExhausted(format!(
        "no p >= 1e-{SEARCH_FLOOR_EXPONENT} clears margin {margin} with relative margin {relative_margin} \
         (best relative gap {best_relative:.6})"
    )))
}

/// Limit of `C(p, q, alpha0e, 1) / h(p) - (1 + D)` as `p -> 0`:
/// `(1 - 2q)(1 - alpha0e)`.
pub fn limit_gap(q: f64, alpha0e: f64) -> Result<f64> {
    check_closed("q", q, 0.0, 1.0, "[0, 1]")?;
    check_closed("alpha0e", alpha0e, 0.0, 1.0, "[0, 1]")?;
    Ok((1.0 - 2.0 * q) * (1.0 - alpha0e))
}
