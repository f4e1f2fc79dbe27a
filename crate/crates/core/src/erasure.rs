//! Exact one-message rate reduction for binary sources under the binary
//! erasure distortion.
//!
//! For a full-support binary joint the optimal test channel only ever maps
//! `x` to `x` or to the erasure symbol, so the optimization collapses to two
//! erasure probabilities `(alpha0e, alpha1e)`: maximize `psi` subject to
//! `phi <= D`. `psi` is concave and nondecreasing in each erasure probability,
//! so the constraint binds and the maximum lies on the segment `phi = D`,
//! where a golden-section search finds it.

use crate::error::{check_closed, check_open, Error, Result};
use crate::info::{conditional_entropy, scaled_binary_entropy, Bits, JointPmf, PMF_TOLERANCE};
use crate::search::golden_section_max;

/// Abscissa tolerance of the boundary search.
pub const ALPHA_TOLERANCE: f64 = 1e-12;

/// Full-support joint pmf of two bits, `x` indexing rows and `y` columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryJoint {
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
}

impl BinaryJoint {
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let entries = [p00, p01, p10, p11];
        for (i, v) in entries.iter().enumerate() {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(Error::pmf(
                    "binary joint",
                    format!("entry {i} = {v}; all four entries must be positive"),
                ));
            }
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > PMF_TOLERANCE {
            return Err(Error::pmf(
                "binary joint",
                format!("entries sum to {total}, expected 1"),
            ));
        }
        Ok(Self { p00, p01, p10, p11 })
    }

    /// Doubly symmetric binary source: `p00 = p11 = (1 - p) / 2`, `p01 = p10 = p / 2`.
    pub fn dsbs(p: f64) -> Result<Self> {
        check_open("p", p, 0.0, 1.0, "(0, 1)")?;
        let (same, diff) = ((1.0 - p) / 2.0, p / 2.0);
        Self::new(same, diff, diff, same)
    }

    /// `X` is `Y` passed through a BSC(`p`), with `Y ~ Bernoulli(q)`. Entries
    /// are formed from `(p, q)` directly so they stay exact for tiny `p`.
    pub fn from_bsc_bernoulli(p: f64, q: f64) -> Result<Self> {
        check_open("p", p, 0.0, 1.0, "(0, 1)")?;
        check_open("q", q, 0.0, 1.0, "(0, 1)")?;
        let (pb, qb) = (1.0 - p, 1.0 - q);
        Self::new(pb * qb, p * q, p * qb, pb * q)
    }

    pub fn from_joint(joint: &JointPmf) -> Result<Self> {
        if joint.rows() != 2 || joint.cols() != 2 {
            return Err(Error::Dimension(format!(
                "binary joint needs a 2x2 table, got {}x{}",
                joint.rows(),
                joint.cols()
            )));
        }
        Self::new(joint.get(0, 0), joint.get(0, 1), joint.get(1, 0), joint.get(1, 1))
    }

    pub fn to_joint(&self) -> JointPmf {
        JointPmf::new(2, 2, vec![self.p00, self.p01, self.p10, self.p11]).expect("validated entries")
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn px0(&self) -> f64 {
        self.p00 + self.p01
    }

    pub fn px1(&self) -> f64 {
        self.p10 + self.p11
    }

    /// `H(X|Y) + H(Y|X)`: the two-way lossless sum rate.
    pub fn lossless_sum_rate(&self) -> Bits {
        let j = self.to_joint();
        conditional_entropy(&j) + conditional_entropy(&j.transpose())
    }
}

/// Erasure probabilities of the optimal test channel: `x = 0` is erased
/// with probability `alpha0e`, `x = 1` with probability `alpha1e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureAlphaPair {
    pub alpha0e: f64,
    pub alpha1e: f64,
}

impl ErasureAlphaPair {
    pub fn new(alpha0e: f64, alpha1e: f64) -> Result<Self> {
        check_closed("alpha0e", alpha0e, 0.0, 1.0, "[0, 1]")?;
        check_closed("alpha1e", alpha1e, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { alpha0e, alpha1e })
    }

    pub fn swapped(self) -> Self {
        Self {
            alpha0e: self.alpha1e,
            alpha1e: self.alpha0e,
        }
    }
}

/// Crossover `p`, Y-marginal tilt `q` and erasure probability `alpha0e` of
/// the asymmetric sources `BSC(p) * Bernoulli(q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsbsParams {
    pub p: f64,
    pub q: f64,
    pub alpha0e: f64,
}

impl DsbsParams {
    pub fn new(p: f64, q: f64, alpha0e: f64) -> Result<Self> {
        check_open("p", p, 0.0, 1.0, "(0, 1)")?;
        check_open("q", q, 0.0, 1.0, "(0, 1)")?;
        check_closed("alpha0e", alpha0e, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { p, q, alpha0e })
    }

    /// The same source with `q` replaced by `1 - q`.
    pub fn mirrored(self) -> Self {
        Self {
            q: 1.0 - self.q,
            ..self
        }
    }
}

/// `H(X|Y,U) + H(Y|X)` for the erasure test channel with parameters `alphas`.
pub fn psi(pxy: &BinaryJoint, alphas: ErasureAlphaPair) -> Bits {
    let ErasureAlphaPair {
        alpha0e: a0,
        alpha1e: a1,
    } = alphas;
    let BinaryJoint { p00, p01, p10, p11 } = *pxy;
    scaled_binary_entropy(p00 * a0, p10 * a1)
        + scaled_binary_entropy(p01 * a0, p11 * a1)
        + scaled_binary_entropy(p00, p01)
        + scaled_binary_entropy(p11, p10)
}

/// Expected erasure distortion `p_X(0) alpha0e + p_X(1) alpha1e`.
pub fn phi(pxy: &BinaryJoint, alphas: ErasureAlphaPair) -> f64 {
    pxy.px0() * alphas.alpha0e + pxy.px1() * alphas.alpha1e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rho1Method {
    /// `D >= 1`: the all-erase corner is feasible.
    Unconstrained,
    /// Golden-section search along `phi = D`.
    Boundary,
    /// Two-dimensional grid search with local refinement.
    GridFallback,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rho1Solution {
    pub value: Bits,
    pub alphas: ErasureAlphaPair,
    pub method: Rho1Method,
}

/// Exact one-message rate reduction of a full-support binary joint under the
/// erasure distortion at level `d`.
pub fn rho1_exact(pxy: &BinaryJoint, d: f64) -> Result<Bits> {
    rho1_exact_solution(pxy, d).map(|s| s.value)
}

pub fn rho1_exact_solution(pxy: &BinaryJoint, d: f64) -> Result<Rho1Solution> {
    if !(d >= 0.0) {
        return Err(Error::domain("D", d, "[0, inf)"));
    }
    let corner = ErasureAlphaPair {
        alpha0e: 1.0,
        alpha1e: 1.0,
    };
    let corner_value = psi(pxy, corner);
    if d >= 1.0 {
        return Ok(Rho1Solution {
            value: corner_value,
            alphas: corner,
            method: Rho1Method::Unconstrained,
        });
    }

    let (w0, w1) = (pxy.px0(), pxy.px1());
    let on_boundary = |a0: f64| ErasureAlphaPair {
        alpha0e: a0,
        alpha1e: ((d - w0 * a0) / w1).clamp(0.0, 1.0),
    };
    let lo = ((d - w1) / w0).clamp(0.0, 1.0);
    let hi = (d / w0).clamp(0.0, 1.0);
    let objective = |a0: f64| psi(pxy, on_boundary(a0));
    let (best_a0, best) = golden_section_max(objective, lo.min(hi), hi, ALPHA_TOLERANCE);

    // The all-erase corner dominates every feasible point when psi is
    // nondecreasing in each alpha; otherwise the boundary restriction is unsafe.
    let slack = 1e-12 * corner_value.abs();
    let monotone = [objective(lo), objective(hi), best]
        .iter()
        .all(|&v| v <= corner_value + slack);
    if monotone {
        return Ok(Rho1Solution {
            value: best,
            alphas: on_boundary(best_a0),
            method: Rho1Method::Boundary,
        });
    }

    let (alphas, value) = maximize_under_budget(|a| psi(pxy, a), w0, w1, d);
    Ok(Rho1Solution {
        value: value.max(best),
        alphas: if value >= best { alphas } else { on_boundary(best_a0) },
        method: Rho1Method::GridFallback,
    })
}

/// Maximizes `f` over `[0,1]^2 ∩ {w0 a0 + w1 a1 <= budget}` by a 201x201 grid
/// followed by a shrinking pattern search.
pub(crate) fn maximize_under_budget<F>(f: F, w0: f64, w1: f64, budget: f64) -> (ErasureAlphaPair, f64)
where
    F: Fn(ErasureAlphaPair) -> f64,
{
    const STEPS: usize = 200;
    let feasible =
        |a0: f64, a1: f64| (0.0..=1.0).contains(&a0) && (0.0..=1.0).contains(&a1) && w0 * a0 + w1 * a1 <= budget;
    let eval = |a0: f64, a1: f64| {
        f(ErasureAlphaPair {
            alpha0e: a0,
            alpha1e: a1,
        })
    };

    let mut best = ((0.0, 0.0), eval(0.0, 0.0));
    for i in 0..=STEPS {
        for j in 0..=STEPS {
            let (a0, a1) = (i as f64 / STEPS as f64, j as f64 / STEPS as f64);
            if feasible(a0, a1) {
                let v = eval(a0, a1);
                if v > best.1 {
                    best = ((a0, a1), v);
                }
            }
        }
    }

    let mut step = 1.0 / STEPS as f64;
    while step > ALPHA_TOLERANCE {
        let mut moved = false;
        let ((c0, c1), _) = best;
        for (dx, dy) in [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
        ] {
            let (a0, a1) = (c0 + dx * step, c1 + dy * step);
            if feasible(a0, a1) {
                let v = eval(a0, a1);
                if v > best.1 {
                    best = ((a0, a1), v);
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    let ((a0, a1), v) = best;
    (
        ErasureAlphaPair {
            alpha0e: a0,
            alpha1e: a1,
        },
        v,
    )
}

/// `psi` evaluated on `BSC(p) * Bernoulli(q)` at `(alpha0e, alpha1e)`.
pub fn c_functional(params: &DsbsParams, alpha1e: f64) -> Result<Bits> {
    check_closed("alpha1e", alpha1e, 0.0, 1.0, "[0, 1]")?;
    let DsbsParams { p, q, alpha0e: a0 } = *params;
    let (pb, qb) = (1.0 - p, 1.0 - q);
    Ok(qb * scaled_binary_entropy(pb * a0, p * alpha1e)
        + q * scaled_binary_entropy(p * a0, pb * alpha1e)
        + c2_terms(p, q))
}

/// The last two terms of the C functional: `H(Y|X)` under `BSC(p) * Bernoulli(q)`.
pub fn c2_functional(p: f64, q: f64) -> Result<Bits> {
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    check_open("q", q, 0.0, 1.0, "(0, 1)")?;
    Ok(c2_terms(p, q))
}

fn c2_terms(p: f64, q: f64) -> Bits {
    let (pb, qb) = (1.0 - p, 1.0 - q);
    scaled_binary_entropy(pb * qb, p * q) + scaled_binary_entropy(pb * q, p * qb)
}

/// `phi` evaluated on `BSC(p) * Bernoulli(q)`.
pub fn eta_functional(params: &DsbsParams, alpha1e: f64) -> Result<f64> {
    check_closed("alpha1e", alpha1e, 0.0, 1.0, "[0, 1]")?;
    let DsbsParams { p, q, alpha0e } = *params;
    let (same, cross) = eta_weights(p, q);
    Ok(same * alpha0e + cross * alpha1e)
}

/// `1 - eta(p, q, alpha0e, 1)`, computed without cancellation.
pub fn one_minus_eta(params: &DsbsParams) -> f64 {
    eta_weights(params.p, params.q).0 * (1.0 - params.alpha0e)
}

/// `(p_X(0), p_X(1))` of `BSC(p) * Bernoulli(q)`.
fn eta_weights(p: f64, q: f64) -> (f64, f64) {
    let (pb, qb) = (1.0 - p, 1.0 - q);
    (pb * qb + p * q, pb * q + p * qb)
}

/// `h(p)` for `p` in (0, 1).
pub(crate) fn h(p: f64) -> Bits {
    scaled_binary_entropy(p, 1.0 - p)
}

/// Closed-form rate reduction of a DSBS(`p`) under erasure distortion, `(1 + D) h(p)`.
pub fn rho1_dsbs(p: f64, d: f64) -> Result<Bits> {
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    check_closed("D", d, 0.0, 1.0, "[0, 1]")?;
    Ok((1.0 + d) * h(p))
}

/// One-message (Wyner-Ziv) rate of a DSBS(`p`) under erasure distortion, `(1 - D) h(p)`.
pub fn rsum1_dsbs(p: f64, d: f64) -> Result<Bits> {
    check_open("p", p, 0.0, 1.0, "(0, 1)")?;
    check_closed("D", d, 0.0, 1.0, "[0, 1]")?;
    Ok((1.0 - d) * h(p))
}
