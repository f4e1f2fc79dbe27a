//! Achievable two-message schemes: terminal B sends `V1` (a function of `Y`
//! plus noise), terminal A answers with `V2` (depending on `X` and `V1`), and
//! B reproduces `X` from `(V1, V2, Y)`. Rates are `R1 = I(Y; V1 | X)` and
//! `R2 = I(X; V2 | Y, V1)`.
//!
//! The explicit erasure scheme sends `V1 = BSC(q)(Y)` and lets A erase `X`
//! unless it agrees with `V1`, erasing agreeing symbols with probability
//! `alpha`. Given `V1`, each branch is a one-message erasure problem on a
//! tilted source, so the rates have closed forms in the C functional.

use crate::erasure::{c2_functional, c_functional, eta_functional, h, one_minus_eta, DsbsParams};
use crate::error::{check_closed, check_open, Error, Result};
use crate::gain::SEARCH_FLOOR_EXPONENT;
use crate::info::{conditional_mutual_information, Bits, Channel, DistortionMatrix, JointPmf, JointTable, ERASURE};

/// Decoder table `(v1, v2, y) -> x_hat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeDecoder {
    v1: usize,
    v2: usize,
    y: usize,
    table: Vec<usize>,
}

impl SchemeDecoder {
    /// `table[(v1 * |V2| + v2) * |Y| + y]` is the reproduction.
    pub fn new(v1: usize, v2: usize, y: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != v1 * v2 * y {
            return Err(Error::Dimension(format!(
                "decoder over {v1}x{v2}x{y} needs {} entries, got {}",
                v1 * v2 * y,
                table.len()
            )));
        }
        Ok(Self { v1, v2, y, table })
    }

    pub fn get(&self, v1: usize, v2: usize, y: usize) -> usize {
        self.table[(v1 * self.v2 + v2) * self.y + y]
    }
}

/// `V1` is drawn from `p_{V1|Y}` and `V2` from `p_{V2|X,V1}` (rows indexed
/// by `x * |V1| + v1`), so the Markov chains `V1 - Y - X` and
/// `V2 - (X, V1) - Y` hold by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoMessageScheme {
    pub v1_given_y: Channel,
    pub v2_given_xv1: Channel,
    pub decoder: SchemeDecoder,
}

impl TwoMessageScheme {
    pub fn new(v1_given_y: Channel, v2_given_xv1: Channel, decoder: SchemeDecoder) -> Result<Self> {
        let v1 = v1_given_y.outputs();
        if !v2_given_xv1.inputs().is_multiple_of(v1) {
            return Err(Error::Dimension(format!(
                "p(V2|X,V1) has {} rows, not a multiple of |V1| = {v1}",
                v2_given_xv1.inputs()
            )));
        }
        if decoder.v1 != v1 || decoder.v2 != v2_given_xv1.outputs() || decoder.y != v1_given_y.inputs() {
            return Err(Error::Dimension("decoder alphabets do not match the channels".into()));
        }
        Ok(Self {
            v1_given_y,
            v2_given_xv1,
            decoder,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Params {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
}

impl Table1Params {
    pub fn new(p: f64, q: f64, alpha: f64) -> Result<Self> {
        check_open("p", p, 0.0, 1.0, "(0, 1)")?;
        check_open("q", q, 0.0, 1.0, "(0, 1)")?;
        check_closed("alpha", alpha, 0.0, 1.0, "[0, 1]")?;
        Ok(Self { p, q, alpha })
    }

    fn erasure_params(&self) -> DsbsParams {
        DsbsParams {
            p: self.p,
            q: self.q,
            alpha0e: self.alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoMessagePoint {
    pub r1: Bits,
    pub r2: Bits,
    pub distortion: f64,
    /// One-message rate over `R1 + R2`, when a one-message reference is known.
    pub sum_ratio: Option<f64>,
    /// `R1 / R2`, when `R2 > 0`.
    pub split_ratio: Option<f64>,
}

impl TwoMessagePoint {
    pub fn sum_rate(&self) -> Bits {
        self.r1 + self.r2
    }

    fn with_reference(mut self, rsum1: Option<Bits>) -> Self {
        let total = self.sum_rate();
        self.sum_ratio = rsum1.filter(|_| total > 0.0).map(|r| r / total);
        self.split_ratio = (self.r2 > 0.0).then(|| self.r1 / self.r2);
        self
    }
}

/// Rates and distortion of `scheme` on `p_xy`, computed from the joint over
/// `(X, Y, V1, V2)`. An infinite distortion is returned as `+inf`.
pub fn evaluate_scheme(
    p_xy: &JointPmf,
    scheme: &TwoMessageScheme,
    d: &DistortionMatrix,
    reference_rsum1: Option<Bits>,
) -> Result<TwoMessagePoint> {
    let (nx, ny) = (p_xy.rows(), p_xy.cols());
    let (nv1, nv2) = (scheme.v1_given_y.outputs(), scheme.v2_given_xv1.outputs());
    if scheme.v1_given_y.inputs() != ny {
        return Err(Error::Dimension(format!(
            "p(V1|Y) has {} inputs but |Y| = {ny}",
            scheme.v1_given_y.inputs()
        )));
    }
    if scheme.v2_given_xv1.inputs() != nx * nv1 {
        return Err(Error::Dimension(format!(
            "p(V2|X,V1) has {} rows but |X| * |V1| = {}",
            scheme.v2_given_xv1.inputs(),
            nx * nv1
        )));
    }
    if d.sources() != nx {
        return Err(Error::Dimension(format!(
            "distortion matrix has {} rows but |X| = {nx}",
            d.sources()
        )));
    }

    let mut probs = Vec::with_capacity(nx * ny * nv1 * nv2);
    let mut distortion = 0.0;
    for x in 0..nx {
        for y in 0..ny {
            for v1 in 0..nv1 {
                let m1 = p_xy.get(x, y) * scheme.v1_given_y.prob(y, v1);
                for v2 in 0..nv2 {
                    let m = m1 * scheme.v2_given_xv1.prob(x * nv1 + v1, v2);
                    probs.push(m);
                    if m > 0.0 {
                        let x_hat = scheme.decoder.get(v1, v2, y);
                        if x_hat >= d.reproductions() {
                            return Err(Error::Dimension(format!(
                                "decoder output {x_hat} outside the reproduction alphabet"
                            )));
                        }
                        distortion += m * d.get(x, x_hat);
                    }
                }
            }
        }
    }
    let joint = JointTable::new(vec![nx, ny, nv1, nv2], probs)?;
    let r1 = conditional_mutual_information(&joint, &[1], &[2], &[0])?;
    let r2 = conditional_mutual_information(&joint, &[0], &[3], &[1, 2])?;
    Ok(TwoMessagePoint {
        r1,
        r2,
        distortion,
        sum_ratio: None,
        split_ratio: None,
    }
    .with_reference(reference_rsum1))
}

/// The explicit erasure scheme: `p(V1|Y)` is BSC(`q`); `p(V2|X,V1)` over
/// `V2 in {0, e, 1}` is
///
/// | (x, v1) | 0         | e       | 1         |
/// |---------|-----------|---------|-----------|
/// | (0, 0)  | 1 - alpha | alpha   | 0         |
/// | (1, 0)  | 0         | 1       | 0         |
/// | (0, 1)  | 0         | 1       | 0         |
/// | (1, 1)  | 0         | alpha   | 1 - alpha |
///
/// and the decoder outputs `v2`.
pub fn table1_scheme(params: &Table1Params) -> TwoMessageScheme {
    let a = params.alpha;
    #[rustfmt::skip]
    let v2_rows = vec![
        1.0 - a, a,   0.0,     // x = 0, v1 = 0
        0.0,     1.0, 0.0,     // x = 0, v1 = 1
        0.0,     1.0, 0.0,     // x = 1, v1 = 0
        0.0,     a,   1.0 - a, // x = 1, v1 = 1
    ];
    let v1_given_y = Channel::bsc(params.q).expect("q validated");
    let v2_given_xv1 = Channel::new(4, 3, v2_rows).expect("rows sum to one");
    let table = (0..2)
        .flat_map(|_v1| (0..3).flat_map(|v2| std::iter::repeat_n(v2, 2)))
        .collect();
    let decoder = SchemeDecoder::new(2, 3, 2, table).expect("2x3x2 table");
    debug_assert_eq!(decoder.get(1, ERASURE, 0), ERASURE);
    TwoMessageScheme {
        v1_given_y,
        v2_given_xv1,
        decoder,
    }
}

/// Closed-form rates of the explicit scheme on a DSBS(`p`):
/// `R1 = h(p) - C2(p, q)`, `R2 = 2 h(p) - C(p, q, alpha, 1) - R1`,
/// `D = eta(p, q, alpha, 1)`, with the one-message reference `(1 - D) h(p)`.
pub fn table1_point(params: &Table1Params) -> TwoMessagePoint {
    let ep = params.erasure_params();
    let hp = h(params.p);
    let c2 = c2_functional(params.p, params.q).expect("validated");
    let c = c_functional(&ep, 1.0).expect("validated");
    let r1 = (hp - c2).max(0.0);
    let r2 = (2.0 * hp - c - r1).max(0.0);
    let distortion = eta_functional(&ep, 1.0).expect("validated");
    let rsum1 = one_minus_eta(&ep) * hp;
    TwoMessagePoint {
        r1,
        r2,
        distortion,
        sum_ratio: None,
        split_ratio: None,
    }
    .with_reference(Some(rsum1))
}

/// The same point computed by [`evaluate_scheme`] on the explicit joint.
pub fn table1_direct(params: &Table1Params) -> Result<TwoMessagePoint> {
    let p_xy = JointPmf::dsbs(params.p)?;
    let rsum1 = one_minus_eta(&params.erasure_params()) * h(params.p);
    evaluate_scheme(&p_xy, &table1_scheme(params), &DistortionMatrix::erasure(), Some(rsum1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyCheck {
    pub closed_form: TwoMessagePoint,
    pub direct: TwoMessagePoint,
    /// Largest absolute difference across `(R1, R2, D)`.
    pub max_deviation: f64,
}

impl ConsistencyCheck {
    pub fn agrees(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Compares [`table1_point`] with [`table1_direct`].
pub fn table1_cross_check(params: &Table1Params) -> Result<ConsistencyCheck> {
    let closed_form = table1_point(params);
    let direct = table1_direct(params)?;
    let max_deviation = [
        closed_form.r1 - direct.r1,
        closed_form.r2 - direct.r2,
        closed_form.distortion - direct.distortion,
    ]
    .iter()
    .fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ConsistencyCheck {
        closed_form,
        direct,
        max_deviation,
    })
}

/// `h(slope * p) / h(p)`, which tends to `slope` as `p -> 0`.
pub fn entropy_ratio_check(slope: f64, p: f64) -> Result<f64> {
    if !(slope > 0.0) || !slope.is_finite() {
        return Err(Error::domain("slope", slope, "(0, inf)"));
    }
    check_open("p", p, 0.0, 0.5, "(0, 1/2)")?;
    let sp = slope * p;
    if !(sp < 1.0) {
        return Err(Error::domain("slope * p", sp, "(0, 1)"));
    }
    Ok(h(sp) / h(p))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioWitness {
    pub params: Table1Params,
    pub point: TwoMessagePoint,
}

pub const DEFAULT_WITNESS_ALPHA: f64 = 0.5;

/// Explicit-scheme parameters with `R_sum,1 / (R1 + R2) > L` and `R1 / R2 < 1 / L`.
pub fn find_ratio_witness(l: f64) -> Result<RatioWitness> {
    find_ratio_witness_with(l, DEFAULT_WITNESS_ALPHA, None)
}

/// `q` defaults to `1 / (L + 3)`, so that `(1 - q) / q = L + 2 > L + 1`;
/// `p` then descends by decades and the first (largest) qualifying `p` wins.
pub fn find_ratio_witness_with(l: f64, alpha: f64, q: Option<f64>) -> Result<RatioWitness> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::domain("L", l, "(0, inf)"));
    }
    check_open("alpha", alpha, 0.0, 1.0, "(0, 1)")?;
    let q = q.unwrap_or(1.0 / (l + 3.0));
    check_open("q", q, 0.0, 1.0, "(0, 1)")?;

    let mut best_sum = f64::NEG_INFINITY;
    let mut best_split = f64::INFINITY;
    for k in 1..=SEARCH_FLOOR_EXPONENT {
        let params = Table1Params::new(10f64.powi(-k), q, alpha)?;
        let point = table1_point(&params);
        let (sum, split) = (
            point.sum_ratio.unwrap_or(f64::NEG_INFINITY),
            point.split_ratio.unwrap_or(f64::INFINITY),
        );
        best_sum = best_sum.max(sum);
        best_split = best_split.min(split);
        if sum > l && split < 1.0 / l {
            return Ok(RatioWitness { params, point });
        }
    }
    Err(Error::SearchExhausted(format!(
        "no p >= 1e-{SEARCH_FLOOR_EXPONENT} reaches L = {l} with q = {q}, alpha = {alpha} \
         (best sum ratio {best_sum:.6}, best split ratio {best_split:.6})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_rows() {
        let s = table1_scheme(&Table1Params::new(0.1, 0.2, 0.3).unwrap());
        assert_eq!(s.v2_given_xv1.row(0), &[0.7, 0.3, 0.0]);
        assert_eq!(s.v2_given_xv1.row(2), &[0.0, 1.0, 0.0]);
        assert_eq!(s.v2_given_xv1.row(1), &[0.0, 1.0, 0.0]);
        assert!((s.v2_given_xv1.row(3)[2] - 0.7).abs() < 1e-16);
        for v1 in 0..2 {
            for v2 in 0..3 {
                for y in 0..2 {
                    assert_eq!(s.decoder.get(v1, v2, y), v2);
                }
            }
        }
    }

    #[test]
    fn zero_alpha_reveals_agreeing_x() {
        let s = table1_scheme(&Table1Params::new(0.1, 0.2, 0.0).unwrap());
        assert_eq!(s.v2_given_xv1.row(0), &[1.0, 0.0, 0.0]);
        assert_eq!(s.v2_given_xv1.row(3), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn full_erasure_scheme() {
        let params = Table1Params::new(0.2, 0.3, 1.0).unwrap();
        let pt = table1_direct(&params).unwrap();
        assert!(pt.r2.abs() < 1e-15);
        assert!((pt.distortion - 1.0).abs() < 1e-15);
    }

    #[test]
    fn useless_first_message() {
        let pt = table1_direct(&Table1Params::new(0.2, 0.5, 0.4).unwrap()).unwrap();
        assert!(pt.r1.abs() < 1e-15);
        let closed = table1_point(&Table1Params::new(0.2, 0.5, 0.4).unwrap());
        assert!(closed.r1.abs() < 1e-15);
    }

    #[test]
    fn noiseless_first_message() {
        let params = Table1Params::new(0.2, 1e-9, 0.4).unwrap();
        let pt = table1_direct(&params).unwrap();
        assert!((pt.r1 - h(0.2)).abs() < 1e-6, "{}", pt.r1);
    }

    #[test]
    fn closed_form_matches_direct() {
        for (p, q, a) in [(0.1, 0.2, 0.5), (0.3, 0.05, 0.9), (1e-3, 0.4, 0.1)] {
            let check = table1_cross_check(&Table1Params::new(p, q, a).unwrap()).unwrap();
            assert!(check.agrees(1e-9), "{p} {q} {a}: {}", check.max_deviation);
        }
    }

    #[test]
    fn remark_ratio() {
        let pt = table1_point(&Table1Params::new(1e-200, 0.1, 0.5).unwrap());
        let ratio = pt.sum_ratio.unwrap();
        // 500-digit reference value 8.16914784539
        assert!((ratio - 8.169_147_845_39).abs() < 1e-8, "{ratio}");
        assert!(pt.split_ratio.unwrap() < 0.08);
    }

    #[test]
    fn entropy_ratio_examples() {
        assert_eq!(entropy_ratio_check(1.0, 0.3).unwrap(), 1.0);
        let r = entropy_ratio_check(2.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() / 2.0 < 0.05);
        assert!((r - 1.951_580_687_412_169_7).abs() < 1e-12);
        assert!(entropy_ratio_check(2.0, 0.6).is_err());
        assert!(entropy_ratio_check(3.0, 0.4).is_err());
        assert!(entropy_ratio_check(0.0, 0.1).is_err());
    }

    #[test]
    fn ratio_witnesses() {
        let w = find_ratio_witness(2.0).unwrap();
        assert!((w.params.q - 0.2).abs() < 1e-15);
        assert_eq!(w.params.p, 1e-6);
        let w = find_ratio_witness(5.0).unwrap();
        assert!(w.params.q <= 1.0 / 7.0);
        assert!(w.point.sum_ratio.unwrap() > 5.0 && w.point.split_ratio.unwrap() < 0.2);
        let w = find_ratio_witness_with(8.0, 0.5, Some(0.1)).unwrap();
        assert!(w.params.p <= 1e-150, "{}", w.params.p);
        assert!(matches!(
            find_ratio_witness_with(9.0, 0.5, Some(0.1)),
            Err(Error::SearchExhausted(_))
        ));
    }
}
