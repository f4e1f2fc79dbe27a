//! What each subcommand reads and computes.

use std::collections::BTreeMap;

use super::params::Lookup;
use crate::erasure::{
    c_functional, eta_functional, h, one_minus_eta, rho1_dsbs, rho1_exact_solution, BinaryJoint, DsbsParams, Rho1Method,
};
use crate::error::{Error, Result};
use crate::gain::{
    find_gain_witness, limit_gap, midpoint_violation, midpoint_violation_with_margin, GainCertificate, DEFAULT_MARGIN,
};
use crate::info::{DistortionMatrix, JointPmf};
use crate::io::ArrayDocument;
use crate::two_message::{
    entropy_ratio_check, find_ratio_witness_with, table1_cross_check, table1_point, Table1Params, TwoMessagePoint,
    DEFAULT_WITNESS_ALPHA,
};
use crate::wyner_ziv::{wz_rate_oracle, GridSpec};

pub const DEFAULT_GRID_RESOLUTION: u32 = 64;
pub const DEFAULT_REFINE_ROUNDS: u32 = 2;
pub const DEFAULT_SLOPE: f64 = 2.0;

/// Absolute agreement required between closed-form and direct scheme rates.
pub const CONSISTENCY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Command {
    WzRate,
    Rho1,
    GainDetect,
    GainSearch,
    TwoMsg,
    RatioSearch,
    EntropyRatio,
    Sweep,
    ReproducePaper,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::WzRate,
        Command::Rho1,
        Command::GainDetect,
        Command::GainSearch,
        Command::TwoMsg,
        Command::RatioSearch,
        Command::EntropyRatio,
        Command::Sweep,
        Command::ReproducePaper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::WzRate => "wz-rate",
            Command::Rho1 => "rho1",
            Command::GainDetect => "gain-detect",
            Command::GainSearch => "gain-search",
            Command::TwoMsg => "two-msg",
            Command::RatioSearch => "ratio-search",
            Command::EntropyRatio => "entropy-ratio",
            Command::Sweep => "sweep",
            Command::ReproducePaper => "reproduce-paper",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Parameters the command reads; anything else is rejected.
    pub fn accepts(self) -> &'static [&'static str] {
        match self {
            Command::WzRate => &["p", "q", "dsbs-p", "joint", "dist", "distortion", "grid-res", "refine"],
            Command::Rho1 => &["p", "q", "dsbs-p", "joint", "distortion"],
            Command::GainDetect => &["p", "q", "alpha0e", "margin"],
            Command::GainSearch => &["q", "alpha0e", "margin"],
            Command::TwoMsg => &["p", "q", "alpha"],
            Command::RatioSearch => &["L", "q", "alpha"],
            Command::EntropyRatio => &["p", "slope"],
            Command::Sweep | Command::ReproducePaper => &[],
        }
    }

    /// Result and verdict names, in output order.
    pub fn columns(self) -> (&'static [&'static str], &'static [&'static str]) {
        const CERTIFICATE: [&str; 8] = [
            "distortion",
            "lhs",
            "rhs_lower",
            "rhs_exact",
            "gap_lower",
            "gap_exact",
            "relative_gap",
            "margin",
        ];
        match self {
            Command::WzRate => (&["rate", "achieved_distortion"], &[]),
            Command::Rho1 => (&["rho1", "alpha0e", "alpha1e", "rsum1"], &["grid_fallback"]),
            Command::GainDetect => (&CERTIFICATE, &["valid"]),
            Command::GainSearch => (
                &[
                    "p",
                    "distortion",
                    "lhs",
                    "rhs_lower",
                    "rhs_exact",
                    "gap_lower",
                    "gap_exact",
                    "relative_gap",
                    "margin",
                ],
                &["valid"],
            ),
            Command::TwoMsg => (
                &[
                    "r1",
                    "r2",
                    "sum_rate",
                    "distortion",
                    "rsum1",
                    "sum_ratio",
                    "split_ratio",
                    "direct_max_deviation",
                ],
                &["direct_agrees"],
            ),
            Command::RatioSearch => (
                &["p", "q", "alpha", "r1", "r2", "distortion", "sum_ratio", "split_ratio"],
                &[],
            ),
            Command::EntropyRatio => (&["ratio"], &[]),
            Command::Sweep => (&[], &[]),
            Command::ReproducePaper => (
                &[
                    "remark2_ratio",
                    "remark2_ratio_paper",
                    "remark2_split_ratio",
                    "limit_c_over_h",
                    "limit_c_over_h_paper",
                    "limit_one_plus_d",
                    "limit_one_plus_d_paper",
                    "limit_gap",
                    "limit_sum_ratio",
                    "theorem1_gap_lower",
                    "theorem1_relative_gap",
                    "theorem1_identity_error",
                    "theorem2_p",
                    "theorem2_q",
                    "theorem2_sum_ratio",
                    "theorem2_split_ratio",
                    "lemma2_ratio_1e6",
                    "lemma2_ratio_1e9",
                    "lemma2_ratio_1e12",
                    "dsbs_max_deviation",
                ],
                &[
                    "remark2_matches",
                    "limits_match",
                    "theorem1_valid",
                    "theorem1_identity",
                    "theorem2_witness",
                    "lemma2_increasing",
                    "lemma2_near_slope",
                    "dsbs_closed_form",
                ],
            ),
        }
    }
}

/// Named results of one evaluation. `None` marks a ratio with a zero
/// denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub params: BTreeMap<String, String>,
    pub results: Vec<(&'static str, Option<f64>)>,
    pub verdicts: Vec<(&'static str, bool)>,
}

/// Runs `command` on `raw` parameters. Parameters the command does not read
/// are rejected.
pub fn evaluate(command: Command, raw: &BTreeMap<String, String>) -> Result<Outcome> {
    let accepted = command.accepts();
    if let Some(extra) = raw.keys().find(|k| !accepted.contains(&k.as_str())) {
        return Err(Error::format(
            format!("--{extra}"),
            format!("not used by `{}`", command.name()),
        ));
    }
    let mut lookup = Lookup::new(raw, command.name());
    let (results, verdicts) = match command {
        Command::WzRate => wz_rate(&mut lookup)?,
        Command::Rho1 => rho1(&mut lookup)?,
        Command::GainDetect => {
            let (p, q, a0) = (
                lookup.required("p")?,
                lookup.required("q")?,
                lookup.required("alpha0e")?,
            );
            let margin = lookup.or("margin", DEFAULT_MARGIN)?;
            certificate_outcome(None, &midpoint_violation_with_margin(p, q, a0, margin)?)
        }
        Command::GainSearch => {
            let (q, a0) = (lookup.required("q")?, lookup.required("alpha0e")?);
            let margin = lookup.or("margin", DEFAULT_MARGIN)?;
            let cert = find_gain_witness(q, a0, margin)?;
            certificate_outcome(Some(cert.p), &cert)
        }
        Command::TwoMsg => {
            let params = Table1Params::new(lookup.required("p")?, lookup.required("q")?, lookup.required("alpha")?)?;
            let check = table1_cross_check(&params)?;
            let pt = check.closed_form;
            let rsum1 = one_minus_eta(&DsbsParams::new(params.p, params.q, params.alpha)?) * h(params.p);
            (
                vec![
                    ("r1", Some(pt.r1)),
                    ("r2", Some(pt.r2)),
                    ("sum_rate", Some(pt.sum_rate())),
                    ("distortion", Some(pt.distortion)),
                    ("rsum1", Some(rsum1)),
                    ("sum_ratio", pt.sum_ratio),
                    ("split_ratio", pt.split_ratio),
                    ("direct_max_deviation", Some(check.max_deviation)),
                ],
                vec![("direct_agrees", check.agrees(CONSISTENCY_TOLERANCE))],
            )
        }
        Command::RatioSearch => {
            let l = lookup.required("L")?;
            let q = lookup.number("q")?;
            let alpha = lookup.or("alpha", DEFAULT_WITNESS_ALPHA)?;
            let w = find_ratio_witness_with(l, alpha, q)?;
            let mut results = vec![
                ("p", Some(w.params.p)),
                ("q", Some(w.params.q)),
                ("alpha", Some(w.params.alpha)),
            ];
            results.extend(point_results(&w.point));
            (results, vec![])
        }
        Command::EntropyRatio => {
            let p = lookup.required("p")?;
            let slope = lookup.or("slope", DEFAULT_SLOPE)?;
            (vec![("ratio", Some(entropy_ratio_check(slope, p)?))], vec![])
        }
        Command::ReproducePaper => reproduce()?,
        Command::Sweep => unreachable!("sweeps are expanded by the caller"),
    };
    debug_assert_eq!(
        (
            results.iter().map(|r| r.0).collect::<Vec<_>>(),
            verdicts.iter().map(|v| v.0).collect::<Vec<_>>()
        ),
        (command.columns().0.to_vec(), command.columns().1.to_vec())
    );
    let mut params = lookup.into_resolved();
    if command == Command::ReproducePaper {
        use super::params::plain;
        for (name, v) in [("p", reference::P), ("q", reference::Q), ("alpha", reference::ALPHA)] {
            params.insert(name.to_string(), plain(v));
        }
    }
    Ok(Outcome {
        params,
        results,
        verdicts,
    })
}

type Rows = (Vec<(&'static str, Option<f64>)>, Vec<(&'static str, bool)>);

/// The source joint: `--joint <file>`, `--dsbs-p`, or `--p` with `--q` for
/// `BSC(p) * Bernoulli(q)`.
fn source(lookup: &mut Lookup) -> Result<JointPmf> {
    let chosen = [
        lookup.has("joint"),
        lookup.has("dsbs-p"),
        lookup.has("p") || lookup.has("q"),
    ];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        return Err(Error::format(
            "--joint",
            "give exactly one source: --joint <file>, --dsbs-p, or --p with --q",
        ));
    }
    if let Some(path) = lookup.path("joint") {
        return ArrayDocument::read(&path)?.into_joint();
    }
    if let Some(p) = lookup.number("dsbs-p")? {
        return JointPmf::dsbs(p);
    }
    let (p, q) = (lookup.required("p")?, lookup.required("q")?);
    Ok(BinaryJoint::from_bsc_bernoulli(p, q)?.to_joint())
}

fn wz_rate(lookup: &mut Lookup) -> Result<Rows> {
    let p_xy = source(lookup)?;
    let d = match lookup.path("dist") {
        Some(path) => ArrayDocument::read(&path)?.into_distortion()?,
        None => DistortionMatrix::erasure(),
    };
    let target = lookup.required("distortion")?;
    let grid = GridSpec::new(
        lookup.count("grid-res", DEFAULT_GRID_RESOLUTION)?,
        lookup.count("refine", DEFAULT_REFINE_ROUNDS)?,
    )?;
    let sol = wz_rate_oracle(&p_xy, &d, target, grid)?;
    Ok((
        vec![("rate", Some(sol.rate)), ("achieved_distortion", Some(sol.distortion))],
        vec![],
    ))
}

fn rho1(lookup: &mut Lookup) -> Result<Rows> {
    let joint = BinaryJoint::from_joint(&source(lookup)?)?;
    let d = lookup.required("distortion")?;
    let sol = rho1_exact_solution(&joint, d)?;
    Ok((
        vec![
            ("rho1", Some(sol.value)),
            ("alpha0e", Some(sol.alphas.alpha0e)),
            ("alpha1e", Some(sol.alphas.alpha1e)),
            ("rsum1", Some((joint.lossless_sum_rate() - sol.value).max(0.0))),
        ],
        vec![("grid_fallback", sol.method == Rho1Method::GridFallback)],
    ))
}

fn certificate_outcome(p: Option<f64>, cert: &GainCertificate) -> Rows {
    let mut results = Vec::with_capacity(9);
    if p.is_some() {
        results.push(("p", p));
    }
    results.extend([
        ("distortion", Some(cert.distortion)),
        ("lhs", Some(cert.lhs)),
        ("rhs_lower", Some(cert.rhs_lower)),
        ("rhs_exact", Some(cert.rhs_exact)),
        ("gap_lower", Some(cert.gap_lower)),
        ("gap_exact", Some(cert.gap_exact)),
        ("relative_gap", Some(cert.relative_gap())),
        ("margin", Some(cert.margin)),
    ]);
    (results, vec![("valid", cert.is_valid())])
}

fn point_results(pt: &TwoMessagePoint) -> [(&'static str, Option<f64>); 5] {
    [
        ("r1", Some(pt.r1)),
        ("r2", Some(pt.r2)),
        ("distortion", Some(pt.distortion)),
        ("sum_ratio", pt.sum_ratio),
        ("split_ratio", pt.split_ratio),
    ]
}

/// Reference values and tolerances checked by `reproduce-paper`.
pub mod reference {
    /// Crossover probability, side-channel noise and erasure probability of
    /// the headline example.
    pub const P: f64 = 1e-200;
    pub const Q: f64 = 0.1;
    pub const ALPHA: f64 = 0.5;
    /// Reported ratio of one-message to two-message sum rate at `P`.
    pub const RATIO: f64 = 8.16;
    pub const RATIO_TOLERANCE: f64 = 0.02;
    /// Where the small-p limits are checked.
    pub const LIMIT_P: f64 = 1e-100;
    pub const C_OVER_H_TOLERANCE: f64 = 0.05;
    pub const ONE_PLUS_D_TOLERANCE: f64 = 1e-3;
    pub const CERTIFICATE_P: f64 = 1e-6;
    pub const IDENTITY_TOLERANCE: f64 = 1e-12;
    pub const WITNESS_L: f64 = 5.0;
    pub const SLOPE_PS: [f64; 3] = [1e-6, 1e-9, 1e-12];
    pub const SLOPE_TOLERANCE: f64 = 0.05;
    pub const DSBS_PS: [f64; 5] = [0.05, 0.15, 0.25, 0.35, 0.45];
    pub const DSBS_DS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    pub const DSBS_TOLERANCE: f64 = 1e-9;
}

fn reproduce() -> Result<Rows> {
    use reference::*;

    let headline = table1_point(&Table1Params::new(P, Q, ALPHA)?);
    let ratio = headline.sum_ratio.unwrap_or(f64::NAN);

    let limit_params = DsbsParams::new(LIMIT_P, Q, ALPHA)?;
    let c_over_h = c_functional(&limit_params, 1.0)? / h(LIMIT_P);
    let one_plus_d = 1.0 + eta_functional(&limit_params, 1.0)?;
    let c_over_h_paper = 2.0 - Q * (1.0 - ALPHA);
    let one_plus_d_paper = 2.0 - (1.0 - Q) * (1.0 - ALPHA);

    let cert = midpoint_violation(CERTIFICATE_P, Q, ALPHA)?;
    let scheme = table1_point(&Table1Params::new(CERTIFICATE_P, Q, ALPHA)?);
    let rsum1 = (1.0 - scheme.distortion) * h(CERTIFICATE_P);
    let identity_error = (cert.gap_lower - (rsum1 - scheme.sum_rate())).abs();

    let witness = find_ratio_witness_with(WITNESS_L, DEFAULT_WITNESS_ALPHA, None)?;

    let s6 = entropy_ratio_check(2.0, SLOPE_PS[0])?;
    let s9 = entropy_ratio_check(2.0, SLOPE_PS[1])?;
    let s12 = entropy_ratio_check(2.0, SLOPE_PS[2])?;

    let mut dsbs_dev = 0.0f64;
    for p in DSBS_PS {
        let joint = BinaryJoint::dsbs(p)?;
        for d in DSBS_DS {
            let exact = rho1_exact_solution(&joint, d)?.value;
            dsbs_dev = dsbs_dev.max((exact - rho1_dsbs(p, d)?).abs());
        }
    }

    let sum_ratio = |pt: &TwoMessagePoint| pt.sum_ratio.unwrap_or(f64::NAN);
    let split_ratio = |pt: &TwoMessagePoint| pt.split_ratio.unwrap_or(f64::INFINITY);
    Ok((
        vec![
            ("remark2_ratio", Some(ratio)),
            ("remark2_ratio_paper", Some(RATIO)),
            ("remark2_split_ratio", headline.split_ratio),
            ("limit_c_over_h", Some(c_over_h)),
            ("limit_c_over_h_paper", Some(c_over_h_paper)),
            ("limit_one_plus_d", Some(one_plus_d)),
            ("limit_one_plus_d_paper", Some(one_plus_d_paper)),
            ("limit_gap", Some(limit_gap(Q, ALPHA)?)),
            ("limit_sum_ratio", Some((1.0 - Q) / Q)),
            ("theorem1_gap_lower", Some(cert.gap_lower)),
            ("theorem1_relative_gap", Some(cert.relative_gap())),
            ("theorem1_identity_error", Some(identity_error)),
            ("theorem2_p", Some(witness.params.p)),
            ("theorem2_q", Some(witness.params.q)),
            ("theorem2_sum_ratio", witness.point.sum_ratio),
            ("theorem2_split_ratio", witness.point.split_ratio),
            ("lemma2_ratio_1e6", Some(s6)),
            ("lemma2_ratio_1e9", Some(s9)),
            ("lemma2_ratio_1e12", Some(s12)),
            ("dsbs_max_deviation", Some(dsbs_dev)),
        ],
        vec![
            ("remark2_matches", (ratio - RATIO).abs() <= RATIO_TOLERANCE),
            (
                "limits_match",
                (c_over_h - c_over_h_paper).abs() < C_OVER_H_TOLERANCE
                    && (one_plus_d - one_plus_d_paper).abs() < ONE_PLUS_D_TOLERANCE,
            ),
            ("theorem1_valid", cert.is_valid()),
            ("theorem1_identity", identity_error <= IDENTITY_TOLERANCE),
            (
                "theorem2_witness",
                sum_ratio(&witness.point) > WITNESS_L && split_ratio(&witness.point) < 1.0 / WITNESS_L,
            ),
            ("lemma2_increasing", s6 < s9 && s9 < s12),
            ("lemma2_near_slope", (s12 - 2.0).abs() / 2.0 < SLOPE_TOLERANCE),
            ("dsbs_closed_form", dsbs_dev <= DSBS_TOLERANCE),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    fn result(outcome: &Outcome, name: &str) -> f64 {
        outcome.results.iter().find(|r| r.0 == name).unwrap().1.unwrap()
    }

    #[test]
    fn names_round_trip() {
        for c in Command::ALL {
            assert_eq!(Command::from_name(c.name()), Some(c));
        }
        assert_eq!(Command::from_name("nope"), None);
    }

    #[test]
    fn rho1_dsbs_example() {
        let out = evaluate(Command::Rho1, &raw(&[("dsbs-p", "0.25"), ("distortion", "0.5")])).unwrap();
        assert!((result(&out, "rho1") - 1.216_917_186_688_699_3).abs() < 1e-9);
    }

    #[test]
    fn gain_detect_example() {
        let out = evaluate(
            Command::GainDetect,
            &raw(&[("p", "1e-6"), ("q", "0.1"), ("alpha0e", "0.5")]),
        )
        .unwrap();
        assert_eq!(out.verdicts, vec![("valid", true)]);
        assert_eq!(out.params["margin"], "1e-9");
    }

    #[test]
    fn unused_parameters_are_rejected() {
        let err = evaluate(Command::EntropyRatio, &raw(&[("p", "0.1"), ("q", "0.2")])).unwrap_err();
        assert!(err.to_string().contains("--q"));
    }

    #[test]
    fn source_must_be_unique() {
        let both = raw(&[("dsbs-p", "0.25"), ("p", "0.1"), ("q", "0.2"), ("distortion", "0.5")]);
        assert!(evaluate(Command::Rho1, &both).is_err());
        let tilted = raw(&[("p", "0.1"), ("q", "0.2"), ("distortion", "0.5")]);
        assert!(evaluate(Command::Rho1, &tilted).is_ok());
    }

    #[test]
    fn reproduction_verdicts_hold() {
        let out = evaluate(Command::ReproducePaper, &BTreeMap::new()).unwrap();
        for (name, ok) in &out.verdicts {
            assert!(ok, "{name}");
        }
        assert!((result(&out, "remark2_ratio") - 8.16).abs() <= 0.02);
    }

    #[test]
    fn columns_match_outcomes() {
        let cases = [
            (
                Command::WzRate,
                raw(&[
                    ("dsbs-p", "0.25"),
                    ("distortion", "0.5"),
                    ("grid-res", "8"),
                    ("refine", "0"),
                ]),
            ),
            (
                Command::GainSearch,
                raw(&[("q", "0.1"), ("alpha0e", "0.5"), ("margin", "0")]),
            ),
            (Command::TwoMsg, raw(&[("p", "0.1"), ("q", "0.2"), ("alpha", "0.5")])),
            (Command::RatioSearch, raw(&[("L", "2")])),
            (Command::EntropyRatio, raw(&[("p", "1e-6")])),
        ];
        for (command, params) in cases {
            let out = evaluate(command, &params).unwrap();
            let names: Vec<_> = out.results.iter().map(|r| r.0).collect();
            assert_eq!(names, command.columns().0);
        }
    }
}
