use wzgain::erasure::{rho1_exact, BinaryJoint};
use wzgain::gain::midpoint_violation_with_margin;
use wzgain::io::ArrayDocument;
use wzgain::wyner_ziv::{rho1_oracle, wz_rate_oracle, GridSpec};
use wzgain::{binary_entropy, conditional_entropy, DistortionMatrix, Error, JointPmf};

fn grid(res: u32, rounds: u32) -> GridSpec {
    GridSpec::new(res, rounds).unwrap()
}

#[test]
fn oracle_is_sandwiched_by_exact_solution() {
    let erasure = DistortionMatrix::erasure();
    for (p, q, d) in [(0.1, 0.3, 0.2), (0.25, 0.5, 0.5), (0.4, 0.2, 0.7)] {
        let joint = BinaryJoint::from_bsc_bernoulli(p, q).unwrap();
        let exact = rho1_exact(&joint, d).unwrap();
        let oracle = rho1_oracle(&joint.to_joint(), &erasure, d, grid(64, 2)).unwrap();
        // the oracle optimizes over a subset of channels, so it never exceeds the optimum
        assert!(oracle <= exact + 1e-9, "{p} {q} {d}: {oracle} > {exact}");
        assert!(exact - oracle < 5e-3, "{p} {q} {d}: {oracle} vs {exact}");
    }
}

#[test]
fn rate_is_nonincreasing_in_distortion() {
    // ternary source, side information through a noisy ternary channel
    let joint = JointPmf::new(3, 3, vec![0.2, 0.05, 0.05, 0.04, 0.25, 0.04, 0.06, 0.06, 0.25]).unwrap();
    let hamming = DistortionMatrix::hamming(3).unwrap();
    let mut previous = f64::INFINITY;
    // a fixed grid (no refinement) only gains feasible points as D grows
    for d in [0.0, 0.1, 0.2, 0.3, 0.5] {
        let rate = wz_rate_oracle(&joint, &hamming, d, grid(8, 0)).unwrap().rate;
        assert!(rate <= previous + 1e-12, "D = {d}: {rate} > {previous}");
        previous = rate;
    }
}

#[test]
fn zero_distortion_needs_conditional_entropy() {
    let joint = JointPmf::new(2, 2, vec![0.4, 0.1, 0.15, 0.35]).unwrap();
    let sol = wz_rate_oracle(&joint, &DistortionMatrix::hamming(2).unwrap(), 0.0, grid(16, 1)).unwrap();
    assert!((sol.rate - conditional_entropy(&joint)).abs() < 1e-9, "{}", sol.rate);
    assert!(sol.distortion.abs() < 1e-12);
}

#[test]
fn useless_side_information_gives_rate_distortion_function() {
    let joint = JointPmf::new(2, 2, vec![0.25; 4]).unwrap();
    let d = 0.1;
    let sol = wz_rate_oracle(&joint, &DistortionMatrix::hamming(2).unwrap(), d, grid(64, 3)).unwrap();
    let expected = 1.0 - binary_entropy(d).unwrap();
    assert!(sol.rate >= expected - 1e-9);
    assert!(sol.rate - expected < 5e-3, "{} vs {expected}", sol.rate);
}

#[test]
fn certificate_lhs_matches_oracle_at_moderate_p() {
    for p in [0.05, 0.2] {
        let cert = midpoint_violation_with_margin(p, 0.1, 0.5, 0.0).unwrap();
        let oracle = rho1_oracle(
            &JointPmf::dsbs(p).unwrap(),
            &DistortionMatrix::erasure(),
            cert.distortion,
            grid(64, 2),
        )
        .unwrap();
        assert!((cert.lhs - oracle).abs() < 5e-3, "p = {p}: {} vs {oracle}", cert.lhs);
    }
}

#[test]
fn reads_instances_from_documents() {
    let joint = ArrayDocument::parse(r#"{"alphabet_sizes": [2, 2], "values": [0.375, 0.125, 0.125, 0.375]}"#)
        .unwrap()
        .into_joint()
        .unwrap();
    let dist = ArrayDocument::parse(r#"{"alphabet_sizes": [2, 3], "values": [0, 1, "inf", "inf", 1, 0]}"#)
        .unwrap()
        .into_distortion()
        .unwrap();
    let sol = wz_rate_oracle(&joint, &dist, 0.5, grid(32, 2)).unwrap();
    let expected = 0.5 * binary_entropy(0.25).unwrap();
    assert!((sol.rate - expected).abs() < 5e-3);
}

#[test]
fn infeasible_targets_are_reported() {
    let joint = JointPmf::dsbs(0.25).unwrap();
    let forbidden = DistortionMatrix::new(2, 2, vec![1.0, f64::INFINITY, f64::INFINITY, 1.0]).unwrap();
    let err = wz_rate_oracle(&joint, &forbidden, 0.5, grid(8, 0)).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
}
