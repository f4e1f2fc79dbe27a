use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use wzgain_ffi::*;

fn last_error() -> String {
    let msg = wz_last_error_message();
    assert!(!msg.is_null());
    unsafe { CStr::from_ptr(msg) }.to_string_lossy().into_owned()
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    assert_eq!(wz_binary_entropy(0.5, &mut v), WzStatus::WzOk);
    assert_eq!(v, 1.0);
    assert_eq!(wz_entropy_of_ratio(1.0, 3.0, &mut v), WzStatus::WzOk);
    assert!((v - 0.811_278_124_459_132_9).abs() < 1e-15);
    assert_eq!(wz_rsum1_dsbs(0.25, 0.5, &mut v), WzStatus::WzOk);
    assert!((v - 0.5 * 0.811_278_124_459_132_9).abs() < 1e-12);
    assert_eq!(wz_entropy_ratio_check(2.0, 1e-12, &mut v), WzStatus::WzOk);
    assert!((v - 2.0).abs() < 0.1);
}

#[test]
fn domain_errors_leave_output_untouched() {
    let mut v = 42.0;
    assert_eq!(wz_binary_entropy(1.5, &mut v), WzStatus::WzDomain);
    assert_eq!(v, 42.0);
    assert!(last_error().contains("1.5"));
    assert_eq!(wz_binary_entropy(0.5, ptr::null_mut()), WzStatus::WzNullPointer);
    assert!(last_error().contains("result"));
}

#[test]
fn binary_erasure_functions() {
    let q = 0.25;
    let (p00, p01, p10, p11) = (0.5 * (1.0 - q), 0.5 * q, 0.5 * q, 0.5 * (1.0 - q));
    let mut v = 0.0;
    assert_eq!(wz_rho1_exact(p00, p01, p10, p11, 0.5, &mut v), WzStatus::WzOk);
    assert!((v - 1.5 * 0.811_278_124_459_132_9).abs() < 1e-9);
    assert_eq!(wz_psi(p00, p01, p10, p11, 0.5, 0.5, &mut v), WzStatus::WzOk);
    assert!((v - 1.5 * 0.811_278_124_459_132_9).abs() < 1e-12);
    assert_eq!(wz_phi(p00, p01, p10, p11, 0.5, 0.5, &mut v), WzStatus::WzOk);
    assert!((v - 0.5).abs() < 1e-15);
    assert_eq!(wz_rho1_exact(0.5, 0.5, 0.5, 0.5, 0.5, &mut v), WzStatus::WzInvalidInput);
    assert_eq!(wz_eta_functional(0.1, 0.2, 0.5, 1.0, &mut v), WzStatus::WzOk);
    assert!((v - 0.63).abs() < 1e-12);
    assert_eq!(wz_c_functional(0.1, 0.2, 0.5, 1.0, &mut v), WzStatus::WzOk);
    assert!(v > 0.0);
}

#[test]
fn handles_and_oracle() {
    let mut joint = ptr::null_mut();
    assert_eq!(wz_joint_dsbs(0.25, &mut joint), WzStatus::WzOk);
    let mut dist = ptr::null_mut();
    assert_eq!(wz_distortion_erasure(&mut dist), WzStatus::WzOk);

    let mut h = 0.0;
    assert_eq!(wz_conditional_entropy(joint, &mut h), WzStatus::WzOk);
    assert!((h - 0.811_278_124_459_132_9).abs() < 1e-12);
    let mut lossless = 0.0;
    assert_eq!(wz_lossless_sum_rate(joint, &mut lossless), WzStatus::WzOk);
    assert!((lossless - 2.0 * h).abs() < 1e-12);

    let (mut rate, mut achieved) = (0.0, 0.0);
    assert_eq!(
        wz_rate_oracle(joint, dist, 0.5, 32, 1, &mut rate, &mut achieved),
        WzStatus::WzOk
    );
    assert!((rate - 0.5 * h).abs() < 1e-2, "{rate}");
    assert!(achieved <= 0.5 + 1e-9);
    assert_eq!(
        wz_rate_oracle(joint, ptr::null(), 0.5, 32, 1, &mut rate, &mut achieved),
        WzStatus::WzNullPointer
    );

    let mut hamming = ptr::null_mut();
    assert_eq!(wz_distortion_hamming(2, &mut hamming), WzStatus::WzOk);
    unsafe {
        wz_distortion_free(hamming);
        wz_distortion_free(dist);
        wz_joint_free(joint);
        wz_joint_free(ptr::null_mut());
    }
}

#[test]
fn constructors_validate() {
    let mut joint = ptr::null_mut();
    let probs = [0.4, 0.1, 0.1, 0.4];
    assert_eq!(wz_joint_new(2, 2, probs.as_ptr(), &mut joint), WzStatus::WzOk);
    unsafe { wz_joint_free(joint) };
    let bad = [0.4, 0.1, 0.1, 0.5];
    let mut untouched = ptr::null_mut();
    assert_eq!(
        wz_joint_new(2, 2, bad.as_ptr(), &mut untouched),
        WzStatus::WzInvalidInput
    );
    assert!(untouched.is_null());
    assert_eq!(wz_joint_new(2, 2, ptr::null(), &mut untouched), WzStatus::WzNullPointer);

    let mut dist = ptr::null_mut();
    let values = [0.0, 1.0, f64::INFINITY, f64::INFINITY, 1.0, 0.0];
    assert_eq!(wz_distortion_new(2, 3, values.as_ptr(), &mut dist), WzStatus::WzOk);
    unsafe { wz_distortion_free(dist) };
    let negative = [0.0, -1.0];
    assert_eq!(
        wz_distortion_new(1, 2, negative.as_ptr(), &mut dist),
        WzStatus::WzInvalidInput
    );
}

#[test]
fn certificates_and_witnesses() {
    let mut cert = std::mem::MaybeUninit::<WzGainCertificate>::zeroed();
    assert_eq!(
        wz_midpoint_violation(1e-6, 0.1, 0.5, 1e-9, cert.as_mut_ptr()),
        WzStatus::WzOk
    );
    let cert = unsafe { cert.assume_init() };
    assert!(cert.valid && cert.gap_lower > 0.0);

    let mut found = std::mem::MaybeUninit::<WzGainCertificate>::zeroed();
    assert_eq!(wz_find_gain_witness(0.1, 0.5, 0.0, found.as_mut_ptr()), WzStatus::WzOk);
    assert!(unsafe { found.assume_init() }.p <= 1e-2);

    let mut point = std::mem::MaybeUninit::<WzTwoMessagePoint>::zeroed();
    assert_eq!(wz_table1_point(1e-200, 0.1, 0.5, point.as_mut_ptr()), WzStatus::WzOk);
    assert!((unsafe { point.assume_init() }.sum_ratio - 8.16).abs() < 0.02);

    let (mut p, mut q) = (0.0, 0.0);
    assert_eq!(
        wz_find_ratio_witness(5.0, 0.5, f64::NAN, &mut p, &mut q, point.as_mut_ptr()),
        WzStatus::WzOk
    );
    let pt = unsafe { point.assume_init() };
    assert!(pt.sum_ratio > 5.0 && pt.split_ratio < 0.2 && q <= 1.0 / 7.0 && p > 0.0);
    assert_eq!(
        wz_find_ratio_witness(9.0, 0.5, 0.1, &mut p, &mut q, point.as_mut_ptr()),
        WzStatus::WzSearchExhausted
    );
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/wzgain.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct WzJointPmf WzJointPmf;",
        "typedef struct WzDistortion WzDistortion;",
        "WZ_SEARCH_EXHAUSTED = 5",
        "WzStatus wz_rate_oracle(",
        "WzStatus wz_midpoint_violation(",
        "WzStatus wz_find_ratio_witness(",
        "const char *wz_last_error_message(void);",
        "void wz_joint_free(struct WzJointPmf *handle);",
    ] {
        assert!(text.contains(name), "header lacks `{name}`");
    }
}

/// Compiles and runs a small C program against the static library.
#[test]
fn c_program_links_and_runs() {
    let target_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = target_dir.join("libwzgain_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "wzgain.h"
int main(void) {
    double h = 0.0;
    if (wz_binary_entropy(0.25, &h) != WZ_OK) return 1;
    WzTwoMessagePoint pt;
    if (wz_table1_point(1e-200, 0.1, 0.5, &pt) != WZ_OK) return 2;
    if (wz_binary_entropy(2.0, &h) != WZ_DOMAIN) return 3;
    if (wz_last_error_message() == NULL) return 4;
    WzJointPmf *joint = NULL;
    if (wz_joint_dsbs(0.25, &joint) != WZ_OK) return 5;
    double ch = 0.0;
    if (wz_conditional_entropy(joint, &ch) != WZ_OK) return 6;
    wz_joint_free(joint);
    printf("%.6f %.4f\n", ch, pt.sum_ratio);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(output.status.success(), "exit {:?}", output.status);
    assert_eq!(String::from_utf8_lossy(&output.stdout).trim(), "0.811278 8.1691");
}
