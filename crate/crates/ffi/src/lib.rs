//! C ABI for `wzgain`.
//!
//! Every function returns a [`WzStatus`] and writes its results through out
//! pointers, which are left untouched on failure. The message of the most
//! recent failure on the calling thread is available from
//! [`wz_last_error_message`]. Joint pmfs and distortion matrices are opaque
//! handles created by `*_new` functions and released with the matching
//! `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wzgain::erasure::{self, BinaryJoint, DsbsParams, ErasureAlphaPair};
use wzgain::gain::{self, GainCertificate};
use wzgain::two_message::{self, Table1Params, TwoMessagePoint};
use wzgain::wyner_ziv::{self, GridSpec};
use wzgain::{DistortionMatrix, Error, JointPmf};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WzStatus {
    WzOk = 0,
    WzNullPointer = 1,
    /// A scalar argument is outside its domain.
    WzDomain = 2,
    /// A pmf, channel, distortion matrix or shape failed validation.
    WzInvalidInput = 3,
    /// No test channel meets the distortion target.
    WzInfeasible = 4,
    /// A witness search ran out of candidates.
    WzSearchExhausted = 5,
    WzIo = 6,
    /// Internal error; the library caught a panic.
    WzInternal = 7,
}

/// Opaque joint pmf of `(X, Y)`.
pub struct WzJointPmf(JointPmf);

/// Opaque distortion matrix.
pub struct WzDistortion(DistortionMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WzGainCertificate {
    pub p: f64,
    pub q: f64,
    pub alpha0e: f64,
    pub distortion: f64,
    pub lhs: f64,
    pub rhs_lower: f64,
    pub rhs_exact: f64,
    pub gap_lower: f64,
    pub gap_exact: f64,
    pub margin: f64,
    pub valid: bool,
}

impl From<&GainCertificate> for WzGainCertificate {
    fn from(c: &GainCertificate) -> Self {
        Self {
            p: c.p,
            q: c.q,
            alpha0e: c.alpha0e,
            distortion: c.distortion,
            lhs: c.lhs,
            rhs_lower: c.rhs_lower,
            rhs_exact: c.rhs_exact,
            gap_lower: c.gap_lower,
            gap_exact: c.gap_exact,
            margin: c.margin,
            valid: c.is_valid(),
        }
    }
}

/// Rates of a two-message scheme. Undefined ratios are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WzTwoMessagePoint {
    pub r1: f64,
    pub r2: f64,
    pub distortion: f64,
    pub sum_ratio: f64,
    pub split_ratio: f64,
}

impl From<&TwoMessagePoint> for WzTwoMessagePoint {
    fn from(p: &TwoMessagePoint) -> Self {
        Self {
            r1: p.r1,
            r2: p.r2,
            distortion: p.distortion,
            sum_ratio: p.sum_ratio.unwrap_or(f64::NAN),
            split_ratio: p.split_ratio.unwrap_or(f64::NAN),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn status_of(err: &Error) -> WzStatus {
    match err {
        Error::Domain { .. } => WzStatus::WzDomain,
        Error::InvalidPmf { .. } | Error::Dimension(_) | Error::Format { .. } => WzStatus::WzInvalidInput,
        Error::Infeasible(_) => WzStatus::WzInfeasible,
        Error::SearchExhausted(_) => WzStatus::WzSearchExhausted,
        Error::Io(_) => WzStatus::WzIo,
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WzStatus::WzOk,
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("null pointer passed as `{name}`"));
            WzStatus::WzNullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal error".into());
            WzStatus::WzInternal
        }
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn out<'a, T>(ptr: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: callers pass either null or a pointer valid for writes.
    unsafe { ptr.as_mut() }.ok_or(Failure::Null(name))
}

fn input<'a, T>(ptr: *const T, name: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass either null or a handle from this library.
    unsafe { ptr.as_ref() }.ok_or(Failure::Null(name))
}

fn slice<'a>(ptr: *const f64, len: usize, name: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::Null(name));
    }
    // SAFETY: callers guarantee `len` readable doubles at `ptr`.
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Binary entropy in bits.
#[no_mangle]
pub extern "C" fn wz_binary_entropy(theta: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = wzgain::binary_entropy(theta)?;
        Ok(())
    })
}

/// `h(a / (a + b))` from unnormalized nonnegative masses.
#[no_mangle]
pub extern "C" fn wz_entropy_of_ratio(a: f64, b: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = wzgain::entropy_of_ratio(a, b)?;
        Ok(())
    })
}

/// Joint pmf from `rows * cols` row-major probabilities (rows index X).
#[no_mangle]
pub extern "C" fn wz_joint_new(rows: usize, cols: usize, probs: *const f64, handle: *mut *mut WzJointPmf) -> WzStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        let values = slice(probs, rows.saturating_mul(cols), "probs")?;
        let joint = JointPmf::new(rows, cols, values.to_vec())?;
        *h = Box::into_raw(Box::new(WzJointPmf(joint)));
        Ok(())
    })
}

/// Doubly symmetric binary source with crossover `p`.
#[no_mangle]
pub extern "C" fn wz_joint_dsbs(p: f64, handle: *mut *mut WzJointPmf) -> WzStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        *h = Box::into_raw(Box::new(WzJointPmf(JointPmf::dsbs(p)?)));
        Ok(())
    })
}

/// Releases a joint pmf. Null is ignored.
///
/// # Safety
/// `handle` must be null or come from `wz_joint_new`/`wz_joint_dsbs`, and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wz_joint_free(handle: *mut WzJointPmf) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// `H(X | Y)` in bits.
#[no_mangle]
pub extern "C" fn wz_conditional_entropy(joint: *const WzJointPmf, result: *mut f64) -> WzStatus {
    guard(|| {
        let j = input(joint, "joint")?;
        *out(result, "result")? = wzgain::conditional_entropy(&j.0);
        Ok(())
    })
}

/// Distortion matrix from `sources * reproductions` row-major entries;
/// `INFINITY` marks forbidden pairs.
#[no_mangle]
pub extern "C" fn wz_distortion_new(
    sources: usize,
    reproductions: usize,
    values: *const f64,
    handle: *mut *mut WzDistortion,
) -> WzStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        let v = slice(values, sources.saturating_mul(reproductions), "values")?;
        *h = Box::into_raw(Box::new(WzDistortion(DistortionMatrix::new(
            sources,
            reproductions,
            v.to_vec(),
        )?)));
        Ok(())
    })
}

/// Binary erasure distortion over reproductions `{0, e, 1}`.
#[no_mangle]
pub extern "C" fn wz_distortion_erasure(handle: *mut *mut WzDistortion) -> WzStatus {
    guard(|| {
        *out(handle, "handle")? = Box::into_raw(Box::new(WzDistortion(DistortionMatrix::erasure())));
        Ok(())
    })
}

/// Hamming distortion on `n` symbols.
#[no_mangle]
pub extern "C" fn wz_distortion_hamming(n: usize, handle: *mut *mut WzDistortion) -> WzStatus {
    guard(|| {
        let h = out(handle, "handle")?;
        *h = Box::into_raw(Box::new(WzDistortion(DistortionMatrix::hamming(n)?)));
        Ok(())
    })
}

/// Releases a distortion matrix. Null is ignored.
///
/// # Safety
/// `handle` must be null or come from a `wz_distortion_*` constructor, and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn wz_distortion_free(handle: *mut WzDistortion) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// One-message rate at distortion `target` by grid search. Writes the rate
/// and the distortion the returned test channel achieves.
#[no_mangle]
pub extern "C" fn wz_rate_oracle(
    joint: *const WzJointPmf,
    distortion: *const WzDistortion,
    target: f64,
    resolution: u32,
    refine_rounds: u32,
    rate: *mut f64,
    achieved: *mut f64,
) -> WzStatus {
    guard(|| {
        let (j, d) = (input(joint, "joint")?, input(distortion, "distortion")?);
        let (rate, achieved) = (out(rate, "rate")?, out(achieved, "achieved")?);
        let sol = wyner_ziv::wz_rate_oracle(&j.0, &d.0, target, GridSpec::new(resolution, refine_rounds)?)?;
        *rate = sol.rate;
        *achieved = sol.distortion;
        Ok(())
    })
}

/// `H(X|Y) + H(Y|X)` in bits.
#[no_mangle]
pub extern "C" fn wz_lossless_sum_rate(joint: *const WzJointPmf, result: *mut f64) -> WzStatus {
    guard(|| {
        let j = input(joint, "joint")?;
        *out(result, "result")? = wyner_ziv::lossless_sum_rate(&j.0);
        Ok(())
    })
}

fn binary(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<BinaryJoint, Failure> {
    Ok(BinaryJoint::new(p00, p01, p10, p11)?)
}

/// Exact one-message rate reduction of the binary joint `p_xy` (entries
/// `p00, p01, p10, p11`) under erasure distortion at level `d`.
#[no_mangle]
pub extern "C" fn wz_rho1_exact(p00: f64, p01: f64, p10: f64, p11: f64, d: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::rho1_exact(&binary(p00, p01, p10, p11)?, d)?;
        Ok(())
    })
}

/// Rate reduction of the erasure channel with erasure probabilities
/// `alpha0e`, `alpha1e`.
#[no_mangle]
pub extern "C" fn wz_psi(
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
    alpha0e: f64,
    alpha1e: f64,
    result: *mut f64,
) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::psi(&binary(p00, p01, p10, p11)?, ErasureAlphaPair::new(alpha0e, alpha1e)?);
        Ok(())
    })
}

/// Expected erasure distortion of the same channel.
#[no_mangle]
pub extern "C" fn wz_phi(
    p00: f64,
    p01: f64,
    p10: f64,
    p11: f64,
    alpha0e: f64,
    alpha1e: f64,
    result: *mut f64,
) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::phi(&binary(p00, p01, p10, p11)?, ErasureAlphaPair::new(alpha0e, alpha1e)?);
        Ok(())
    })
}

/// C functional of `BSC(p) * Bernoulli(q)` at `(alpha0e, alpha1e)`.
#[no_mangle]
pub extern "C" fn wz_c_functional(p: f64, q: f64, alpha0e: f64, alpha1e: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::c_functional(&DsbsParams::new(p, q, alpha0e)?, alpha1e)?;
        Ok(())
    })
}

/// Distortion paired with the C functional.
#[no_mangle]
pub extern "C" fn wz_eta_functional(p: f64, q: f64, alpha0e: f64, alpha1e: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::eta_functional(&DsbsParams::new(p, q, alpha0e)?, alpha1e)?;
        Ok(())
    })
}

/// One-message sum rate of the DSBS(`p`) under erasure distortion.
#[no_mangle]
pub extern "C" fn wz_rsum1_dsbs(p: f64, d: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = erasure::rsum1_dsbs(p, d)?;
        Ok(())
    })
}

/// Midpoint certificate at `(p, q, alpha0e)` with absolute margin `margin`.
#[no_mangle]
pub extern "C" fn wz_midpoint_violation(
    p: f64,
    q: f64,
    alpha0e: f64,
    margin: f64,
    certificate: *mut WzGainCertificate,
) -> WzStatus {
    guard(|| {
        let c = out(certificate, "certificate")?;
        *c = (&gain::midpoint_violation_with_margin(p, q, alpha0e, margin)?).into();
        Ok(())
    })
}

/// Largest `p` in `1e-1, 1e-2, ..., 1e-300` with a valid certificate.
#[no_mangle]
pub extern "C" fn wz_find_gain_witness(
    q: f64,
    alpha0e: f64,
    margin: f64,
    certificate: *mut WzGainCertificate,
) -> WzStatus {
    guard(|| {
        let c = out(certificate, "certificate")?;
        *c = (&gain::find_gain_witness(q, alpha0e, margin)?).into();
        Ok(())
    })
}

/// Closed-form rates of the explicit two-message erasure scheme.
#[no_mangle]
pub extern "C" fn wz_table1_point(p: f64, q: f64, alpha: f64, point: *mut WzTwoMessagePoint) -> WzStatus {
    guard(|| {
        let pt = out(point, "point")?;
        *pt = (&two_message::table1_point(&Table1Params::new(p, q, alpha)?)).into();
        Ok(())
    })
}

/// Scheme parameters with sum-rate ratio above `l` and split ratio below
/// `1 / l`. Pass NaN as `q` to use the default `1 / (l + 3)`.
#[no_mangle]
pub extern "C" fn wz_find_ratio_witness(
    l: f64,
    alpha: f64,
    q: f64,
    p_out: *mut f64,
    q_out: *mut f64,
    point: *mut WzTwoMessagePoint,
) -> WzStatus {
    guard(|| {
        let (p_out, q_out, pt) = (out(p_out, "p_out")?, out(q_out, "q_out")?, out(point, "point")?);
        let w = two_message::find_ratio_witness_with(l, alpha, (!q.is_nan()).then_some(q))?;
        *p_out = w.params.p;
        *q_out = w.params.q;
        *pt = (&w.point).into();
        Ok(())
    })
}

/// `h(slope * p) / h(p)`.
#[no_mangle]
pub extern "C" fn wz_entropy_ratio_check(slope: f64, p: f64, result: *mut f64) -> WzStatus {
    guard(|| {
        let r = out(result, "result")?;
        *r = two_message::entropy_ratio_check(slope, p)?;
        Ok(())
    })
}
