//! One-dimensional maximization of concave functions.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Golden-section search for the maximum of a concave (or unimodal) `f` on
/// `[lo, hi]`, shrinking the bracket until it is narrower than `tol`. The
/// endpoints are evaluated as well, so a maximum on the boundary is found
/// exactly. Returns `(argmax, max)`.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    debug_assert!(lo <= hi);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // Each step shrinks the bracket by 0.618, so this cap is never reached for
    // tolerances above 1e-300 on unit-scale brackets.
    for _ in 0..2000 {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for candidate in [(c, fc), (d, fd), (lo, f(lo)), (hi, f(hi))] {
        if candidate.1 > best.1 {
            best = candidate;
        }
    }
    best
}
