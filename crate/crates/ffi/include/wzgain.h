#ifndef WZGAIN_H
#define WZGAIN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WzStatus {
  WZ_OK = 0,
  WZ_NULL_POINTER = 1,
  /**
   * A scalar argument is outside its domain.
   */
  WZ_DOMAIN = 2,
  /**
   * A pmf, channel, distortion matrix or shape failed validation.
   */
  WZ_INVALID_INPUT = 3,
  /**
   * No test channel meets the distortion target.
   */
  WZ_INFEASIBLE = 4,
  /**
   * A witness search ran out of candidates.
   */
  WZ_SEARCH_EXHAUSTED = 5,
  WZ_IO = 6,
  /**
   * Internal error; the library caught a panic.
   */
  WZ_INTERNAL = 7,
} WzStatus;

/**
 * Opaque distortion matrix.
 */
typedef struct WzDistortion WzDistortion;

/**
 * Opaque joint pmf of `(X, Y)`.
 */
typedef struct WzJointPmf WzJointPmf;

typedef struct WzGainCertificate {
  double p;
  double q;
  double alpha0e;
  double distortion;
  double lhs;
  double rhs_lower;
  double rhs_exact;
  double gap_lower;
  double gap_exact;
  double margin;
  bool valid;
} WzGainCertificate;

/**
 * Rates of a two-message scheme. Undefined ratios are NaN.
 */
typedef struct WzTwoMessagePoint {
  double r1;
  double r2;
  double distortion;
  double sum_ratio;
  double split_ratio;
} WzTwoMessagePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *wz_last_error_message(void);

/**
 * Binary entropy in bits.
 */
enum WzStatus wz_binary_entropy(double theta, double *result);

/**
 * `h(a / (a + b))` from unnormalized nonnegative masses.
 */
enum WzStatus wz_entropy_of_ratio(double a, double b, double *result);

/**
 * Joint pmf from `rows * cols` row-major probabilities (rows index X).
 */
enum WzStatus wz_joint_new(size_t rows,
                           size_t cols,
                           const double *probs,
                           struct WzJointPmf **handle);

/**
 * Doubly symmetric binary source with crossover `p`.
 */
enum WzStatus wz_joint_dsbs(double p, struct WzJointPmf **handle);

/**
 * Releases a joint pmf. Null is ignored.
 *
 * # Safety
 * `handle` must be null or come from `wz_joint_new`/`wz_joint_dsbs`, and
 * must not be used afterwards.
 */
void wz_joint_free(struct WzJointPmf *handle);

/**
 * `H(X | Y)` in bits.
 */
enum WzStatus wz_conditional_entropy(const struct WzJointPmf *joint, double *result);

/**
 * Distortion matrix from `sources * reproductions` row-major entries;
 * `INFINITY` marks forbidden pairs.
 */
enum WzStatus wz_distortion_new(size_t sources,
                                size_t reproductions,
                                const double *values,
                                struct WzDistortion **handle);

/**
 * Binary erasure distortion over reproductions `{0, e, 1}`.
 */
enum WzStatus wz_distortion_erasure(struct WzDistortion **handle);

/**
 * Hamming distortion on `n` symbols.
 */
enum WzStatus wz_distortion_hamming(size_t n, struct WzDistortion **handle);

/**
 * Releases a distortion matrix. Null is ignored.
 *
 * # Safety
 * `handle` must be null or come from a `wz_distortion_*` constructor, and
 * must not be used afterwards.
 */
void wz_distortion_free(struct WzDistortion *handle);

/**
 * One-message rate at distortion `target` by grid search. Writes the rate
 * and the distortion the returned test channel achieves.
 */
enum WzStatus wz_rate_oracle(const struct WzJointPmf *joint,
                             const struct WzDistortion *distortion,
                             double target,
                             uint32_t resolution,
                             uint32_t refine_rounds,
                             double *rate,
                             double *achieved);

/**
 * `H(X|Y) + H(Y|X)` in bits.
 */
enum WzStatus wz_lossless_sum_rate(const struct WzJointPmf *joint, double *result);

/**
 * Exact one-message rate reduction of the binary joint `p_xy` (entries
 * `p00, p01, p10, p11`) under erasure distortion at level `d`.
 */
enum WzStatus wz_rho1_exact(double p00,
                            double p01,
                            double p10,
                            double p11,
                            double d,
                            double *result);

/**
 * Rate reduction of the erasure channel with erasure probabilities
 * `alpha0e`, `alpha1e`.
 */
enum WzStatus wz_psi(double p00,
                     double p01,
                     double p10,
                     double p11,
                     double alpha0e,
                     double alpha1e,
                     double *result);

/**
 * Expected erasure distortion of the same channel.
 */
enum WzStatus wz_phi(double p00,
                     double p01,
                     double p10,
                     double p11,
                     double alpha0e,
                     double alpha1e,
                     double *result);

/**
 * C functional of `BSC(p) * Bernoulli(q)` at `(alpha0e, alpha1e)`.
 */
enum WzStatus wz_c_functional(double p, double q, double alpha0e, double alpha1e, double *result);

/**
 * Distortion paired with the C functional.
 */
enum WzStatus wz_eta_functional(double p, double q, double alpha0e, double alpha1e, double *result);

/**
 * One-message sum rate of the DSBS(`p`) under erasure distortion.
 */
enum WzStatus wz_rsum1_dsbs(double p, double d, double *result);

/**
 * Midpoint certificate at `(p, q, alpha0e)` with absolute margin `margin`.
 */
enum WzStatus wz_midpoint_violation(double p,
                                    double q,
                                    double alpha0e,
                                    double margin,
                                    struct WzGainCertificate *certificate);

/**
 * Largest `p` in `1e-1, 1e-2, ..., 1e-300` with a valid certificate.
 */
enum WzStatus wz_find_gain_witness(double q,
                                   double alpha0e,
                                   double margin,
                                   struct WzGainCertificate *certificate);

/**
 * Closed-form rates of the explicit two-message erasure scheme.
 */
enum WzStatus wz_table1_point(double p, double q, double alpha, struct WzTwoMessagePoint *point);

/**
 * Scheme parameters with sum-rate ratio above `l` and split ratio below
 * `1 / l`. Pass NaN as `q` to use the default `1 / (l + 3)`.
 */
enum WzStatus wz_find_ratio_witness(double l,
                                    double alpha,
                                    double q,
                                    double *p_out,
                                    double *q_out,
                                    struct WzTwoMessagePoint *point);

/**
 * `h(slope * p) / h(p)`.
 */
enum WzStatus wz_entropy_ratio_check(double slope, double p, double *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WZGAIN_H */
