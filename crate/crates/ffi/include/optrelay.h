#ifndef OPTRELAY_H
#define OPTRELAY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OptrelayFading {
  OPTRELAY_FADING_NONE = 0,
  OPTRELAY_FADING_RAYLEIGH = 1,
} OptrelayFading;

typedef enum OptrelayLaw {
  OPTRELAY_LAW_GAMMA_OPT = 0,
  /**
   * `p1` is the window radius τ.
   */
  OPTRELAY_LAW_GAMMA_OPT_FINITE_DISC = 1,
  OPTRELAY_LAW_GAMMA_MID = 2,
  OPTRELAY_LAW_GAMMA_C2D = 3,
  /**
   * `p1`, `p2` are the effective SNRs S̃₁, S̃₂.
   */
  OPTRELAY_LAW_GAMMA_OPT_DIFF_SNR = 4,
} OptrelayLaw;

typedef enum OptrelayPolicyKind {
  OPTRELAY_POLICY_KIND_OPTIMUM = 0,
  OPTRELAY_POLICY_KIND_MID_POINT = 1,
  OPTRELAY_POLICY_KIND_CLOSEST_TO_DESTINATION = 2,
  OPTRELAY_POLICY_KIND_CLOSEST_TO_SOURCE = 3,
  /**
   * Uses `OptrelayPolicy::threshold`.
   */
  OPTRELAY_POLICY_KIND_THRESHOLD_FEEDBACK = 4,
} OptrelayPolicyKind;

typedef enum OptrelayStatus {
  OPTRELAY_STATUS_OK = 0,
  OPTRELAY_STATUS_NULL_POINTER = 1,
  OPTRELAY_STATUS_PARAMETER = 2,
  OPTRELAY_STATUS_DOMAIN = 3,
  OPTRELAY_STATUS_BRACKET = 4,
  OPTRELAY_STATUS_NUMERIC = 5,
  OPTRELAY_STATUS_UNSUPPORTED = 6,
  OPTRELAY_STATUS_EMPTY_FIELD = 7,
  OPTRELAY_STATUS_OUT_OF_RANGE = 8,
  OPTRELAY_STATUS_PANIC = 9,
} OptrelayStatus;

/**
 * Opaque batch of simulated trials.
 */
typedef struct OptrelayBatch OptrelayBatch;

/**
 * Opaque cdf/pdf evaluator.
 */
typedef struct OptrelayEvaluator OptrelayEvaluator;

typedef struct OptrelayPolicy {
  enum OptrelayPolicyKind kind;
  double threshold;
} OptrelayPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length, or 0 when none is set.
 */
size_t optrelay_last_error(char *buf, size_t len);

/**
 * ŝ at (x, y) for terminals at (∓d, 0).
 */
enum OptrelayStatus optrelay_selection_metric(double x, double y, double d, double *out);

enum OptrelayStatus optrelay_evaluator_new(enum OptrelayLaw law,
                                           double lambda,
                                           double d,
                                           double p1,
                                           double p2,
                                           struct OptrelayEvaluator **out);

enum OptrelayStatus optrelay_evaluator_cdf(const struct OptrelayEvaluator *ev,
                                           double x,
                                           double *out);

enum OptrelayStatus optrelay_evaluator_pdf(const struct OptrelayEvaluator *ev,
                                           double x,
                                           double *out);

/**
 * Average rate under the evaluator's CQI law with G(x) = x^−α.
 */
enum OptrelayStatus optrelay_evaluator_average_rate(const struct OptrelayEvaluator *ev,
                                                    double snr,
                                                    double alpha,
                                                    enum OptrelayFading fad,
                                                    double *out);

/**
 * Releases an evaluator. Null is ignored.
 */
void optrelay_evaluator_free(struct OptrelayEvaluator *ev);

enum OptrelayStatus optrelay_outage(double rho,
                                    double lambda,
                                    double d,
                                    double snr,
                                    double alpha,
                                    enum OptrelayFading fad,
                                    double *out);

enum OptrelayStatus optrelay_mean_feedback_load(double t, double lambda, double d, double *out);

enum OptrelayStatus optrelay_threshold_for_load(double mu, double lambda, double d, double *out);

enum OptrelayStatus optrelay_s_star(double rho, double *out);

enum OptrelayStatus optrelay_prob_mid_optimal(double lambda, double d, double *out);

enum OptrelayStatus optrelay_prob_sufficient(double lambda, double d, double *out);

/**
 * Simulates `n_trials` HPPP fields of intensity `lambda` on a disc of radius
 * `tau` (default window when `tau <= 0`) and applies each policy.
 */
enum OptrelayStatus optrelay_batch_run(double lambda,
                                       double d,
                                       double tau,
                                       const struct OptrelayPolicy *policies,
                                       size_t n_policies,
                                       size_t n_trials,
                                       uint64_t seed,
                                       struct OptrelayBatch **out);

enum OptrelayStatus optrelay_batch_len(const struct OptrelayBatch *batch, size_t *out);

/**
 * CQI of policy `policy` in trial `trial`; +inf when nothing was selected.
 */
enum OptrelayStatus optrelay_batch_gamma(const struct OptrelayBatch *batch,
                                         size_t trial,
                                         size_t policy,
                                         double *out);

/**
 * Feedback count of trial `trial` (relay count without a threshold policy).
 */
enum OptrelayStatus optrelay_batch_n_feedback(const struct OptrelayBatch *batch,
                                              size_t trial,
                                              size_t *out);

/**
 * Releases a batch. Null is ignored.
 */
void optrelay_batch_free(struct OptrelayBatch *batch);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPTRELAY_H */
