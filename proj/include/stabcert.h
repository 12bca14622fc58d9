/*
 * stabcert -- black-box certification of algorithmic stability.
 *
 * The library treats a regression algorithm as an opaque fit/predict pair
 * and tests whether a retraining on one fewer point can move predictions by
 * more than epsilon with probability above delta.  Everything is driven
 * from a single 64-bit master seed; identical inputs give byte-identical
 * reports for any worker count.
 *
 * All functions return STAB_OK on success.  On failure they return a status
 * code and leave a human-readable message in stab_last_error() (thread
 * local).  Out-parameters are untouched on failure.  Handles are freed with
 * the matching *_free function; passing NULL to a free function is a no-op.
 */

#ifndef STABCERT_H
#define STABCERT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum stab_status {
  STAB_OK = 0,
  STAB_ERR_INVALID_ARGUMENT = 1,
  STAB_ERR_PARSE = 2,
  STAB_ERR_IO = 3,
  STAB_ERR_DIMENSION_MISMATCH = 4,
  STAB_ERR_INSUFFICIENT_DATA = 5,
  STAB_ERR_UNKNOWN_NAME = 6,
  STAB_ERR_ALGORITHM_FAILURE = 7,
  STAB_ERR_INTERNAL = 8
} stab_status;

typedef struct stab_labeled stab_labeled;      /* (x, y) rows, fixed dim   */
typedef struct stab_unlabeled stab_unlabeled;  /* x rows, fixed dim        */
typedef struct stab_algorithm stab_algorithm;  /* the black box under test */
typedef struct stab_sampler stab_sampler;      /* data distribution        */
typedef struct stab_report stab_report;        /* JSON result document     */

const char* stab_version(void);
const char* stab_status_name(stab_status status);
/* Message for the most recent failure on this thread; empty string if none. */
const char* stab_last_error(void);

/* ------------------------------------------------------------------ */
/* Datasets                                                           */
/* ------------------------------------------------------------------ */

/* CSV layout: header "x1,...,xd,y" (labeled) or "x1,...,xd" (unlabeled),
 * one numeric row per point.  Parse errors name the offending line. */
stab_status stab_labeled_load_csv(const char* path, stab_labeled** out);
stab_status stab_unlabeled_load_csv(const char* path, stab_unlabeled** out);

/* features is row-major count x dim. */
stab_status stab_labeled_from_arrays(const double* features,
                                     const double* labels, int64_t count,
                                     int64_t dim, stab_labeled** out);
stab_status stab_unlabeled_from_arrays(const double* features, int64_t count,
                                       int64_t dim, stab_unlabeled** out);

int64_t stab_labeled_size(const stab_labeled* data);
int64_t stab_labeled_dim(const stab_labeled* data);
int64_t stab_unlabeled_size(const stab_unlabeled* data);
int64_t stab_unlabeled_dim(const stab_unlabeled* data);

void stab_labeled_free(stab_labeled* data);
void stab_unlabeled_free(stab_unlabeled* data);

/* ------------------------------------------------------------------ */
/* Algorithms                                                         */
/* ------------------------------------------------------------------ */

/* Built-in reference algorithms.  params_json is a JSON object (or NULL /
 * "" for none):
 *   "zero"           {}
 *   "knn"            {"k": 3}
 *   "ridge"          {"lambda": 1.0}
 *   "threshold_max"  {"jump": 1.0, "threshold": 0.65}
 *   "coin"           {"q": 0.3, "jump": 1.0}
 */
stab_status stab_algorithm_builtin(const char* name, const char* params_json,
                                   stab_algorithm** out);

/* Plugging in your own algorithm.  The callbacks must be thread-safe (folds
 * and replicates run concurrently) and deterministic in (data, seed); the
 * certification guarantee additionally assumes the fit is symmetric in the
 * training rows.  features is row-major count x dim.  A fit callback
 * returning non-OK aborts the run with STAB_ERR_ALGORITHM_FAILURE. */
typedef stab_status (*stab_fit_fn)(void* ctx, const double* features,
                                   const double* labels, int64_t count,
                                   int64_t dim, uint64_t seed,
                                   void** model_out);
typedef stab_status (*stab_predict_fn)(void* ctx, const void* model,
                                       const double* features, int64_t dim,
                                       double* prediction_out);
typedef void (*stab_model_free_fn)(void* ctx, void* model);

stab_status stab_algorithm_custom(const char* name, stab_fit_fn fit,
                                  stab_predict_fn predict,
                                  stab_model_free_fn model_free, void* ctx,
                                  stab_algorithm** out);

const char* stab_algorithm_name(const stab_algorithm* algorithm);
void stab_algorithm_free(stab_algorithm* algorithm);

/* ------------------------------------------------------------------ */
/* Samplers (for the simulation harness and the adversarial demos)    */
/* ------------------------------------------------------------------ */

/* Built-ins: "uniform_threshold" {"d":1}, "gaussian_linear"
 * {"d":1,"beta":1,"sigma":1}, "heavy_tail" {"d":1,"beta":1,"nu":3}. */
stab_status stab_sampler_builtin(const char* name, const char* params_json,
                                 stab_sampler** out);
void stab_sampler_free(stab_sampler* sampler);

/* ------------------------------------------------------------------ */
/* Numeric one-shots                                                  */
/* ------------------------------------------------------------------ */

/* kappa = min(n_labeled/n, (n_labeled+n_unlabeled)/(n+1)) as an exact
 * fraction num/den (reduced), with fold_count = floor(kappa). */
stab_status stab_kappa(int64_t n, int64_t n_labeled, int64_t n_unlabeled,
                       int64_t* num, int64_t* den, int64_t* fold_count);

/* The unique (k*, a*) with
 * P(Bin(m,delta) < k*) + a* P(Bin(m,delta) = k*) = alpha, a* in (0,1]. */
stab_status stab_critical_values(int64_t m, double delta, double alpha,
                                 int64_t* k_star, double* a_star);

/* 1 = certify.  exceed_count < k* certifies; at k* the tiebreak zeta <= a*
 * decides; above k* declines. */
stab_status stab_decide(int64_t exceed_count, int64_t k_star, double a_star,
                        double zeta, int* decision);

stab_status stab_binomial_cdf(int64_t m, double p, int64_t k, double* out);

/* Acceptance probability of the test against a true exceedance rate
 * delta_star: min(alpha ((1-delta_star)/(1-delta))^m, 1).  regime_asserted
 * reports whether that value is exact (delta_star = 0, or
 * delta <= 1 - alpha^(1/m), or m = 0). */
stab_status stab_power_formula(int64_t m, double delta, double delta_star,
                               double alpha, double* value,
                               int* regime_asserted);

/* Upper confidence bound for the exceedance rate from counts alone.
 * method is "randomized" or "conservative". */
stab_status stab_estimate_delta(int64_t exceed_count, int64_t fold_count,
                                double alpha, const char* method, double zeta,
                                double* out);

/* Upper confidence bound for the threshold from the fold differences;
 * writes +infinity when no finite threshold is certifiable. */
stab_status stab_estimate_eps(const double* deltas, int64_t fold_count,
                              double delta, double alpha, double zeta,
                              double* out);

/* ------------------------------------------------------------------ */
/* Full workflows -> JSON reports                                     */
/* ------------------------------------------------------------------ */

/* seed_mode is "same" (fit and refit share the fold seed; the certified
 * notion) or "independent". */

stab_status stab_run_test(const stab_algorithm* algorithm,
                          const stab_labeled* labeled,
                          const stab_unlabeled* unlabeled, /* may be NULL */
                          double epsilon, double delta, double alpha,
                          int64_t n, uint64_t seed, const char* seed_mode,
                          int shuffle, int workers, stab_report** out);

stab_status stab_run_estimate_delta(const stab_algorithm* algorithm,
                                    const stab_labeled* labeled,
                                    const stab_unlabeled* unlabeled,
                                    double epsilon, double alpha, int64_t n,
                                    uint64_t seed, const char* seed_mode,
                                    const char* method, int shuffle,
                                    int workers, stab_report** out);

stab_status stab_run_estimate_eps(const stab_algorithm* algorithm,
                                  const stab_labeled* labeled,
                                  const stab_unlabeled* unlabeled,
                                  double delta, double alpha, int64_t n,
                                  uint64_t seed, const char* seed_mode,
                                  int shuffle, int workers, stab_report** out);

stab_status stab_run_oracle(const stab_algorithm* algorithm,
                            const stab_sampler* sampler, int64_t n,
                            double epsilon, const char* seed_mode,
                            int64_t replicates, uint64_t seed, int workers,
                            stab_report** out);

/* have_delta_star != 0 adds the closed-form acceptance probability and the
 * universal ceiling for the supplied true rate to the report. */
stab_status stab_run_power(const stab_algorithm* algorithm,
                           const stab_sampler* sampler, int64_t n_labeled,
                           int64_t n_unlabeled, double epsilon, double delta,
                           double alpha, int64_t n, const char* seed_mode,
                           int64_t replicates, uint64_t seed, int workers,
                           int have_delta_star, double delta_star,
                           stab_report** out);

stab_status stab_run_gof(const stab_algorithm* algorithm,
                         const stab_sampler* sampler, int64_t n,
                         int64_t n_labeled, int64_t n_unlabeled,
                         double epsilon, double delta_star,
                         const char* seed_mode, int64_t replicates,
                         uint64_t seed, int workers, stab_report** out);

/* kind is "full_black_box", "labeled_only", "unlabeled_only",
 * "transparent_models", "constrained_models", "indep_seeds" or
 * "coupled_seeds". */
stab_status stab_power_bound(const char* kind, int64_t n, int64_t n_labeled,
                             int64_t n_unlabeled, double alpha, double delta,
                             double delta_star, stab_report** out);

stab_status stab_bound_comparison(int64_t n, int64_t n_labeled,
                                  int64_t n_unlabeled, double alpha,
                                  double delta, double delta_star,
                                  stab_report** out);

/* sentinel_kind is "label" or "feature".  base_rate is the base
 * algorithm's own exceedance rate at epsilon (0 for the built-in "zero"). */
stab_status stab_run_adversary_instability(const stab_algorithm* base,
                                           const stab_sampler* base_sampler,
                                           const char* sentinel_kind,
                                           int64_t n, double c, double epsilon,
                                           double base_rate,
                                           int64_t replicates, uint64_t seed,
                                           int workers, stab_report** out);

stab_status stab_run_adversary_coupling(const stab_sampler* base_sampler,
                                        const char* sentinel_kind,
                                        int64_t n_labeled, int64_t n_unlabeled,
                                        double c, int64_t replicates,
                                        uint64_t seed, int workers,
                                        stab_report** out);

/* method is "bootstrap" or "simulated"; smoothing is "none" or "gaussian"
 * (simulated only).  The resulting report is marked certified=false and can
 * never be turned into a certificate. */
stab_status stab_run_heuristic(const stab_algorithm* algorithm,
                               const stab_labeled* labeled,
                               const stab_unlabeled* unlabeled,
                               const char* method, int64_t n,
                               int64_t replicates, double epsilon,
                               const char* smoothing, double bandwidth,
                               const char* seed_mode, uint64_t seed,
                               int workers, stab_report** out);

/* ------------------------------------------------------------------ */
/* Reports                                                            */
/* ------------------------------------------------------------------ */

/* Borrowed pointer, valid until stab_report_free. */
const char* stab_report_json(const stab_report* report);
void stab_report_free(stab_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* STABCERT_H */
