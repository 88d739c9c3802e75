/* boostnpmle — boosted nonparametric maximum likelihood density estimation.
 *
 * A density on the range of an i.i.d. sample is represented as
 * exp(f(x)) / Z, where the log-potential f is grown additively by gradient
 * boosting with smoothing-constrained weak learners (smoothing splines,
 * Gaussian kernel ridge expansions, or shallow regression trees), and Z
 * normalizes against a trapezoid quadrature on the observed support.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads concurrently, one handle must not. Functions returning
 * bnp_status report failure details through bnp_last_error(), which is
 * thread-local. Out-pointers are written only on BNP_OK unless stated
 * otherwise.
 */

#ifndef BOOSTNPMLE_H
#define BOOSTNPMLE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BNP_API __declspec(dllexport)
#else
#define BNP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bnp_status {
  BNP_OK = 0,
  BNP_ERR_INVALID_ARGUMENT = 1,  /* bad parameter or configuration value */
  BNP_ERR_INVALID_INPUT = 2,     /* malformed data or model file */
  BNP_ERR_DEGENERATE_SUPPORT = 3, /* sample with fewer than two distinct values */
  BNP_ERR_INFEASIBLE = 4,        /* configuration incompatible with the data */
  BNP_ERR_NUMERIC = 5,           /* overflow, underflow, or solver failure */
  BNP_ERR_IO = 6,                /* file system failure */
  BNP_ERR_OUT_OF_SUPPORT = 7,    /* evaluation outside the fitted support */
  BNP_ERR_INTERNAL = 8           /* unexpected exception; please report */
} bnp_status;

typedef enum bnp_learner_kind {
  BNP_LEARNER_SPLINE = 0, /* weighted natural cubic smoothing spline */
  BNP_LEARNER_KERNEL = 1, /* Gaussian kernel ridge expansion */
  BNP_LEARNER_CART = 2    /* piecewise-constant regression tree */
} bnp_learner_kind;

/* Opaque handles. Destroy functions accept NULL. */
typedef struct bnp_samples bnp_samples;           /* raw sample */
typedef struct bnp_model bnp_model;               /* fitted density */
typedef struct bnp_sweep bnp_sweep;               /* replicated KL study */
typedef struct bnp_labeled bnp_labeled;           /* labeled sample */
typedef struct bnp_bayes bnp_bayes;               /* plug-in classifier */
typedef struct bnp_split_result bnp_split_result; /* split experiment */

/* Fit configuration. Initialize with bnp_fit_config_init, then override.
 * Fields irrelevant to the chosen learner are ignored. */
typedef struct bnp_fit_config {
  bnp_learner_kind learner;
  double df;           /* spline: target degrees of freedom (default 3) */
  double ridge_lambda; /* kernel: L2 penalty (default 1e4) */
  double bandwidth;    /* kernel: Gaussian width; <= 0 selects Silverman's
                        * rule from the raw sample (default 0) */
  int minsplit;        /* tree: minimum node size to attempt a split
                        * (default 30) */
  int iterations;      /* boosting rounds M >= 1 (default 200) */
  int record_trace;    /* nonzero: keep per-iteration likelihood/normalizer */
} bnp_fit_config;

BNP_API void bnp_fit_config_init(bnp_fit_config* config);

BNP_API const char* bnp_version(void);
BNP_API const char* bnp_status_name(bnp_status status);

/* Message of the most recent failure on the calling thread ("" before any). */
BNP_API const char* bnp_last_error(void);

/* ---------------------------------------------------------------- samples */

BNP_API bnp_status bnp_samples_create(const double* values, size_t count,
                                      bnp_samples** out);

/* Single numeric column; has_header nonzero skips the first line. */
BNP_API bnp_status bnp_samples_from_csv(const char* path, int has_header,
                                        bnp_samples** out);

/* Draw `count` values from a named distribution. Accepted forms:
 * "uniform(lo,hi)", "exponential(rate)",
 * "laplace-mixture(w,loc1,scale1,loc2,scale2)", "student-t(nu)",
 * "gmm(beta,mu1,mu2,variance)". A bare name or a shorter parameter list
 * keeps the remaining defaults. */
BNP_API bnp_status bnp_samples_simulate(const char* distribution, size_t count,
                                        uint64_t seed, bnp_samples** out);

BNP_API size_t bnp_samples_count(const bnp_samples* samples);

/* Copy all values into `out`, which must hold bnp_samples_count entries. */
BNP_API bnp_status bnp_samples_copy(const bnp_samples* samples, double* out);

/* Silverman's rule-of-thumb Gaussian bandwidth for the sample. */
BNP_API bnp_status bnp_silverman_bandwidth(const bnp_samples* samples,
                                           double* out);

BNP_API void bnp_samples_destroy(bnp_samples* samples);

/* ---------------------------------------------------------------- fitting */

BNP_API bnp_status bnp_fit(const bnp_samples* samples,
                           const bnp_fit_config* config, bnp_model** out);

BNP_API size_t bnp_model_iterations(const bnp_model* model);
BNP_API size_t bnp_model_knot_count(const bnp_model* model);
BNP_API bnp_status bnp_model_support(const bnp_model* model, double* lo,
                                     double* hi);

/* Normalizing constant Z = sum_i a_i exp(f(x_i)). */
BNP_API double bnp_model_normalizer(const bnp_model* model);

/* Resolved kernel bandwidth; 0 for non-kernel models. */
BNP_API double bnp_model_bandwidth(const bnp_model* model);

/* Exact log-likelihood of the model on its own knots. */
BNP_API bnp_status bnp_model_log_likelihood(const bnp_model* model,
                                            double* out);

/* Surrogate likelihood (the lower-bound objective the boosting rounds
 * maximize) at the model's final log-potential. */
BNP_API bnp_status bnp_model_surrogate(const bnp_model* model, double* out);

BNP_API bnp_status bnp_model_log_potential(const bnp_model* model, double x,
                                           double* out);

/* Density at x; BNP_ERR_OUT_OF_SUPPORT outside the fitted support. */
BNP_API bnp_status bnp_model_density(const bnp_model* model, double x,
                                     double* out);

/* Density at x, taken as zero outside the fitted support. */
BNP_API bnp_status bnp_model_density_or_zero(const bnp_model* model, double x,
                                             double* out);

/* Density at `count` points in one pass (zero outside the support). This is
 * the batch path: repeated calls with the same points reproduce results bit
 * for bit, including across save/load. */
BNP_API bnp_status bnp_model_eval_grid(const bnp_model* model,
                                       const double* points, size_t count,
                                       double* density_out);

/* Recorded per-iteration trace: entry 0 is the flat start f = 0, entry m the
 * state after iteration m. Size 0 when the fit did not record one. */
BNP_API size_t bnp_model_trace_size(const bnp_model* model);
BNP_API bnp_status bnp_model_trace_entry(const bnp_model* model, size_t index,
                                         double* log_lik, double* surrogate,
                                         double* z);

/* New model from the first m learners (1 <= m <= iterations). Reproduces the
 * fit that would have stopped at m exactly. */
BNP_API bnp_status bnp_model_truncate(const bnp_model* model, size_t m,
                                      bnp_model** out);

BNP_API bnp_status bnp_model_save(const bnp_model* model, const char* path);
BNP_API bnp_status bnp_model_load(const char* path, bnp_model** out);
BNP_API void bnp_model_destroy(bnp_model* model);

/* ------------------------------------------------------------- divergence */

/* KL(p || p_hat) for a named true density p, by trapezoid quadrature on an
 * equally spaced grid of grid_points over the fitted support. The mass of p
 * outside that support is reported separately in truncated_mass (either
 * out-pointer may be NULL). */
BNP_API bnp_status bnp_kl_divergence(const bnp_model* model,
                                     const char* distribution,
                                     size_t grid_points, double* kl,
                                     double* truncated_mass);

/* Replicated study: replicate r draws sample_size values with seed
 * base_seed + r, fits with `config` run to the largest prefix, and measures
 * KL at each prefix (strictly increasing iteration counts). config->
 * iterations is ignored; config->record_trace is implied. */
BNP_API bnp_status bnp_kl_sweep(const char* distribution, size_t sample_size,
                                const size_t* prefixes, size_t prefix_count,
                                size_t replicates, uint64_t base_seed,
                                const bnp_fit_config* config,
                                size_t grid_points, bnp_sweep** out);

BNP_API size_t bnp_sweep_replicates(const bnp_sweep* sweep);
BNP_API size_t bnp_sweep_prefix_count(const bnp_sweep* sweep);
BNP_API bnp_status bnp_sweep_prefix(const bnp_sweep* sweep, size_t index,
                                    size_t* out);
BNP_API bnp_status bnp_sweep_cell(const bnp_sweep* sweep, size_t replicate,
                                  size_t prefix_index, double* kl,
                                  double* truncated_mass);
BNP_API bnp_status bnp_sweep_aggregate(const bnp_sweep* sweep,
                                       size_t prefix_index, double* mean_kl,
                                       double* sd_kl);
BNP_API void bnp_sweep_destroy(bnp_sweep* sweep);

/* ---------------------------------------------------------- classification */

BNP_API bnp_status bnp_labeled_create(const double* values, const int* labels,
                                      size_t count, bnp_labeled** out);

/* CSV with a header row; picks one numeric column and one integer label
 * column by name. */
BNP_API bnp_status bnp_labeled_from_csv(const char* path,
                                        const char* value_column,
                                        const char* label_column,
                                        bnp_labeled** out);

BNP_API size_t bnp_labeled_count(const bnp_labeled* data);
BNP_API void bnp_labeled_destroy(bnp_labeled* data);

/* Plug-in Bayes classifier: training-frequency priors, one boosted density
 * per class, prediction by maximal prior * density. */
BNP_API bnp_status bnp_bayes_fit(const bnp_labeled* data,
                                 const bnp_fit_config* config,
                                 bnp_bayes** out);

BNP_API size_t bnp_bayes_class_count(const bnp_bayes* model);
BNP_API bnp_status bnp_bayes_class_info(const bnp_bayes* model, size_t index,
                                        int* label, double* prior);
BNP_API bnp_status bnp_bayes_predict(const bnp_bayes* model, double x,
                                     int* label_out);
BNP_API void bnp_bayes_destroy(bnp_bayes* model);

/* Repeated random-split evaluation: split s shuffles with seed base_seed + s
 * and trains on the first floor(train_fraction * n) rows. Splits whose
 * training half cannot support a model are recorded as skipped with a
 * reason; fails only if every split is skipped. */
BNP_API bnp_status bnp_split_experiment(const bnp_labeled* data,
                                        const bnp_fit_config* config,
                                        size_t splits, double train_fraction,
                                        uint64_t base_seed,
                                        bnp_split_result** out);

BNP_API size_t bnp_split_count(const bnp_split_result* result);
BNP_API bnp_status bnp_split_outcome(const bnp_split_result* result,
                                     size_t index, int* skipped,
                                     double* error_rate, size_t* test_count,
                                     size_t* errors);

/* Skip reason for split `index` ("" when it ran); the pointer stays valid as
 * long as the result handle lives. NULL on a bad index. */
BNP_API const char* bnp_split_note(const bnp_split_result* result,
                                   size_t index);

BNP_API bnp_status bnp_split_summary(const bnp_split_result* result,
                                     size_t* used, double* mean_error,
                                     double* sd_error);
BNP_API void bnp_split_result_destroy(bnp_split_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BOOSTNPMLE_H */
