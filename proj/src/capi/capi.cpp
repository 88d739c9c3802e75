#include "boostnpmle.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "core/bayes.hpp"
#include "core/boosting.hpp"
#include "core/dataset.hpp"
#include "core/distributions.hpp"
#include "core/error.hpp"
#include "core/kernel_ridge.hpp"
#include "core/kl.hpp"
#include "core/likelihood.hpp"
#include "core/model_io.hpp"
#include "core/rng.hpp"

// Handle definitions: each public handle wraps exactly one core object.
struct bnp_samples {
  bnpmle::RawSamples raw;
};
struct bnp_model {
  bnpmle::Ensemble ens;
};
struct bnp_sweep {
  bnpmle::SweepResult result;
};
struct bnp_labeled {
  bnpmle::LabeledDataset data;
};
struct bnp_bayes {
  bnpmle::BayesModel model;
};
struct bnp_split_result {
  bnpmle::SplitExperimentResult result;
};

namespace {

// Keep in sync with the CMake project version.
constexpr const char* kVersion = "0.1.0";

thread_local std::string t_last_error;

bnp_status fail(bnp_status code, const char* message) {
  t_last_error = message;
  return code;
}

bnp_status map_error(const bnpmle::Error& e) {
  t_last_error = e.what();
  switch (e.code()) {
    case bnpmle::ErrorCode::invalid_argument: return BNP_ERR_INVALID_ARGUMENT;
    case bnpmle::ErrorCode::invalid_input: return BNP_ERR_INVALID_INPUT;
    case bnpmle::ErrorCode::degenerate_support:
      return BNP_ERR_DEGENERATE_SUPPORT;
    case bnpmle::ErrorCode::infeasible: return BNP_ERR_INFEASIBLE;
    case bnpmle::ErrorCode::numeric: return BNP_ERR_NUMERIC;
    case bnpmle::ErrorCode::io: return BNP_ERR_IO;
    case bnpmle::ErrorCode::out_of_support: return BNP_ERR_OUT_OF_SUPPORT;
  }
  return BNP_ERR_INTERNAL;
}

//! Every entry point funnels through here: exceptions never cross the
//! library boundary, they become status codes plus a thread-local message.
template <typename Fn>
bnp_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const bnpmle::Error& e) {
    return map_error(e);
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return BNP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return BNP_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown exception";
    return BNP_ERR_INTERNAL;
  }
}

bnpmle::FitConfig to_core_config(const bnp_fit_config& c) {
  bnpmle::FitConfig out;
  switch (c.learner) {
    case BNP_LEARNER_SPLINE:
      out.learner.kind = bnpmle::LearnerKind::smooth_spline;
      break;
    case BNP_LEARNER_KERNEL:
      out.learner.kind = bnpmle::LearnerKind::gaussian_kernel;
      break;
    case BNP_LEARNER_CART:
      out.learner.kind = bnpmle::LearnerKind::cart;
      break;
    default:
      throw bnpmle::Error(bnpmle::ErrorCode::invalid_argument,
                          "config: unknown learner kind");
  }
  out.learner.df = c.df;
  out.learner.ridge_lambda = c.ridge_lambda;
  out.learner.bandwidth = c.bandwidth;
  out.learner.minsplit = c.minsplit;
  out.iterations = c.iterations;
  out.record_trace = c.record_trace != 0;
  return out;
}

} // namespace

extern "C" {

void bnp_fit_config_init(bnp_fit_config* config) {
  if (!config) return;
  config->learner = BNP_LEARNER_SPLINE;
  config->df = 3.0;
  config->ridge_lambda = 1e4;
  config->bandwidth = 0.0;
  config->minsplit = 30;
  config->iterations = 200;
  config->record_trace = 0;
}

const char* bnp_version(void) { return kVersion; }

const char* bnp_status_name(bnp_status status) {
  switch (status) {
    case BNP_OK: return "ok";
    case BNP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case BNP_ERR_INVALID_INPUT: return "invalid-input";
    case BNP_ERR_DEGENERATE_SUPPORT: return "degenerate-support";
    case BNP_ERR_INFEASIBLE: return "infeasible";
    case BNP_ERR_NUMERIC: return "numeric";
    case BNP_ERR_IO: return "io";
    case BNP_ERR_OUT_OF_SUPPORT: return "out-of-support";
    case BNP_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* bnp_last_error(void) { return t_last_error.c_str(); }

/* ---------------------------------------------------------------- samples */

bnp_status bnp_samples_create(const double* values, size_t count,
                              bnp_samples** out) {
  if (!out || (!values && count > 0)) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "samples_create: null argument");
  }
  return guarded([&] {
    auto handle = new bnp_samples{
        bnpmle::RawSamples{std::vector<double>(values, values + count)}};
    *out = handle;
    return BNP_OK;
  });
}

bnp_status bnp_samples_from_csv(const char* path, int has_header,
                                bnp_samples** out) {
  if (!out || !path) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "samples_from_csv: null argument");
  }
  return guarded([&] {
    auto raw = bnpmle::read_numeric_csv(path, has_header != 0);
    *out = new bnp_samples{std::move(raw)};
    return BNP_OK;
  });
}

bnp_status bnp_samples_simulate(const char* distribution, size_t count,
                                uint64_t seed, bnp_samples** out) {
  if (!out || !distribution) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "samples_simulate: null argument");
  }
  return guarded([&] {
    const bnpmle::Distribution dist =
        bnpmle::parse_distribution(distribution);
    bnpmle::Rng rng(seed);
    *out = new bnp_samples{
        bnpmle::RawSamples{bnpmle::sample_n(dist, rng, count)}};
    return BNP_OK;
  });
}

size_t bnp_samples_count(const bnp_samples* samples) {
  return samples ? samples->raw.count() : 0;
}

bnp_status bnp_samples_copy(const bnp_samples* samples, double* out) {
  if (!samples || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "samples_copy: null argument");
  }
  std::copy(samples->raw.values.begin(), samples->raw.values.end(), out);
  return BNP_OK;
}

bnp_status bnp_silverman_bandwidth(const bnp_samples* samples, double* out) {
  if (!samples || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "silverman_bandwidth: null argument");
  }
  return guarded([&] {
    *out = bnpmle::silverman_bandwidth(samples->raw.values);
    return BNP_OK;
  });
}

void bnp_samples_destroy(bnp_samples* samples) { delete samples; }

/* ---------------------------------------------------------------- fitting */

bnp_status bnp_fit(const bnp_samples* samples, const bnp_fit_config* config,
                   bnp_model** out) {
  if (!samples || !config || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "fit: null argument");
  }
  return guarded([&] {
    *out = new bnp_model{
        bnpmle::fit_boosted(samples->raw, to_core_config(*config))};
    return BNP_OK;
  });
}

size_t bnp_model_iterations(const bnp_model* model) {
  return model ? model->ens.iterations() : 0;
}

size_t bnp_model_knot_count(const bnp_model* model) {
  return model ? model->ens.data.size() : 0;
}

bnp_status bnp_model_support(const bnp_model* model, double* lo, double* hi) {
  if (!model || !lo || !hi) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_support: null argument");
  }
  *lo = model->ens.support_lo();
  *hi = model->ens.support_hi();
  return BNP_OK;
}

double bnp_model_normalizer(const bnp_model* model) {
  return model ? model->ens.normalizer : 0.0;
}

double bnp_model_bandwidth(const bnp_model* model) {
  if (!model) return 0.0;
  return model->ens.spec.kind == bnpmle::LearnerKind::gaussian_kernel
             ? model->ens.spec.bandwidth
             : 0.0;
}

bnp_status bnp_model_log_likelihood(const bnp_model* model, double* out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_log_likelihood: null argument");
  }
  return guarded([&] {
    *out = bnpmle::log_likelihood(model->ens.data, model->ens.quad,
                                  model->ens.f_knots);
    return BNP_OK;
  });
}

bnp_status bnp_model_surrogate(const bnp_model* model, double* out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_surrogate: null argument");
  }
  return guarded([&] {
    *out = bnpmle::surrogate(model->ens.data, model->ens.quad,
                             model->ens.f_knots);
    return BNP_OK;
  });
}

bnp_status bnp_model_log_potential(const bnp_model* model, double x,
                                   double* out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_log_potential: null argument");
  }
  return guarded([&] {
    *out = model->ens.log_potential(x);
    return BNP_OK;
  });
}

bnp_status bnp_model_density(const bnp_model* model, double x, double* out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_density: null argument");
  }
  return guarded([&] {
    *out = model->ens.density(x);
    return BNP_OK;
  });
}

bnp_status bnp_model_density_or_zero(const bnp_model* model, double x,
                                     double* out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_density_or_zero: null argument");
  }
  return guarded([&] {
    *out = model->ens.density_or_zero(x);
    return BNP_OK;
  });
}

bnp_status bnp_model_eval_grid(const bnp_model* model, const double* points,
                               size_t count, double* density_out) {
  if (!model || (count > 0 && (!points || !density_out))) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_eval_grid: null argument");
  }
  return guarded([&] {
    const bnpmle::Ensemble& ens = model->ens;
    bnpmle::GridEvaluator eval(ens,
                               std::vector<double>(points, points + count));
    const Eigen::VectorXd& f = eval.advance_to(ens.iterations());
    for (size_t i = 0; i < count; ++i) {
      const double x = points[i];
      density_out[i] =
          (x < ens.support_lo() || x > ens.support_hi())
              ? 0.0
              : std::exp(f[static_cast<Eigen::Index>(i)]) / ens.normalizer;
    }
    return BNP_OK;
  });
}

size_t bnp_model_trace_size(const bnp_model* model) {
  return model ? model->ens.trace.size() : 0;
}

bnp_status bnp_model_trace_entry(const bnp_model* model, size_t index,
                                 double* log_lik, double* surrogate,
                                 double* z) {
  if (!model) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_trace_entry: null argument");
  }
  if (index >= model->ens.trace.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_trace_entry: index out of range");
  }
  const bnpmle::TraceEntry& entry = model->ens.trace[index];
  if (log_lik) *log_lik = entry.log_lik;
  if (surrogate) *surrogate = entry.surrogate;
  if (z) *z = entry.z;
  return BNP_OK;
}

bnp_status bnp_model_truncate(const bnp_model* model, size_t m,
                              bnp_model** out) {
  if (!model || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_truncate: null argument");
  }
  return guarded([&] {
    *out = new bnp_model{bnpmle::truncate_ensemble(model->ens, m)};
    return BNP_OK;
  });
}

bnp_status bnp_model_save(const bnp_model* model, const char* path) {
  if (!model || !path) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_save: null argument");
  }
  return guarded([&] {
    bnpmle::save_model(model->ens, path);
    return BNP_OK;
  });
}

bnp_status bnp_model_load(const char* path, bnp_model** out) {
  if (!path || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "model_load: null argument");
  }
  return guarded([&] {
    *out = new bnp_model{bnpmle::load_model(path)};
    return BNP_OK;
  });
}

void bnp_model_destroy(bnp_model* model) { delete model; }

/* ------------------------------------------------------------- divergence */

bnp_status bnp_kl_divergence(const bnp_model* model, const char* distribution,
                             size_t grid_points, double* kl,
                             double* truncated_mass) {
  if (!model || !distribution) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "kl_divergence: null argument");
  }
  return guarded([&] {
    const bnpmle::KlResult r = bnpmle::kl_divergence(
        bnpmle::parse_distribution(distribution), model->ens, grid_points);
    if (kl) *kl = r.kl;
    if (truncated_mass) *truncated_mass = r.truncated_mass;
    return BNP_OK;
  });
}

bnp_status bnp_kl_sweep(const char* distribution, size_t sample_size,
                        const size_t* prefixes, size_t prefix_count,
                        size_t replicates, uint64_t base_seed,
                        const bnp_fit_config* config, size_t grid_points,
                        bnp_sweep** out) {
  if (!distribution || !prefixes || prefix_count == 0 || !config || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "kl_sweep: null argument");
  }
  return guarded([&] {
    bnpmle::SweepConfig sc;
    sc.truth = bnpmle::parse_distribution(distribution);
    sc.sample_size = sample_size;
    sc.prefixes.assign(prefixes, prefixes + prefix_count);
    sc.replicates = replicates;
    sc.base_seed = base_seed;
    sc.learner = to_core_config(*config).learner;
    sc.grid_points = grid_points;
    *out = new bnp_sweep{bnpmle::kl_sweep(sc)};
    return BNP_OK;
  });
}

size_t bnp_sweep_replicates(const bnp_sweep* sweep) {
  return sweep ? sweep->result.rows.size() : 0;
}

size_t bnp_sweep_prefix_count(const bnp_sweep* sweep) {
  return sweep ? sweep->result.prefixes.size() : 0;
}

bnp_status bnp_sweep_prefix(const bnp_sweep* sweep, size_t index,
                            size_t* out) {
  if (!sweep || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_prefix: null argument");
  }
  if (index >= sweep->result.prefixes.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_prefix: index out of range");
  }
  *out = sweep->result.prefixes[index];
  return BNP_OK;
}

bnp_status bnp_sweep_cell(const bnp_sweep* sweep, size_t replicate,
                          size_t prefix_index, double* kl,
                          double* truncated_mass) {
  if (!sweep) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_cell: null argument");
  }
  if (replicate >= sweep->result.rows.size() ||
      prefix_index >= sweep->result.prefixes.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_cell: index out of range");
  }
  const bnpmle::KlResult& r = sweep->result.rows[replicate][prefix_index];
  if (kl) *kl = r.kl;
  if (truncated_mass) *truncated_mass = r.truncated_mass;
  return BNP_OK;
}

bnp_status bnp_sweep_aggregate(const bnp_sweep* sweep, size_t prefix_index,
                               double* mean_kl, double* sd_kl) {
  if (!sweep) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_aggregate: null argument");
  }
  if (prefix_index >= sweep->result.aggregate.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "sweep_aggregate: index out of range");
  }
  const bnpmle::SweepAggregate& a = sweep->result.aggregate[prefix_index];
  if (mean_kl) *mean_kl = a.mean_kl;
  if (sd_kl) *sd_kl = a.sd_kl;
  return BNP_OK;
}

void bnp_sweep_destroy(bnp_sweep* sweep) { delete sweep; }

/* ---------------------------------------------------------- classification */

bnp_status bnp_labeled_create(const double* values, const int* labels,
                              size_t count, bnp_labeled** out) {
  if (!out || count == 0 || !values || !labels) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "labeled_create: null argument");
  }
  return guarded([&] {
    bnpmle::LabeledDataset data;
    data.values.assign(values, values + count);
    data.labels.assign(labels, labels + count);
    *out = new bnp_labeled{std::move(data)};
    return BNP_OK;
  });
}

bnp_status bnp_labeled_from_csv(const char* path, const char* value_column,
                                const char* label_column, bnp_labeled** out) {
  if (!path || !value_column || !label_column || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "labeled_from_csv: null argument");
  }
  return guarded([&] {
    *out = new bnp_labeled{
        bnpmle::read_labeled_csv(path, value_column, label_column)};
    return BNP_OK;
  });
}

size_t bnp_labeled_count(const bnp_labeled* data) {
  return data ? data->data.size() : 0;
}

void bnp_labeled_destroy(bnp_labeled* data) { delete data; }

bnp_status bnp_bayes_fit(const bnp_labeled* data, const bnp_fit_config* config,
                         bnp_bayes** out) {
  if (!data || !config || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "bayes_fit: null argument");
  }
  return guarded([&] {
    *out = new bnp_bayes{
        bnpmle::fit_bayes(data->data, to_core_config(*config))};
    return BNP_OK;
  });
}

size_t bnp_bayes_class_count(const bnp_bayes* model) {
  return model ? model->model.classes.size() : 0;
}

bnp_status bnp_bayes_class_info(const bnp_bayes* model, size_t index,
                                int* label, double* prior) {
  if (!model) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "bayes_class_info: null argument");
  }
  if (index >= model->model.classes.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "bayes_class_info: index out of range");
  }
  if (label) *label = model->model.classes[index];
  if (prior) *prior = model->model.priors[index];
  return BNP_OK;
}

bnp_status bnp_bayes_predict(const bnp_bayes* model, double x,
                             int* label_out) {
  if (!model || !label_out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "bayes_predict: null argument");
  }
  return guarded([&] {
    *label_out = model->model.predict(x);
    return BNP_OK;
  });
}

void bnp_bayes_destroy(bnp_bayes* model) { delete model; }

bnp_status bnp_split_experiment(const bnp_labeled* data,
                                const bnp_fit_config* config, size_t splits,
                                double train_fraction, uint64_t base_seed,
                                bnp_split_result** out) {
  if (!data || !config || !out) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "split_experiment: null argument");
  }
  return guarded([&] {
    *out = new bnp_split_result{
        bnpmle::split_experiment(data->data, to_core_config(*config), splits,
                                 train_fraction, base_seed)};
    return BNP_OK;
  });
}

size_t bnp_split_count(const bnp_split_result* result) {
  return result ? result->result.splits.size() : 0;
}

bnp_status bnp_split_outcome(const bnp_split_result* result, size_t index,
                             int* skipped, double* error_rate,
                             size_t* test_count, size_t* errors) {
  if (!result) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "split_outcome: null argument");
  }
  if (index >= result->result.splits.size()) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "split_outcome: index out of range");
  }
  const bnpmle::SplitOutcome& o = result->result.splits[index];
  if (skipped) *skipped = o.skipped ? 1 : 0;
  if (error_rate) *error_rate = o.error_rate;
  if (test_count) *test_count = o.test_count;
  if (errors) *errors = o.errors;
  return BNP_OK;
}

const char* bnp_split_note(const bnp_split_result* result, size_t index) {
  if (!result || index >= result->result.splits.size()) return nullptr;
  return result->result.splits[index].note.c_str();
}

bnp_status bnp_split_summary(const bnp_split_result* result, size_t* used,
                             double* mean_error, double* sd_error) {
  if (!result) {
    return fail(BNP_ERR_INVALID_ARGUMENT, "split_summary: null argument");
  }
  if (used) *used = result->result.used;
  if (mean_error) *mean_error = result->result.mean_error;
  if (sd_error) *sd_error = result->result.sd_error;
  return BNP_OK;
}

void bnp_split_result_destroy(bnp_split_result* result) { delete result; }

} // extern "C"
