#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "core/dataset.hpp"
#include "core/learner.hpp"

namespace bnpmle {

//! Full fit specification: which weak learner family with which
//! hyperparameters, and how many boosting iterations to run.
struct FitConfig {
  LearnerSpec learner;
  int iterations = 200;
  bool record_trace = false;
};

//! Snapshot taken after each boosting iteration (and once for the flat start):
//! the exact log-likelihood, its surrogate, and the normalizing constant.
struct TraceEntry {
  double log_lik = 0.0;
  double surrogate = 0.0;
  double z = 0.0;
};

//! A fitted density estimate. The log-potential f is the sum of the fitted
//! learners, the density is exp(f(x)) / z on the support [knots.front(),
//! knots.back()], and z = sum_i a_i exp(f(x_i)).
//!
//! `f_knots` and `weights` are caches that any constructor recomputes from
//! the learners; they are not part of the persisted state.
struct Ensemble {
  Dataset data;
  QuadratureWeights quad;
  LearnerSpec spec;  // resolved: bandwidth filled in when it was automatic
  std::shared_ptr<const std::vector<double>> knots;
  std::vector<FittedLearner> learners;
  double normalizer = 0.0;
  std::vector<double> f_knots;
  std::vector<double> weights;  // a_i exp(f(x_i)), the next iteration's omega
  std::vector<TraceEntry> trace;  // empty unless the fit recorded one

  size_t iterations() const { return learners.size(); }
  double support_lo() const { return data.support_lo(); }
  double support_hi() const { return data.support_hi(); }

  double log_potential(double x) const;
  //! Density at x; throws Error{out_of_support} outside the knot range.
  double density(double x) const;
  //! Density at x, zero outside the knot range.
  double density_or_zero(double x) const;
};

//! Run the boosting loop on an already deduplicated dataset. For the kernel
//! learner the bandwidth must be explicit here (the automatic rule needs the
//! raw sample); use the RawSamples overload to get it resolved.
Ensemble fit_boosted(const Dataset& data, const QuadratureWeights& quad,
                     const FitConfig& config);

//! Convenience entry point from a raw sample: deduplicates, builds trapezoid
//! weights, resolves an automatic kernel bandwidth from the raw values, and
//! fits.
Ensemble fit_boosted(const RawSamples& raw, const FitConfig& config);

//! The ensemble made of the first m learners (1 <= m <= iterations), with the
//! caches and normalizer rebuilt. Because iteration m+1 never alters the
//! learners before it, this reproduces the fit that would have stopped at m,
//! down to the last bit.
Ensemble truncate_ensemble(const Ensemble& full, size_t m);

//! Recompute f_knots, weights, and the normalizer from the learners. Uses the
//! same evaluation routines as the fitting loop so the results are
//! bit-identical to a fresh fit; shared by truncation and deserialization.
void refresh_ensemble_caches(Ensemble& ens);

//! Evaluates growing prefixes of an ensemble on a fixed grid, reusing the
//! grid-by-centers kernel matrix across learners. advance_to(m) returns the
//! log-potential of the first m learners and may only move forward.
class GridEvaluator {
 public:
  GridEvaluator(const Ensemble& ens, std::vector<double> grid);

  const std::vector<double>& grid() const { return grid_; }
  const Eigen::VectorXd& advance_to(size_t m);

 private:
  const Ensemble& ens_;
  std::vector<double> grid_;
  std::optional<Eigen::MatrixXd> cross_kernel_;
  Eigen::VectorXd f_;
  size_t pos_ = 0;
};

//! Equally spaced grid of `points` values covering [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, size_t points);

} // namespace bnpmle
