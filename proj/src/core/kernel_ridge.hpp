#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "core/learner.hpp"

namespace bnpmle {

//! Silverman's rule-of-thumb bandwidth 0.9 * min(sd, IQR/1.34) * N^(-1/5),
//! computed from the raw sample (before deduplication) with the sample
//! standard deviation and type-7 quantiles. Falls back to the standard
//! deviation alone when the IQR is zero; throws Error{degenerate_support}
//! when the sample has no spread at all.
double silverman_bandwidth(std::span<const double> values);

//! Dense Gaussian kernel matrix K[i][j] = exp(-(rows[i]-centers[j])^2/(2h^2)).
Eigen::MatrixXd gaussian_kernel_matrix(std::span<const double> rows,
                                       std::span<const double> centers,
                                       double bandwidth);

//! K * coef + intercept. Every multi-point evaluation of a kernel learner is
//! funneled through this one routine so that refitting, reloading, and
//! truncating an ensemble all reproduce identical floating-point results.
Eigen::VectorXd evaluate_kernel_learner(const Eigen::MatrixXd& k,
                                        const KernelLearner& learner);

//! Weighted ridge regression onto Gaussian kernel features centered at every
//! knot, with an unpenalized intercept:
//!
//!   minimize sum_i w~_i (g_i - b0 - sum_j beta_j K_ij)^2 + lambda ||beta||^2
//!
//! where w~ are the weights scaled to mean one. The kernel matrix depends
//! only on the knots and bandwidth, so it is built once and reused across
//! boosting iterations; each fit solves the (n+1) x (n+1) normal equations.
class KernelRidgeSolver {
 public:
  KernelRidgeSolver(std::shared_ptr<const std::vector<double>> centers,
                    double bandwidth, double ridge_lambda);

  KernelLearner fit(std::span<const double> w, std::span<const double> g) const;

  //! Fitted-learner values at the centers themselves, off the cached matrix.
  Eigen::VectorXd values_at_centers(const KernelLearner& learner) const;

  double bandwidth() const { return bandwidth_; }

 private:
  std::shared_ptr<const std::vector<double>> centers_;
  double bandwidth_;
  double ridge_lambda_;
  Eigen::MatrixXd kernel_;  // n x n Gram block, reused for every iteration
};

} // namespace bnpmle
