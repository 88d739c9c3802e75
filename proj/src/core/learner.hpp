#pragma once

#include <memory>
#include <variant>
#include <vector>

namespace bnpmle {

enum class LearnerKind { smooth_spline, gaussian_kernel, cart };

//! Hyperparameters of one weak learner family. Only the fields relevant to
//! `kind` are consulted. The defaults are the ones the estimator is built
//! around: df=3, lambda=1e4, minsplit=30, bandwidth chosen by Silverman's rule.
struct LearnerSpec {
  LearnerKind kind = LearnerKind::smooth_spline;
  double df = 3.0;            // spline: target trace of the smoother matrix, in [2, n]
  double ridge_lambda = 1e4;  // kernel: L2 penalty on the non-intercept coefficients
  double bandwidth = 0.0;     // kernel: Gaussian width; <= 0 requests Silverman's rule
  int minsplit = 30;          // cart: minimum node size for a split attempt
};

//! Weighted natural cubic smoothing spline in value/second-derivative form;
//! d2 is zero at both boundary knots. Evaluation outside the knot range is
//! linear with the boundary slope.
struct SplineLearner {
  std::shared_ptr<const std::vector<double>> x;  // shared knot abscissas
  std::vector<double> values;
  std::vector<double> d2;
};

//! Gaussian kernel expansion b(x) = intercept + sum_j coef_j k(x, c_j) with
//! k(x, c) = exp(-(x-c)^2 / (2 h^2)); centers are the dataset knots.
struct KernelLearner {
  std::shared_ptr<const std::vector<double>> centers;
  double bandwidth = 1.0;
  double intercept = 0.0;
  std::vector<double> coef;
};

//! Binary regression tree node; leaves have left == -1 and carry the value.
struct CartNode {
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
};

//! Piecewise-constant tree over the knot axis; node 0 is the root.
struct CartLearner {
  std::vector<CartNode> nodes;
};

using FittedLearner = std::variant<SplineLearner, KernelLearner, CartLearner>;

double predict(const SplineLearner& s, double x);
double predict(const KernelLearner& k, double x);
double predict(const CartLearner& c, double x);
double predict(const FittedLearner& learner, double x);

} // namespace bnpmle
