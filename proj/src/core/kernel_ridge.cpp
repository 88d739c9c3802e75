#include "core/kernel_ridge.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bnpmle {

namespace {

//! Type-7 quantile (the linear-interpolation default of most statistics
//! environments) of an already sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  const double pos = p * static_cast<double>(n - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

double silverman_bandwidth(std::span<const double> values) {
  const size_t n = values.size();
  if (n < 2) {
    throw Error(ErrorCode::degenerate_support,
                "bandwidth: need at least two observations");
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw Error(ErrorCode::degenerate_support,
                "bandwidth: sample has zero spread");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double scale = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * scale * std::pow(static_cast<double>(n), -0.2);
}

Eigen::MatrixXd gaussian_kernel_matrix(std::span<const double> rows,
                                       std::span<const double> centers,
                                       double bandwidth) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  Eigen::MatrixXd k(rows.size(), centers.size());
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    const double c = centers[static_cast<size_t>(j)];
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      const double d = rows[static_cast<size_t>(i)] - c;
      k(i, j) = std::exp(-d * d * inv);
    }
  }
  return k;
}

Eigen::VectorXd evaluate_kernel_learner(const Eigen::MatrixXd& k,
                                        const KernelLearner& learner) {
  const Eigen::Map<const Eigen::VectorXd> coef(
      learner.coef.data(), static_cast<Eigen::Index>(learner.coef.size()));
  return ((k * coef).array() + learner.intercept).matrix();
}

KernelRidgeSolver::KernelRidgeSolver(
    std::shared_ptr<const std::vector<double>> centers, double bandwidth,
    double ridge_lambda)
    : centers_(std::move(centers)),
      bandwidth_(bandwidth),
      ridge_lambda_(ridge_lambda) {
  if (!(bandwidth_ > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "kernel ridge: bandwidth must be positive");
  }
  if (!(ridge_lambda_ >= 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                "kernel ridge: penalty must be nonnegative");
  }
  kernel_ = gaussian_kernel_matrix(*centers_, *centers_, bandwidth_);
}

KernelLearner KernelRidgeSolver::fit(std::span<const double> w,
                                     std::span<const double> g) const {
  const Eigen::Index n = kernel_.rows();
  if (static_cast<Eigen::Index>(w.size()) != n ||
      static_cast<Eigen::Index>(g.size()) != n) {
    throw Error(ErrorCode::invalid_argument,
                "kernel ridge: weight/response length does not match centers");
  }
  Eigen::VectorXd wn(n);
  double wsum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = w[static_cast<size_t>(i)];
    if (!(wi > 0.0) || !std::isfinite(wi)) {
      throw Error(ErrorCode::numeric,
                  "kernel ridge: weights must be positive and finite");
    }
    wsum += wi;
  }
  for (Eigen::Index i = 0; i < n; ++i)
    wn[i] = w[static_cast<size_t>(i)] * static_cast<double>(n) / wsum;
  const Eigen::Map<const Eigen::VectorXd> gv(g.data(), n);

  // Normal equations of the weighted least-squares problem with the intercept
  // as an extra unpenalized column: A = X^T W X + lambda J, J = diag(0, I).
  const Eigen::VectorXd wg = wn.cwiseProduct(gv);
  const Eigen::MatrixXd wk = wn.asDiagonal() * kernel_;
  Eigen::MatrixXd a(n + 1, n + 1);
  a(0, 0) = wn.sum();
  a.block(0, 1, 1, n) = wk.colwise().sum();
  a.block(1, 0, n, 1) = a.block(0, 1, 1, n).transpose();
  a.block(1, 1, n, n).noalias() = kernel_.transpose() * wk;
  a.block(1, 1, n, n).diagonal().array() += ridge_lambda_;
  Eigen::VectorXd rhs(n + 1);
  rhs(0) = wg.sum();
  rhs.tail(n).noalias() = kernel_.transpose() * wg;

  const Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::numeric,
                "kernel ridge: normal equations are not positive definite");
  }
  const Eigen::VectorXd beta = llt.solve(rhs);

  KernelLearner out;
  out.centers = centers_;
  out.bandwidth = bandwidth_;
  out.intercept = beta(0);
  out.coef.assign(beta.data() + 1, beta.data() + 1 + n);
  return out;
}

Eigen::VectorXd KernelRidgeSolver::values_at_centers(
    const KernelLearner& learner) const {
  return evaluate_kernel_learner(kernel_, learner);
}

} // namespace bnpmle
