#include "core/boosting.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "core/cart.hpp"
#include "core/error.hpp"
#include "core/kernel_ridge.hpp"
#include "core/likelihood.hpp"
#include "core/spline.hpp"

namespace bnpmle {

namespace {

constexpr double kExpArgLimit = 700.0;
constexpr double kWeightFloor = 1e-300;

void validate_config(const FitConfig& config, std::size_t n,
                     bool bandwidth_required) {
  if (config.iterations < 1) {
    throw Error(ErrorCode::invalid_argument,
                "fit: iterations must be at least 1");
  }
  switch (config.learner.kind) {
    case LearnerKind::smooth_spline:
      if (config.learner.df < 2.0 ||
          config.learner.df > static_cast<double>(n)) {
        throw Error(ErrorCode::infeasible,
                    "fit: spline df outside [2, number of knots]");
      }
      break;
    case LearnerKind::gaussian_kernel:
      if (config.learner.ridge_lambda < 0.0) {
        throw Error(ErrorCode::invalid_argument,
                    "fit: ridge penalty must be nonnegative");
      }
      if (bandwidth_required && !(config.learner.bandwidth > 0.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "fit: kernel bandwidth must be given explicitly when "
                    "fitting from a deduplicated dataset");
      }
      break;
    case LearnerKind::cart:
      if (config.learner.minsplit < 2) {
        throw Error(ErrorCode::invalid_argument,
                    "fit: minsplit must be at least 2");
      }
      break;
  }
}

} // namespace

double Ensemble::log_potential(double x) const {
  double f = 0.0;
  for (const FittedLearner& learner : learners) f += predict(learner, x);
  return f;
}

double Ensemble::density(double x) const {
  if (x < support_lo() || x > support_hi()) {
    throw Error(ErrorCode::out_of_support,
                "density: point outside the fitted support");
  }
  return std::exp(log_potential(x)) / normalizer;
}

double Ensemble::density_or_zero(double x) const {
  if (x < support_lo() || x > support_hi()) return 0.0;
  return std::exp(log_potential(x)) / normalizer;
}

void refresh_ensemble_caches(Ensemble& ens) {
  const std::vector<double>& x = *ens.knots;
  const std::size_t n = x.size();
  ens.f_knots.assign(n, 0.0);
  // Kernel learners of one ensemble share centers and bandwidth, so one Gram
  // matrix serves them all; building it with the same routine the fitting
  // loop used keeps the recomputed values bit-identical to the fit's own.
  std::optional<Eigen::MatrixXd> kmat;
  for (const FittedLearner& learner : ens.learners) {
    if (const auto* s = std::get_if<SplineLearner>(&learner)) {
      for (std::size_t i = 0; i < n; ++i) ens.f_knots[i] += s->values[i];
    } else if (const auto* k = std::get_if<KernelLearner>(&learner)) {
      if (!kmat) kmat = gaussian_kernel_matrix(x, *k->centers, k->bandwidth);
      const Eigen::VectorXd v = evaluate_kernel_learner(*kmat, *k);
      for (std::size_t i = 0; i < n; ++i)
        ens.f_knots[i] += v[static_cast<Eigen::Index>(i)];
    } else {
      const auto& c = std::get<CartLearner>(learner);
      for (std::size_t i = 0; i < n; ++i) ens.f_knots[i] += predict(c, x[i]);
    }
  }
  ens.normalizer = normalizer(ens.quad, ens.f_knots);
  ens.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ens.weights[i] = ens.quad.a[i] * std::exp(ens.f_knots[i]);
  }
}

Ensemble fit_boosted(const Dataset& data, const QuadratureWeights& quad,
                     const FitConfig& config) {
  const std::size_t n = data.size();
  if (quad.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "fit: quadrature weight length does not match dataset");
  }
  validate_config(config, n, /*bandwidth_required=*/true);

  Ensemble ens;
  ens.data = data;
  ens.quad = quad;
  ens.spec = config.learner;
  ens.knots = std::make_shared<const std::vector<double>>(data.knots);
  ens.learners.reserve(static_cast<std::size_t>(config.iterations));

  std::vector<double> f(n, 0.0);
  std::vector<double> omega = quad.a;  // omega_1 = a_i e^{f_0} with f_0 = 0
  std::vector<double> g(n);
  std::vector<double> v(n);

  std::optional<KernelRidgeSolver> kernel_solver;
  if (config.learner.kind == LearnerKind::gaussian_kernel) {
    kernel_solver.emplace(ens.knots, ens.spec.bandwidth, ens.spec.ridge_lambda);
  }
  double warm_log10_lambda = 0.0;
  bool have_warm = false;

  if (config.record_trace) {
    ens.trace.reserve(static_cast<std::size_t>(config.iterations) + 1);
    ens.trace.push_back({log_likelihood(data, quad, f),
                         surrogate(data, quad, f), normalizer(quad, f)});
  }

  for (int m = 1; m <= config.iterations; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = (data.freq[i] - omega[i]) / omega[i];
    }
    switch (config.learner.kind) {
      case LearnerKind::smooth_spline: {
        SplineFit sf = fit_spline(ens.knots, omega, g, ens.spec.df,
                                  have_warm ? &warm_log10_lambda : nullptr);
        warm_log10_lambda = sf.log10_lambda;
        have_warm = true;
        v = sf.learner.values;
        ens.learners.emplace_back(std::move(sf.learner));
        break;
      }
      case LearnerKind::gaussian_kernel: {
        KernelLearner kl = kernel_solver->fit(omega, g);
        const Eigen::VectorXd vals = kernel_solver->values_at_centers(kl);
        for (std::size_t i = 0; i < n; ++i)
          v[i] = vals[static_cast<Eigen::Index>(i)];
        ens.learners.emplace_back(std::move(kl));
        break;
      }
      case LearnerKind::cart: {
        CartLearner cl = fit_cart(*ens.knots, omega, g, ens.spec.minsplit);
        for (std::size_t i = 0; i < n; ++i) v[i] = predict(cl, (*ens.knots)[i]);
        ens.learners.emplace_back(std::move(cl));
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      f[i] += v[i];
      if (f[i] > kExpArgLimit) {
        throw Error(ErrorCode::numeric,
                    "fit: log-potential overflow at iteration " +
                        std::to_string(m));
      }
      // The multiplicative update omega <- omega * e^b is the recursion the
      // whole scheme rests on; it must agree with a_i e^{f(x_i)} throughout.
      omega[i] *= std::exp(v[i]);
      if (!std::isfinite(omega[i]) || omega[i] < kWeightFloor) {
        throw Error(ErrorCode::numeric,
                    "fit: weight underflow at iteration " + std::to_string(m));
      }
    }
    if (config.record_trace) {
      ens.trace.push_back({log_likelihood(data, quad, f),
                           surrogate(data, quad, f), normalizer(quad, f)});
    }
  }

  ens.f_knots = std::move(f);
  ens.weights = std::move(omega);
  // The reported constant is always recomputed from the accumulated
  // log-potential, independent of the weight recursion.
  ens.normalizer = normalizer(ens.quad, ens.f_knots);
  return ens;
}

Ensemble fit_boosted(const RawSamples& raw, const FitConfig& config) {
  const Dataset data = build_dataset(raw);
  const QuadratureWeights quad = trapezoid_weights(data);
  FitConfig resolved = config;
  if (config.learner.kind == LearnerKind::gaussian_kernel &&
      !(config.learner.bandwidth > 0.0)) {
    resolved.learner.bandwidth = silverman_bandwidth(raw.values);
  }
  return fit_boosted(data, quad, resolved);
}

Ensemble truncate_ensemble(const Ensemble& full, std::size_t m) {
  if (m < 1 || m > full.learners.size()) {
    throw Error(ErrorCode::invalid_argument,
                "truncate: prefix length outside [1, iterations]");
  }
  Ensemble out;
  out.data = full.data;
  out.quad = full.quad;
  out.spec = full.spec;
  out.knots = full.knots;
  out.learners.assign(full.learners.begin(),
                      full.learners.begin() + static_cast<std::ptrdiff_t>(m));
  if (!full.trace.empty()) {
    out.trace.assign(full.trace.begin(),
                     full.trace.begin() + static_cast<std::ptrdiff_t>(m) + 1);
  }
  refresh_ensemble_caches(out);
  return out;
}

GridEvaluator::GridEvaluator(const Ensemble& ens, std::vector<double> grid)
    : ens_(ens),
      grid_(std::move(grid)),
      f_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_.size()))) {}

const Eigen::VectorXd& GridEvaluator::advance_to(std::size_t m) {
  if (m > ens_.learners.size()) {
    throw Error(ErrorCode::invalid_argument,
                "grid evaluator: prefix exceeds the number of learners");
  }
  if (m < pos_) {
    throw Error(ErrorCode::invalid_argument,
                "grid evaluator: prefixes must be requested in increasing order");
  }
  for (; pos_ < m; ++pos_) {
    const FittedLearner& learner = ens_.learners[pos_];
    if (const auto* k = std::get_if<KernelLearner>(&learner)) {
      if (!cross_kernel_) {
        cross_kernel_ =
            gaussian_kernel_matrix(grid_, *k->centers, k->bandwidth);
      }
      f_ += evaluate_kernel_learner(*cross_kernel_, *k);
    } else {
      for (std::size_t i = 0; i < grid_.size(); ++i) {
        f_[static_cast<Eigen::Index>(i)] += predict(learner, grid_[i]);
      }
    }
  }
  return f_;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) {
    throw Error(ErrorCode::invalid_argument,
                "grid: need at least two points and hi > lo");
  }
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + static_cast<double>(i) * step;
  }
  grid.back() = hi;  // pin the endpoint: rounding must not leave the support
  return grid;
}

} // namespace bnpmle
