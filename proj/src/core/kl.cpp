#include "core/kl.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bnpmle {

namespace {

constexpr double kDensityFloor = 1e-300;

std::vector<double> true_density_on(const Distribution& truth,
                                    std::span<const double> grid) {
  std::vector<double> p(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p[i] = pdf(truth, grid[i]);
  return p;
}

double trapezoid(std::span<const double> grid, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    acc += 0.5 * (y[i] + y[i + 1]) * (grid[i + 1] - grid[i]);
  }
  return acc;
}

void check_grid_points(std::size_t grid_points) {
  if (grid_points < 101) {
    throw Error(ErrorCode::invalid_argument,
                "kl: quadrature grid needs at least 101 points");
  }
}

void check_prefixes(std::span<const std::size_t> prefixes, std::size_t max) {
  if (prefixes.empty()) {
    throw Error(ErrorCode::invalid_argument, "kl: no prefixes given");
  }
  for (std::size_t k = 0; k < prefixes.size(); ++k) {
    if (prefixes[k] < 1 || prefixes[k] > max) {
      throw Error(ErrorCode::invalid_argument,
                  "kl: prefix outside [1, iterations]");
    }
    if (k > 0 && prefixes[k] <= prefixes[k - 1]) {
      throw Error(ErrorCode::invalid_argument,
                  "kl: prefixes must be strictly increasing");
    }
  }
}

} // namespace

KlResult kl_quadrature(std::span<const double> grid,
                       std::span<const double> p_true,
                       std::span<const double> p_hat) {
  if (grid.size() < 2 || p_true.size() != grid.size() ||
      p_hat.size() != grid.size()) {
    throw Error(ErrorCode::invalid_argument,
                "kl: grid and density arrays must agree and have >= 2 points");
  }
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (p_true[i] < kDensityFloor) {
      integrand[i] = 0.0;  // lim p->0 of p log p
    } else {
      integrand[i] =
          p_true[i] * std::log(p_true[i] / std::max(p_hat[i], kDensityFloor));
    }
  }
  KlResult out;
  out.kl = trapezoid(grid, integrand);
  out.truncated_mass = 1.0 - trapezoid(grid, p_true);
  return out;
}

KlResult kl_divergence(const Distribution& truth, const Ensemble& ens,
                       std::size_t grid_points) {
  check_grid_points(grid_points);
  const std::vector<double> grid =
      uniform_grid(ens.support_lo(), ens.support_hi(), grid_points);
  GridEvaluator eval(ens, grid);
  const Eigen::VectorXd& f = eval.advance_to(ens.iterations());
  std::vector<double> p_hat(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    p_hat[i] =
        std::exp(f[static_cast<Eigen::Index>(i)]) / ens.normalizer;
  }
  return kl_quadrature(grid, true_density_on(truth, grid), p_hat);
}

std::vector<KlResult> kl_at_prefixes(const Distribution& truth,
                                     const Ensemble& ens,
                                     std::span<const std::size_t> prefixes,
                                     std::size_t grid_points) {
  check_grid_points(grid_points);
  check_prefixes(prefixes, ens.iterations());
  if (ens.trace.size() != ens.iterations() + 1) {
    throw Error(ErrorCode::invalid_argument,
                "kl: prefix evaluation needs an ensemble with a recorded trace");
  }
  const std::vector<double> grid =
      uniform_grid(ens.support_lo(), ens.support_hi(), grid_points);
  const std::vector<double> p_true = true_density_on(truth, grid);
  GridEvaluator eval(ens, grid);
  std::vector<double> p_hat(grid.size());
  std::vector<KlResult> out;
  out.reserve(prefixes.size());
  for (std::size_t m : prefixes) {
    const Eigen::VectorXd& f = eval.advance_to(m);
    const double z = ens.trace[m].z;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      p_hat[i] = std::exp(f[static_cast<Eigen::Index>(i)]) / z;
    }
    out.push_back(kl_quadrature(grid, p_true, p_hat));
  }
  return out;
}

SweepResult kl_sweep(const SweepConfig& config) {
  if (config.prefixes.empty()) {
    throw Error(ErrorCode::invalid_argument, "kl: no prefixes given");
  }
  check_prefixes(config.prefixes, config.prefixes.back());
  if (config.replicates < 1) {
    throw Error(ErrorCode::invalid_argument, "kl: need at least one replicate");
  }
  if (config.sample_size < 2) {
    throw Error(ErrorCode::invalid_argument,
                "kl: need a sample of at least two");
  }
  SweepResult result;
  result.prefixes = config.prefixes;
  result.rows.reserve(config.replicates);

  FitConfig fit_config;
  fit_config.learner = config.learner;
  fit_config.iterations = static_cast<int>(config.prefixes.back());
  fit_config.record_trace = true;

  for (std::size_t r = 0; r < config.replicates; ++r) {
    Rng rng(config.base_seed + r);
    RawSamples raw{sample_n(config.truth, rng, config.sample_size)};
    const Ensemble ens = fit_boosted(raw, fit_config);
    result.rows.push_back(
        kl_at_prefixes(config.truth, ens, config.prefixes, config.grid_points));
  }

  result.aggregate.resize(config.prefixes.size());
  const double nrep = static_cast<double>(config.replicates);
  for (std::size_t k = 0; k < config.prefixes.size(); ++k) {
    double mean = 0.0;
    for (const auto& row : result.rows) mean += row[k].kl;
    mean /= nrep;
    double ss = 0.0;
    for (const auto& row : result.rows) {
      ss += (row[k].kl - mean) * (row[k].kl - mean);
    }
    result.aggregate[k] = {mean, config.replicates > 1
                                     ? std::sqrt(ss / (nrep - 1.0))
                                     : 0.0};
  }
  return result;
}

} // namespace bnpmle
