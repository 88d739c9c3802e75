#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/boosting.hpp"
#include "core/distributions.hpp"

namespace bnpmle {

//! Kullback-Leibler divergence KL(p || p_hat) of the true density from the
//! estimate, integrated by composite trapezoid over the estimate's support.
//! Mass of p outside that support cannot be represented by the estimate and
//! is reported separately instead of being folded into the integral.
struct KlResult {
  double kl = 0.0;
  double truncated_mass = 0.0;
};

//! Quadrature core on a precomputed uniform grid with matching density
//! values. The integrand p log(p / p_hat) uses a 1e-300 floor on p_hat and is
//! taken as zero wherever p itself is below that floor.
KlResult kl_quadrature(std::span<const double> grid,
                       std::span<const double> p_true,
                       std::span<const double> p_hat);

//! KL of the fitted ensemble against a known distribution, on an equally
//! spaced grid of `grid_points` over the fitted support.
KlResult kl_divergence(const Distribution& truth, const Ensemble& ens,
                       std::size_t grid_points);

//! KL at several ensemble prefixes (ascending iteration counts) in one pass
//! over the learners. Needs the per-iteration normalizing constants, so the
//! ensemble must carry a recorded trace.
std::vector<KlResult> kl_at_prefixes(const Distribution& truth,
                                     const Ensemble& ens,
                                     std::span<const std::size_t> prefixes,
                                     std::size_t grid_points);

//! Replicated simulation: draw a sample, fit, measure KL at each prefix;
//! repeat with consecutive seeds and aggregate.
struct SweepConfig {
  Distribution truth;
  std::size_t sample_size = 500;
  std::vector<std::size_t> prefixes;  // ascending iteration counts
  std::size_t replicates = 10;
  std::uint64_t base_seed = 1;
  LearnerSpec learner;
  std::size_t grid_points = 2001;
};

struct SweepAggregate {
  double mean_kl = 0.0;
  double sd_kl = 0.0;  // sample standard deviation across replicates
};

struct SweepResult {
  std::vector<std::size_t> prefixes;
  std::vector<std::vector<KlResult>> rows;  // rows[replicate][prefix index]
  std::vector<SweepAggregate> aggregate;    // per prefix
};

SweepResult kl_sweep(const SweepConfig& config);

} // namespace bnpmle
