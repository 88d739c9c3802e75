#pragma once

#include "core/dataset.hpp"

#include <span>
#include <vector>

namespace bnpmle {

//! Per-knot weights and responses of the weighted-least-squares subproblem
//! solved at one boosting iteration:
//!   w_i = a_i e^{f(x_i)},   g_i = (q_i - w_i) / w_i.
struct BoostState {
  std::vector<double> weights;
  std::vector<double> responses;
  std::size_t iteration = 0;
};

//! Exact log-likelihood  L(f) = sum_i q_i f_i - log sum_i a_i e^{f_i},
//! evaluated with max-shift stabilization of the log-sum-exp.
double log_likelihood(const Dataset& ds, const QuadratureWeights& qw, std::span<const double> f);

//! Surrogate objective  S(f) = sum_i q_i f_i - sum_i a_i e^{f_i}.
//! Satisfies L(f) >= 1 + S(f) with equality when sum_i a_i e^{f_i} = 1.
double surrogate(const Dataset& ds, const QuadratureWeights& qw, std::span<const double> f);

//! Gradient of the surrogate: (q_i - a_i e^{f_i}) per knot.
std::vector<double> surrogate_gradient(const Dataset& ds, const QuadratureWeights& qw,
                                       std::span<const double> f);

//! Weight/response bookkeeping for the WLS reduction. Throws Error{numeric}
//! when any weight underflows below 1e-300 (f diverging to -inf at a knot).
BoostState weights_responses(const Dataset& ds, const QuadratureWeights& qw,
                             std::span<const double> f, std::size_t iteration = 0);

//! Normalization constant Z(f) = sum_i a_i e^{f_i} on the knots.
double normalizer(const QuadratureWeights& qw, std::span<const double> f);

} // namespace bnpmle
