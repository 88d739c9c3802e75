#include "core/likelihood.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bnpmle {

namespace {

// The surrogate's exponential sum is taken in plain 64-bit floats; weak
// learners are heavily damped so f stays moderate. Values beyond this bound
// signal a diverging fit rather than a representable state.
constexpr double kExpArgLimit = 700.0;

void check_dims(const Dataset& ds, const QuadratureWeights& qw, std::span<const double> f)
{
  if (ds.size() != qw.size() || ds.size() != f.size()) {
    throw Error(ErrorCode::invalid_argument, "dimension mismatch between knots, weights and f");
  }
}

} // namespace

double normalizer(const QuadratureWeights& qw, std::span<const double> f)
{
  double z = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > kExpArgLimit) {
      throw Error(ErrorCode::numeric, "exponential overflow at knot " + std::to_string(i));
    }
    z += qw.a[i] * std::exp(f[i]);
  }
  return z;
}

double log_likelihood(const Dataset& ds, const QuadratureWeights& qw, std::span<const double> f)
{
  check_dims(ds, qw, f);
  const double fmax = *std::max_element(f.begin(), f.end());
  double sum_exp = 0.0;
  double sum_qf = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum_exp += qw.a[i] * std::exp(f[i] - fmax);
    sum_qf += ds.freq[i] * f[i];
  }
  const double value = sum_qf - (fmax + std::log(sum_exp));
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::numeric, "log-likelihood not finite");
  }
  return value;
}

double surrogate(const Dataset& ds, const QuadratureWeights& qw, std::span<const double> f)
{
  check_dims(ds, qw, f);
  double sum_qf = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    sum_qf += ds.freq[i] * f[i];
  }
  const double value = sum_qf - normalizer(qw, f);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::numeric, "surrogate not finite");
  }
  return value;
}

std::vector<double> surrogate_gradient(const Dataset& ds, const QuadratureWeights& qw,
                                       std::span<const double> f)
{
  check_dims(ds, qw, f);
  std::vector<double> grad(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > kExpArgLimit) {
      throw Error(ErrorCode::numeric, "exponential overflow at knot " + std::to_string(i));
    }
    grad[i] = ds.freq[i] - qw.a[i] * std::exp(f[i]);
  }
  return grad;
}

BoostState weights_responses(const Dataset& ds, const QuadratureWeights& qw,
                             std::span<const double> f, std::size_t iteration)
{
  check_dims(ds, qw, f);
  BoostState state;
  state.iteration = iteration;
  state.weights.resize(f.size());
  state.responses.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > kExpArgLimit) {
      throw Error(ErrorCode::numeric, "exponential overflow at knot " + std::to_string(i));
    }
    const double w = qw.a[i] * std::exp(f[i]);
    if (w < 1e-300) {
      throw Error(ErrorCode::numeric,
                  "weight underflow at knot " + std::to_string(i) +
                  " (f diverging towards -inf)");
    }
    state.weights[i] = w;
    state.responses[i] = (ds.freq[i] - w) / w;
  }
  return state;
}

} // namespace bnpmle
