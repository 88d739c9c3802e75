#pragma once

#include <string>
#include <variant>
#include <vector>

#include "core/rng.hpp"

namespace bnpmle {

//! The reference distributions used to exercise the estimator. Parameter
//! defaults are the canonical configurations of the simulation studies.

struct UniformDist {
  double lo = 0.0, hi = 1.0;
};

struct ExponentialDist {
  double rate = 1.0;
};

//! w * Laplace(loc1, scale1) + (1-w) * Laplace(loc2, scale2).
struct LaplaceMixtureDist {
  double w = 0.5;
  double loc1 = -2.0, scale1 = 1.0;
  double loc2 = 2.0, scale2 = 1.0;
};

struct StudentTDist {
  double nu = 3.0;
};

//! beta * N(mu1, variance) + (1-beta) * N(mu2, variance), equal variances.
struct GaussianMixtureDist {
  double beta = 0.5;
  double mu1 = 2.5, mu2 = -2.5;
  double variance = 2.0;
};

using Distribution = std::variant<UniformDist, ExponentialDist,
                                  LaplaceMixtureDist, StudentTDist,
                                  GaussianMixtureDist>;

//! Parse "name" or "name(p1,p2,...)" where name is one of uniform,
//! exponential, laplace-mixture, student-t, gmm. A shorter parameter list
//! leaves the remaining parameters at their defaults ("gmm(0.35)" sets only
//! the mixing weight). Throws Error{invalid_argument} on anything else.
Distribution parse_distribution(const std::string& text);

//! Canonical textual form with all parameters spelled out.
std::string describe(const Distribution& dist);

double pdf(const Distribution& dist, double x);
double sample(const Distribution& dist, Rng& rng);
std::vector<double> sample_n(const Distribution& dist, Rng& rng, std::size_t n);

//! Standard normal draw (Box-Muller, no cached spare: one draw consumes
//! exactly two stream values).
double standard_normal(Rng& rng);

} // namespace bnpmle
