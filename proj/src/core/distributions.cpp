#include "core/distributions.hpp"

#include <cmath>
#include <cstdio>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace bnpmle {

namespace {

constexpr double kPi = 3.14159265358979323846;

double exponential_draw(Rng& rng, double rate) {
  return -std::log(uniform01_positive(rng)) / rate;
}

//! Difference of two unit exponentials: edge-case-free Laplace(0, 1) draw.
double laplace_draw(Rng& rng, double loc, double scale) {
  const double e1 = -std::log(uniform01_positive(rng));
  const double e2 = -std::log(uniform01_positive(rng));
  return loc + scale * (e1 - e2);
}

//! Marsaglia-Tsang squeeze for Gamma(shape, 1), with the usual power-of-
//! uniform boost below shape one.
double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = uniform01_positive(rng);
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01_positive(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double normal_pdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

double laplace_pdf(double x, double loc, double scale) {
  return std::exp(-std::fabs(x - loc) / scale) / (2.0 * scale);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) {
    throw Error(ErrorCode::invalid_argument,
                std::string("distribution: ") + what + " must be positive");
  }
}

} // namespace

double standard_normal(Rng& rng) {
  const double u1 = uniform01_positive(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Distribution parse_distribution(const std::string& text) {
  std::string name = text;
  std::vector<double> params;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') {
      throw Error(ErrorCode::invalid_argument,
                  "distribution: expected closing parenthesis in '" + text + "'");
    }
    name = text.substr(0, open);
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    if (!inner.empty()) {
      for (const std::string& field : csv::split_line(inner)) {
        double v = 0.0;
        if (!csv::parse_double(field, v)) {
          throw Error(ErrorCode::invalid_argument,
                      "distribution: malformed parameter '" + field + "'");
        }
        params.push_back(v);
      }
    }
  }

  // A shorter parameter list keeps the trailing defaults.
  const auto take = [&params](std::size_t limit, auto&&... fields) {
    if (params.size() > limit) {
      throw Error(ErrorCode::invalid_argument,
                  "distribution: too many parameters");
    }
    std::size_t i = 0;
    ((i < params.size() ? (void)(fields = params[i++]) : (void)i), ...);
  };

  if (name == "uniform") {
    UniformDist d;
    take(2, d.lo, d.hi);
    if (!(d.hi > d.lo)) {
      throw Error(ErrorCode::invalid_argument,
                  "distribution: uniform needs hi > lo");
    }
    return d;
  }
  if (name == "exponential") {
    ExponentialDist d;
    take(1, d.rate);
    check_positive(d.rate, "rate");
    return d;
  }
  if (name == "laplace-mixture") {
    LaplaceMixtureDist d;
    take(5, d.w, d.loc1, d.scale1, d.loc2, d.scale2);
    if (!(d.w >= 0.0 && d.w <= 1.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "distribution: mixture weight must lie in [0, 1]");
    }
    check_positive(d.scale1, "scale");
    check_positive(d.scale2, "scale");
    return d;
  }
  if (name == "student-t") {
    StudentTDist d;
    take(1, d.nu);
    check_positive(d.nu, "degrees of freedom");
    return d;
  }
  if (name == "gmm") {
    GaussianMixtureDist d;
    take(4, d.beta, d.mu1, d.mu2, d.variance);
    if (!(d.beta >= 0.0 && d.beta <= 1.0)) {
      throw Error(ErrorCode::invalid_argument,
                  "distribution: mixture weight must lie in [0, 1]");
    }
    check_positive(d.variance, "variance");
    return d;
  }
  throw Error(ErrorCode::invalid_argument,
              "distribution: unknown name '" + name + "'");
}

std::string describe(const Distribution& dist) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return "uniform(" + fmt(d.lo) + "," + fmt(d.hi) + ")";
        } else if constexpr (std::is_same_v<T, ExponentialDist>) {
          return "exponential(" + fmt(d.rate) + ")";
        } else if constexpr (std::is_same_v<T, LaplaceMixtureDist>) {
          return "laplace-mixture(" + fmt(d.w) + "," + fmt(d.loc1) + "," +
                 fmt(d.scale1) + "," + fmt(d.loc2) + "," + fmt(d.scale2) + ")";
        } else if constexpr (std::is_same_v<T, StudentTDist>) {
          return "student-t(" + fmt(d.nu) + ")";
        } else {
          return "gmm(" + fmt(d.beta) + "," + fmt(d.mu1) + "," + fmt(d.mu2) +
                 "," + fmt(d.variance) + ")";
        }
      },
      dist);
}

double pdf(const Distribution& dist, double x) {
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return (x >= d.lo && x <= d.hi) ? 1.0 / (d.hi - d.lo) : 0.0;
        } else if constexpr (std::is_same_v<T, ExponentialDist>) {
          return x >= 0.0 ? d.rate * std::exp(-d.rate * x) : 0.0;
        } else if constexpr (std::is_same_v<T, LaplaceMixtureDist>) {
          return d.w * laplace_pdf(x, d.loc1, d.scale1) +
                 (1.0 - d.w) * laplace_pdf(x, d.loc2, d.scale2);
        } else if constexpr (std::is_same_v<T, StudentTDist>) {
          const double half = 0.5 * (d.nu + 1.0);
          const double lognorm = std::lgamma(half) -
                                 std::lgamma(0.5 * d.nu) -
                                 0.5 * std::log(d.nu * kPi);
          return std::exp(lognorm - half * std::log1p(x * x / d.nu));
        } else {
          const double sd = std::sqrt(d.variance);
          return d.beta * normal_pdf(x, d.mu1, sd) +
                 (1.0 - d.beta) * normal_pdf(x, d.mu2, sd);
        }
      },
      dist);
}

double sample(const Distribution& dist, Rng& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformDist>) {
          return d.lo + (d.hi - d.lo) * uniform01(rng);
        } else if constexpr (std::is_same_v<T, ExponentialDist>) {
          return exponential_draw(rng, d.rate);
        } else if constexpr (std::is_same_v<T, LaplaceMixtureDist>) {
          const bool first = uniform01(rng) < d.w;
          return first ? laplace_draw(rng, d.loc1, d.scale1)
                       : laplace_draw(rng, d.loc2, d.scale2);
        } else if constexpr (std::is_same_v<T, StudentTDist>) {
          const double z = standard_normal(rng);
          const double chi2 = 2.0 * gamma_draw(rng, 0.5 * d.nu);
          return z * std::sqrt(d.nu / chi2);
        } else {
          const bool first = uniform01(rng) < d.beta;
          const double mu = first ? d.mu1 : d.mu2;
          return mu + std::sqrt(d.variance) * standard_normal(rng);
        }
      },
      dist);
}

std::vector<double> sample_n(const Distribution& dist, Rng& rng,
                             std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample(dist, rng);
  return out;
}

} // namespace bnpmle
