#include "core/learner.hpp"

#include <algorithm>
#include <cmath>

namespace bnpmle {

double predict(const SplineLearner& s, double x) {
  const std::vector<double>& t = *s.x;
  const size_t n = t.size();
  // Evaluating at a knot must reproduce the stored value bit for bit, so that
  // re-evaluating a saved or truncated ensemble on its own knots cannot drift.
  auto it = std::lower_bound(t.begin(), t.end(), x);
  if (it != t.end() && *it == x) {
    return s.values[static_cast<size_t>(it - t.begin())];
  }
  if (x < t.front()) {
    const double h = t[1] - t[0];
    const double slope = (s.values[1] - s.values[0]) / h - h * s.d2[1] / 6.0;
    return s.values[0] + slope * (x - t.front());
  }
  if (x > t.back()) {
    const double h = t[n - 1] - t[n - 2];
    const double slope =
        (s.values[n - 1] - s.values[n - 2]) / h + h * s.d2[n - 2] / 6.0;
    return s.values[n - 1] + slope * (x - t.back());
  }
  // x lies strictly inside (t[i], t[i+1]) with i = index of the knot left of x.
  const size_t i = static_cast<size_t>(it - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double a = (t[i + 1] - x) / h;
  const double b = (x - t[i]) / h;
  return a * s.values[i] + b * s.values[i + 1] +
         ((a * a * a - a) * s.d2[i] + (b * b * b - b) * s.d2[i + 1]) *
             (h * h) / 6.0;
}

double predict(const KernelLearner& k, double x) {
  const std::vector<double>& c = *k.centers;
  const double inv = 1.0 / (2.0 * k.bandwidth * k.bandwidth);
  double acc = k.intercept;
  for (size_t j = 0; j < c.size(); ++j) {
    const double d = x - c[j];
    acc += k.coef[j] * std::exp(-d * d * inv);
  }
  return acc;
}

double predict(const CartLearner& c, double x) {
  int idx = 0;
  while (c.nodes[static_cast<size_t>(idx)].left >= 0) {
    const CartNode& node = c.nodes[static_cast<size_t>(idx)];
    idx = (x <= node.threshold) ? node.left : node.right;
  }
  return c.nodes[static_cast<size_t>(idx)].value;
}

double predict(const FittedLearner& learner, double x) {
  return std::visit([x](const auto& l) { return predict(l, x); }, learner);
}

} // namespace bnpmle
