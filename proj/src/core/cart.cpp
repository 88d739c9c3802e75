#include "core/cart.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/error.hpp"

namespace bnpmle {

namespace {

constexpr int kMaxDepth = 30;
constexpr double kReductionGuard = 1e-12;  // relative to the root SSE

//! Prefix sums of w, w*g, and w*g^2 give every contiguous range's weighted
//! SSE in constant time, so the exhaustive candidate scan is linear per node.
struct Builder {
  std::span<const double> x;
  std::vector<double> sw, swg, swg2;
  double min_reduction = 0.0;
  int minsplit = 2;
  std::vector<CartNode> nodes;

  double range_sse(size_t lo, size_t hi) const {
    const double ws = sw[hi] - sw[lo];
    const double wg = swg[hi] - swg[lo];
    return (swg2[hi] - swg2[lo]) - wg * wg / ws;
  }

  double range_mean(size_t lo, size_t hi) const {
    return (swg[hi] - swg[lo]) / (sw[hi] - sw[lo]);
  }

  int build(size_t lo, size_t hi, int depth) {
    const int idx = static_cast<int>(nodes.size());
    nodes.push_back(CartNode{0.0, -1, -1, range_mean(lo, hi)});
    if (hi - lo < static_cast<size_t>(minsplit) || depth >= kMaxDepth) {
      return idx;
    }
    const double parent = range_sse(lo, hi);
    double best_reduction = min_reduction;
    size_t best_k = 0;
    for (size_t k = lo + 1; k < hi; ++k) {
      const double reduction = parent - range_sse(lo, k) - range_sse(k, hi);
      if (reduction > best_reduction) {  // strict: ties keep the leftmost
        best_reduction = reduction;
        best_k = k;
      }
    }
    if (best_k == 0) return idx;
    nodes[static_cast<size_t>(idx)].threshold =
        0.5 * (x[best_k - 1] + x[best_k]);
    const int left = build(lo, best_k, depth + 1);
    const int right = build(best_k, hi, depth + 1);
    nodes[static_cast<size_t>(idx)].left = left;
    nodes[static_cast<size_t>(idx)].right = right;
    return idx;
  }
};

} // namespace

CartLearner fit_cart(std::span<const double> x, std::span<const double> w,
                     std::span<const double> g, int minsplit) {
  const size_t n = x.size();
  if (w.size() != n || g.size() != n) {
    throw Error(ErrorCode::invalid_argument,
                "regression tree: weight/response length does not match knots");
  }
  if (n == 0) {
    throw Error(ErrorCode::invalid_argument, "regression tree: empty input");
  }
  if (minsplit < 2) {
    throw Error(ErrorCode::invalid_argument,
                "regression tree: minsplit must be at least 2");
  }
  Builder b;
  b.x = x;
  b.minsplit = minsplit;
  b.sw.resize(n + 1, 0.0);
  b.swg.resize(n + 1, 0.0);
  b.swg2.resize(n + 1, 0.0);
  for (size_t i = 0; i < n; ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]) || !std::isfinite(g[i])) {
      throw Error(ErrorCode::numeric,
                  "regression tree: weights must be positive and responses finite");
    }
    b.sw[i + 1] = b.sw[i] + w[i];
    b.swg[i + 1] = b.swg[i] + w[i] * g[i];
    b.swg2[i + 1] = b.swg2[i] + w[i] * g[i] * g[i];
  }
  b.min_reduction = kReductionGuard * std::max(b.range_sse(0, n), 0.0);
  b.build(0, n, 0);
  CartLearner out;
  out.nodes = std::move(b.nodes);
  return out;
}

} // namespace bnpmle
