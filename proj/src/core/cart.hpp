#pragma once

#include <span>

#include "core/learner.hpp"

namespace bnpmle {

//! Greedy weighted regression tree over the knot axis. Split candidates are
//! the midpoints between consecutive knots inside a node; a node is split
//! only when it holds at least `minsplit` knots and the best candidate
//! strictly reduces the weighted sum of squared errors (with a relative
//! 1e-12-of-root-SSE guard against floating-point noise). Ties prefer the
//! leftmost candidate, depth is capped at 30, and each leaf predicts the
//! weighted mean response of its knots.
CartLearner fit_cart(std::span<const double> x, std::span<const double> w,
                     std::span<const double> g, int minsplit);

} // namespace bnpmle
