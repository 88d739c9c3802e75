#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bnpmle {

//! Raw i.i.d. sample values, unordered, duplicates allowed.
struct RawSamples {
  std::vector<double> values;

  std::size_t count() const { return values.size(); }
};

//! Empirical objects the estimator works on: the n unique sample values in
//! ascending order (knots) and their calibrated frequencies q_i = #{X_j = x_i}/N.
//! Duplicate detection is exact floating-point equality; near-duplicates stay
//! distinct knots.
struct Dataset {
  std::vector<double> knots;  // strictly increasing
  std::vector<double> freq;   // in (0,1], sums to 1, each a multiple of 1/N
  std::size_t total_count = 0;  // N

  std::size_t size() const { return knots.size(); }
  double support_lo() const { return knots.front(); }
  double support_hi() const { return knots.back(); }
};

//! Composite-trapezoid quadrature coefficients on the knot grid:
//! a_1 = (x_2-x_1)/2, a_n = (x_n-x_{n-1})/2, a_i = (x_{i+1}-x_{i-1})/2.
//! They discretize the normalization integral over [x_1, x_n].
struct QuadratureWeights {
  std::vector<double> a;

  std::size_t size() const { return a.size(); }
};

//! Sort, deduplicate and calibrate frequencies.
//! Throws Error{invalid_input} on non-finite values and
//! Error{degenerate_support} when fewer than two distinct values remain.
Dataset build_dataset(const RawSamples& raw);

QuadratureWeights trapezoid_weights(const Dataset& ds);

//! Reconstruct the sorted sample multiset (each knot repeated N*q_i times).
std::vector<double> expand_to_sorted_values(const Dataset& ds);

//! Single-column CSV ingestion; `has_header` skips the first non-blank line.
//! Non-numeric rows raise Error{invalid_input} naming the offending row.
RawSamples read_numeric_csv(const std::string& path, bool has_header);

} // namespace bnpmle
