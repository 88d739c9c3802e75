#include "core/dataset.hpp"

#include "core/csv.hpp"
#include "core/error.hpp"

#include <algorithm>
#include <cmath>

namespace bnpmle {

Dataset build_dataset(const RawSamples& raw)
{
  const std::size_t n_total = raw.values.size();
  if (n_total < 2) {
    throw Error(ErrorCode::degenerate_support,
                "need at least 2 samples, got " + std::to_string(n_total));
  }
  for (double v : raw.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::invalid_input, "non-finite sample value");
    }
  }

  std::vector<double> sorted = raw.values;
  std::sort(sorted.begin(), sorted.end());

  Dataset ds;
  ds.total_count = n_total;
  const double inv_n = 1.0 / static_cast<double>(n_total);
  std::size_t i = 0;
  while (i < n_total) {
    std::size_t j = i;
    while (j < n_total && sorted[j] == sorted[i]) ++j;
    ds.knots.push_back(sorted[i]);
    ds.freq.push_back(static_cast<double>(j - i) * inv_n);
    i = j;
  }

  if (ds.knots.size() < 2) {
    throw Error(ErrorCode::degenerate_support,
                "need at least 2 distinct sample values for a non-degenerate support");
  }
  return ds;
}

QuadratureWeights trapezoid_weights(const Dataset& ds)
{
  const std::size_t n = ds.size();
  if (n < 2) {
    throw Error(ErrorCode::degenerate_support, "trapezoid weights need at least 2 knots");
  }
  QuadratureWeights qw;
  qw.a.resize(n);
  qw.a[0] = (ds.knots[1] - ds.knots[0]) / 2.0;
  qw.a[n - 1] = (ds.knots[n - 1] - ds.knots[n - 2]) / 2.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    qw.a[i] = (ds.knots[i + 1] - ds.knots[i - 1]) / 2.0;
  }
  return qw;
}

std::vector<double> expand_to_sorted_values(const Dataset& ds)
{
  std::vector<double> values;
  values.reserve(ds.total_count);
  const double n = static_cast<double>(ds.total_count);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto repeats = static_cast<std::size_t>(std::llround(ds.freq[i] * n));
    values.insert(values.end(), repeats, ds.knots[i]);
  }
  return values;
}

RawSamples read_numeric_csv(const std::string& path, bool has_header)
{
  auto lines = csv::read_lines(path);
  RawSamples raw;
  std::size_t start = 0;
  if (has_header && !lines.empty()) start = 1;
  raw.values.reserve(lines.size() - start);
  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto& [lineno, text] = lines[k];
    auto fields = csv::split_line(text);
    if (fields.size() != 1) {
      throw Error(ErrorCode::invalid_input,
                  "expected one column at row " + std::to_string(lineno) + " of " + path);
    }
    double v = 0.0;
    if (!csv::parse_double(fields[0], v)) {
      throw Error(ErrorCode::invalid_input,
                  "non-numeric value at row " + std::to_string(lineno) + " of " + path);
    }
    raw.values.push_back(v);
  }
  return raw;
}

} // namespace bnpmle
