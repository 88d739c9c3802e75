#include "core/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace bnpmle {

namespace {

bool parse_label(const std::string& field, int& out) {
  if (field.empty()) return false;
  char* end = nullptr;
  const long v = std::strtol(field.c_str(), &end, 10);
  if (end != field.c_str() + field.size()) return false;
  out = static_cast<int>(v);
  return true;
}

std::size_t find_column(const std::vector<std::string>& header,
                        const std::string& name, const std::string& path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorCode::invalid_input,
              path + ": no column named '" + name + "'");
}

} // namespace

LabeledDataset read_labeled_csv(const std::string& path,
                                const std::string& value_column,
                                const std::string& label_column) {
  const auto lines = csv::read_lines(path);
  if (lines.empty()) {
    throw Error(ErrorCode::invalid_input, path + ": empty file");
  }
  const std::vector<std::string> header = csv::split_line(lines.front().second);
  const std::size_t vcol = find_column(header, value_column, path);
  const std::size_t lcol = find_column(header, label_column, path);

  LabeledDataset out;
  out.values.reserve(lines.size() - 1);
  out.labels.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [lineno, text] = lines[k];
    const std::vector<std::string> fields = csv::split_line(text);
    if (fields.size() <= std::max(vcol, lcol)) {
      throw Error(ErrorCode::invalid_input,
                  path + ": line " + std::to_string(lineno) +
                      " has too few fields");
    }
    double value = 0.0;
    int label = 0;
    if (!csv::parse_double(fields[vcol], value) || !std::isfinite(value)) {
      throw Error(ErrorCode::invalid_input,
                  path + ": line " + std::to_string(lineno) +
                      ": bad value '" + fields[vcol] + "'");
    }
    if (!parse_label(fields[lcol], label)) {
      throw Error(ErrorCode::invalid_input,
                  path + ": line " + std::to_string(lineno) +
                      ": bad label '" + fields[lcol] + "'");
    }
    out.values.push_back(value);
    out.labels.push_back(label);
  }
  if (out.values.empty()) {
    throw Error(ErrorCode::invalid_input, path + ": no data rows");
  }
  return out;
}

int BayesModel::predict(double x) const {
  double best_score = -1.0;
  std::size_t best = 0;
  bool any_positive = false;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const double score = priors[c] * densities[c].density_or_zero(x);
    if (score > best_score) {  // strict: ties keep the smaller label
      best_score = score;
      best = c;
    }
    if (score > 0.0) any_positive = true;
  }
  if (!any_positive) {
    // x is outside every class's fitted support; fall back to the prior.
    best = 0;
    for (std::size_t c = 1; c < classes.size(); ++c) {
      if (priors[c] > priors[best]) best = c;
    }
  }
  return classes[best];
}

BayesModel fit_bayes(const LabeledDataset& train, const FitConfig& config) {
  if (train.values.size() != train.labels.size()) {
    throw Error(ErrorCode::invalid_argument,
                "classifier: value/label length mismatch");
  }
  std::map<int, std::vector<double>> by_class;
  for (std::size_t i = 0; i < train.size(); ++i) {
    by_class[train.labels[i]].push_back(train.values[i]);
  }
  if (by_class.size() < 2) {
    throw Error(ErrorCode::infeasible,
                "classifier: training data has fewer than two classes");
  }
  BayesModel model;
  const double n = static_cast<double>(train.size());
  for (auto& [label, values] : by_class) {
    model.classes.push_back(label);
    model.priors.push_back(static_cast<double>(values.size()) / n);
    model.densities.push_back(fit_boosted(RawSamples{std::move(values)}, config));
  }
  return model;
}

SplitExperimentResult split_experiment(const LabeledDataset& data,
                                       const FitConfig& config,
                                       std::size_t splits,
                                       double train_fraction,
                                       std::uint64_t base_seed) {
  const std::size_t n = data.size();
  if (splits < 1) {
    throw Error(ErrorCode::invalid_argument,
                "split experiment: need at least one split");
  }
  const std::size_t train_n =
      static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  if (!(train_fraction > 0.0 && train_fraction < 1.0) || train_n < 2 ||
      train_n >= n) {
    throw Error(ErrorCode::invalid_argument,
                "split experiment: train fraction leaves an empty half");
  }

  SplitExperimentResult result;
  result.splits.reserve(splits);
  for (std::size_t s = 0; s < splits; ++s) {
    Rng rng(base_seed + s);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_values(order, rng);

    LabeledDataset train;
    train.values.reserve(train_n);
    train.labels.reserve(train_n);
    for (std::size_t i = 0; i < train_n; ++i) {
      train.values.push_back(data.values[order[i]]);
      train.labels.push_back(data.labels[order[i]]);
    }

    SplitOutcome outcome;
    outcome.split_index = s;
    outcome.test_count = n - train_n;
    try {
      const BayesModel model = fit_bayes(train, config);
      bool unseen = false;
      for (std::size_t i = train_n; i < n && !unseen; ++i) {
        unseen = !std::binary_search(model.classes.begin(),
                                     model.classes.end(),
                                     data.labels[order[i]]);
      }
      if (unseen) {
        outcome.skipped = true;
        outcome.note = "test half contains a class absent from training";
      } else {
        for (std::size_t i = train_n; i < n; ++i) {
          if (model.predict(data.values[order[i]]) != data.labels[order[i]]) {
            ++outcome.errors;
          }
        }
        outcome.error_rate = static_cast<double>(outcome.errors) /
                             static_cast<double>(outcome.test_count);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_support ||
          e.code() == ErrorCode::infeasible) {
        outcome.skipped = true;
        outcome.note = e.what();
      } else {
        throw;
      }
    }
    result.splits.push_back(std::move(outcome));
  }

  double mean = 0.0;
  for (const SplitOutcome& o : result.splits) {
    if (!o.skipped) {
      ++result.used;
      mean += o.error_rate;
    }
  }
  if (result.used == 0) {
    throw Error(ErrorCode::infeasible,
                "split experiment: every split was skipped");
  }
  mean /= static_cast<double>(result.used);
  double ss = 0.0;
  for (const SplitOutcome& o : result.splits) {
    if (!o.skipped) ss += (o.error_rate - mean) * (o.error_rate - mean);
  }
  result.mean_error = mean;
  result.sd_error = result.used > 1
                        ? std::sqrt(ss / static_cast<double>(result.used - 1))
                        : 0.0;
  return result;
}

} // namespace bnpmle
