#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/boosting.hpp"

namespace bnpmle {

//! One feature value with an integer class label per observation.
struct LabeledDataset {
  std::vector<double> values;
  std::vector<int> labels;

  std::size_t size() const { return values.size(); }
};

//! Read (value, label) columns by name from a CSV file with a header row.
//! Labels must parse as integers. Rows that fail to parse raise
//! Error{invalid_input} naming the row.
LabeledDataset read_labeled_csv(const std::string& path,
                                const std::string& value_column,
                                const std::string& label_column);

//! Plug-in Bayes classifier: class priors are training frequencies, class-
//! conditional densities are boosted fits, and prediction maximizes
//! prior * density. Outside every fitted support all densities vanish; the
//! class with the larger prior wins then, and any remaining tie goes to the
//! smaller label.
struct BayesModel {
  std::vector<int> classes;       // ascending labels
  std::vector<double> priors;     // training frequencies
  std::vector<Ensemble> densities;

  int predict(double x) const;
};

//! Fit one density per class. Throws Error{infeasible} when fewer than two
//! classes are present and propagates Error{degenerate_support} when a class
//! has too few distinct values to fit.
BayesModel fit_bayes(const LabeledDataset& train, const FitConfig& config);

//! One random train/test split: either an error rate or a skip with reason.
struct SplitOutcome {
  std::size_t split_index = 0;
  bool skipped = false;
  std::string note;          // reason when skipped
  std::size_t test_count = 0;
  std::size_t errors = 0;
  double error_rate = 0.0;
};

struct SplitExperimentResult {
  std::vector<SplitOutcome> splits;
  std::size_t used = 0;      // splits that produced an error rate
  double mean_error = 0.0;   // across used splits
  double sd_error = 0.0;     // sample standard deviation across used splits
};

//! Repeated random-split evaluation. Split s shuffles the data with seed
//! base_seed + s (Fisher-Yates) and trains on the first
//! floor(train_fraction * n) rows. Splits whose training half cannot support
//! a model, or whose test half contains an unseen class, are recorded as
//! skipped with the reason. Throws Error{infeasible} when no split succeeds.
SplitExperimentResult split_experiment(const LabeledDataset& data,
                                       const FitConfig& config,
                                       std::size_t splits,
                                       double train_fraction,
                                       std::uint64_t base_seed);

} // namespace bnpmle
