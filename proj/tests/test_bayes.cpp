#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "core/bayes.hpp"
#include "core/distributions.hpp"
#include "test_support.hpp"

using namespace bnpmle;

namespace {

FitConfig cart_config(int iterations, int minsplit) {
  FitConfig cfg;
  cfg.learner.kind = LearnerKind::cart;
  cfg.learner.minsplit = minsplit;
  cfg.iterations = iterations;
  return cfg;
}

FitConfig spline_config(int iterations) {
  FitConfig cfg;
  cfg.learner.kind = LearnerKind::smooth_spline;
  cfg.learner.df = 3.0;
  cfg.iterations = iterations;
  return cfg;
}

//! Two well-separated gaussian classes, interleaved labels.
LabeledDataset gaussian_twoclass(std::size_t per_class, std::uint64_t seed) {
  Rng rng(seed);
  const Distribution lo = parse_distribution("gmm(1,-1.5,0,1)");
  const Distribution hi = parse_distribution("gmm(1,1.5,0,1)");
  LabeledDataset out;
  for (std::size_t i = 0; i < per_class; ++i) {
    out.values.push_back(sample(lo, rng));
    out.labels.push_back(0);
    out.values.push_back(sample(hi, rng));
    out.labels.push_back(1);
  }
  return out;
}

} // namespace

TEST_CASE("labeled csv picks columns by header name") {
  const std::string path = test_support::write_temp(
      "labeled_basic.csv",
      "age,chd,city\n"
      "63,1,york\n"
      "45,0,derby\n"
      "\"52\",\"1\",leeds\n");
  const LabeledDataset ds = read_labeled_csv(path, "age", "chd");
  CHECK(ds.values == std::vector<double>{63.0, 45.0, 52.0});
  CHECK(ds.labels == std::vector<int>{1, 0, 1});
  CHECK(ds.size() == 3);
}

TEST_CASE("labeled csv works when the label column precedes the value column") {
  const std::string path = test_support::write_temp(
      "labeled_order.csv",
      "outcome,reading\n"
      "1,2.5\n"
      "0,3.75\n");
  const LabeledDataset ds = read_labeled_csv(path, "reading", "outcome");
  CHECK(ds.values == std::vector<double>{2.5, 3.75});
  CHECK(ds.labels == std::vector<int>{1, 0});
}

TEST_CASE("labeled csv failure modes name the offending place") {
  const std::string ok = "x,y\n1,0\n2,1\n";
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_a.csv", ok), "z", "y"),
      invalid_input, "no column named 'z'");
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_b.csv", ok), "x", "q"),
      invalid_input, "no column named 'q'");

  // Physical line numbers, counting the header and any blank lines.
  const std::string bad_value = "x,y\n1,0\n\noops,1\n";
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_c.csv", bad_value), "x", "y"),
      invalid_input, "line 4: bad value 'oops'");
  const std::string bad_label = "x,y\n1,0\n2,maybe\n";
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_d.csv", bad_label), "x", "y"),
      invalid_input, "line 3: bad label 'maybe'");
  const std::string fractional_label = "x,y\n1,0.5\n";
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_e.csv", fractional_label),
                       "x", "y"),
      invalid_input, "bad label '0.5'");
  const std::string short_row = "x,y\n1,0\n2\n";
  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_f.csv", short_row), "x", "y"),
      invalid_input, "line 3 has too few fields");

  CHECK_ERROR_MSG(
      read_labeled_csv(test_support::write_temp("lab_g.csv", "x,y\n"), "x", "y"),
      invalid_input, "no data rows");
  CHECK_ERROR(read_labeled_csv(test_support::write_temp("lab_h.csv", ""), "x", "y"),
              invalid_input);
  CHECK_ERROR(read_labeled_csv("/nonexistent/labeled.csv", "x", "y"), io);
}

TEST_CASE("classifier stores ascending classes with frequency priors") {
  LabeledDataset ds;
  // Labels 5, -1, 3 in scrambled order; enough spread per class for a fit.
  const std::vector<double> base{0.0, 1.0, 2.0, 3.0, 4.0};
  for (int rep = 0; rep < 2; ++rep) {
    for (double v : base) {
      ds.values.push_back(v);
      ds.labels.push_back(5);
      ds.values.push_back(v + 10.0);
      ds.labels.push_back(-1);
    }
  }
  for (double v : base) {
    ds.values.push_back(v + 20.0);
    ds.labels.push_back(3);
  }
  const BayesModel model = fit_bayes(ds, cart_config(2, 100));
  CHECK(model.classes == std::vector<int>{-1, 3, 5});
  REQUIRE(model.priors.size() == 3);
  CHECK(model.priors[0] == doctest::Approx(10.0 / 25.0).epsilon(1e-15));
  CHECK(model.priors[1] == doctest::Approx(5.0 / 25.0).epsilon(1e-15));
  CHECK(model.priors[2] == doctest::Approx(10.0 / 25.0).epsilon(1e-15));
  REQUIRE(model.densities.size() == 3);
  CHECK(model.densities[0].support_lo() == 10.0);
  CHECK(model.densities[0].support_hi() == 14.0);
  CHECK(model.densities[1].support_lo() == 20.0);
  CHECK(model.densities[2].support_hi() == 4.0);
}

TEST_CASE("prediction follows prior times density region by region") {
  // Single-leaf trees make each class density exactly uniform over its own
  // support, so every decision below is arithmetic on priors and widths.
  LabeledDataset ds;
  for (int i = 0; i <= 4; ++i) {          // class 0: six points on [0, 4]
    ds.values.push_back(static_cast<double>(i));
    ds.labels.push_back(0);
  }
  ds.values.push_back(2.0);
  ds.labels.push_back(0);
  for (int i = 0; i <= 3; ++i) {          // class 1: four points on [10, 13]
    ds.values.push_back(10.0 + static_cast<double>(i));
    ds.labels.push_back(1);
  }
  const BayesModel model = fit_bayes(ds, cart_config(3, 100));
  REQUIRE(model.classes == std::vector<int>{0, 1});
  CHECK(model.priors[0] == doctest::Approx(0.6).epsilon(1e-15));

  CHECK(model.predict(1.7) == 0);    // inside class 0's support only
  CHECK(model.predict(12.2) == 1);   // inside class 1's support only
  CHECK(model.predict(0.0) == 0);    // support boundaries are inside
  CHECK(model.predict(13.0) == 1);
  // Outside both supports every density vanishes, so the larger prior wins.
  CHECK(model.predict(7.0) == 0);
  CHECK(model.predict(-50.0) == 0);
  CHECK(model.predict(50.0) == 0);
}

TEST_CASE("overlapping supports are resolved by the density heights") {
  // Class 0 uniform on [0, 4] (height 1/4), class 2 uniform on [3, 23]
  // (height 1/20), equal priors: on the overlap class 0 must win, past it
  // class 2 must.
  LabeledDataset ds;
  for (int i = 0; i <= 4; ++i) {
    ds.values.push_back(static_cast<double>(i));
    ds.labels.push_back(0);
    ds.values.push_back(3.0 + 5.0 * static_cast<double>(i));
    ds.labels.push_back(2);
  }
  const BayesModel model = fit_bayes(ds, cart_config(2, 100));
  CHECK(model.predict(3.5) == 0);
  CHECK(model.predict(10.0) == 2);
  // Equal priors outside both supports: the tie keeps the smaller label.
  CHECK(model.predict(-5.0) == 0);
  CHECK(model.predict(40.0) == 0);
}

TEST_CASE("classifier preconditions") {
  LabeledDataset one_class;
  for (int i = 0; i < 6; ++i) {
    one_class.values.push_back(static_cast<double>(i));
    one_class.labels.push_back(7);
  }
  CHECK_ERROR_MSG(fit_bayes(one_class, cart_config(2, 100)), infeasible,
                  "fewer than two classes");

  LabeledDataset mismatch;
  mismatch.values = {1.0, 2.0};
  mismatch.labels = {0};
  CHECK_ERROR(fit_bayes(mismatch, cart_config(2, 100)), invalid_argument);

  // A class whose values collapse to a point has no support to fit.
  LabeledDataset collapsed;
  for (int i = 0; i < 5; ++i) {
    collapsed.values.push_back(static_cast<double>(i));
    collapsed.labels.push_back(0);
    collapsed.values.push_back(4.25);
    collapsed.labels.push_back(1);
  }
  CHECK_ERROR(fit_bayes(collapsed, cart_config(2, 100)), degenerate_support);

  // Three distinct values per class are too few for the spline learner.
  LabeledDataset three;
  for (int rep = 0; rep < 3; ++rep) {
    for (int i = 0; i < 3; ++i) {
      three.values.push_back(static_cast<double>(i));
      three.labels.push_back(0);
      three.values.push_back(10.0 + static_cast<double>(i));
      three.labels.push_back(1);
    }
  }
  CHECK_ERROR(fit_bayes(three, spline_config(2)), infeasible);
  // The tree learner handles the same data fine.
  const BayesModel model = fit_bayes(three, cart_config(2, 100));
  CHECK(model.classes.size() == 2);
}

TEST_CASE("split experiment is deterministic and aggregates honestly") {
  const LabeledDataset ds = gaussian_twoclass(60, 41);
  const FitConfig cfg = cart_config(10, 15);
  const SplitExperimentResult a = split_experiment(ds, cfg, 5, 0.7, 17);
  const SplitExperimentResult b = split_experiment(ds, cfg, 5, 0.7, 17);

  REQUIRE(a.splits.size() == 5);
  CHECK(a.used == 5);  // plenty of both classes in every half
  for (std::size_t s = 0; s < 5; ++s) {
    CHECK(a.splits[s].split_index == s);
    CHECK_FALSE(a.splits[s].skipped);
    CHECK(a.splits[s].test_count == 120 - 84);  // floor(0.7 * 120) trains
    CHECK(a.splits[s].error_rate ==
          doctest::Approx(static_cast<double>(a.splits[s].errors) / 36.0)
              .epsilon(1e-15));
    CHECK(a.splits[s].error_rate == b.splits[s].error_rate);
    CHECK(a.splits[s].errors == b.splits[s].errors);
  }
  CHECK(a.mean_error == b.mean_error);
  CHECK(a.sd_error == b.sd_error);

  double mean = 0.0;
  for (const SplitOutcome& o : a.splits) mean += o.error_rate;
  mean /= 5.0;
  double ss = 0.0;
  for (const SplitOutcome& o : a.splits) {
    ss += (o.error_rate - mean) * (o.error_rate - mean);
  }
  CHECK(a.mean_error == doctest::Approx(mean).epsilon(1e-14));
  CHECK(a.sd_error == doctest::Approx(std::sqrt(ss / 4.0)).epsilon(1e-12));

  // Classes 3 apart with unit spread: far better than coin flipping.
  CHECK(a.mean_error < 0.35);
}

TEST_CASE("splits that cannot train are recorded as skipped, with a reason") {
  // Class 1 has only four distinct values, two copies each; whenever a
  // training half misses one of them the spline learner cannot fit and the
  // split must be skipped rather than counted.
  LabeledDataset ds;
  Rng rng(99);
  for (int i = 0; i < 40; ++i) {
    ds.values.push_back(-5.0 + 0.25 * static_cast<double>(i));
    ds.labels.push_back(0);
  }
  for (int rep = 0; rep < 2; ++rep) {
    for (int i = 0; i < 4; ++i) {
      ds.values.push_back(20.0 + static_cast<double>(i));
      ds.labels.push_back(1);
    }
  }
  const SplitExperimentResult res =
      split_experiment(ds, spline_config(3), 12, 0.7, 7);
  REQUIRE(res.splits.size() == 12);
  std::size_t used = 0;
  for (const SplitOutcome& o : res.splits) {
    if (o.skipped) {
      CHECK_FALSE(o.note.empty());
      CHECK(o.error_rate == 0.0);
    } else {
      ++used;
      CHECK(o.note.empty());
    }
  }
  CHECK(res.used == used);
  CHECK(res.used >= 1);
  CHECK(res.used < 12);  // the construction forces at least one skip
}

TEST_CASE("an experiment where no split can train reports infeasibility") {
  LabeledDataset ds;
  for (int i = 0; i < 8; ++i) {
    ds.values.push_back(static_cast<double>(i));
    ds.labels.push_back(0);
    ds.values.push_back(42.0);  // class 1 collapses to a single point
    ds.labels.push_back(1);
  }
  CHECK_ERROR_MSG(split_experiment(ds, cart_config(2, 100), 4, 0.7, 3),
                  infeasible, "every split was skipped");
}

TEST_CASE("split experiment parameter validation") {
  const LabeledDataset ds = gaussian_twoclass(20, 8);
  const FitConfig cfg = cart_config(2, 100);
  CHECK_ERROR(split_experiment(ds, cfg, 0, 0.7, 1), invalid_argument);
  CHECK_ERROR(split_experiment(ds, cfg, 2, 0.0, 1), invalid_argument);
  CHECK_ERROR(split_experiment(ds, cfg, 2, 1.0, 1), invalid_argument);
  CHECK_ERROR(split_experiment(ds, cfg, 2, 0.01, 1), invalid_argument);
}
